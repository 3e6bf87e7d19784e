"""Matching and unification modulo axioms, checked against brute-force
oracles: contiguous splits for associativity, multiset partitions for AC,
and ground-instance enumeration for completeness."""

import itertools
import random

import pytest

from narwhal.axunify import (
    match_mod_ax,
    minimize_solutions,
    subst_matches,
    unify_mod_ax,
)
from narwhal.modlang import parse_term
from narwhal.terms import App, Subst, Var, ax_equal, canonicalize, vars_of

from conftest import ground_pool, ground_substs, random_term


def A(name, *args):
    return App(name, tuple(args))


a, b, c, e = A("a"), A("b"), A("c"), A("e")
X, Y, Z = Var("X", "Elt"), Var("Y", "Elt"), Var("Z", "Elt")


def assert_sound_matchers(sig, pattern, subject, matchers,
                          identity_ext=False):
    for m in matchers:
        if m.slice is None:
            assert ax_equal(sig, m.subst.apply(sig, pattern), subject)


class TestFreeAndCommMatching:
    def test_free_match(self, testsig):
        sig = testsig.signature
        ms = match_mod_ax(sig, A("f", X, Y), A("f", a, b))
        assert len(ms) == 1
        assert ms[0].subst.get(X) == a and ms[0].subst.get(Y) == b

    def test_comm_match_both_orders(self, testsig):
        sig = testsig.signature
        ms = match_mod_ax(sig, A("g", X, a), A("g", a, b))
        assert len(ms) == 1
        assert ms[0].subst.get(X) == b

    def test_nonlinear_pattern(self, testsig):
        sig = testsig.signature
        assert not match_mod_ax(sig, A("f", X, X), A("f", a, b))
        assert match_mod_ax(sig, A("f", X, X), A("f", a, a))


class TestAssocMatching:
    def test_paper_six_splits(self, grammar):
        """`L1 U L2` against `0 A 2`: exactly the six three-way splits
        where only the edge variables may go empty."""
        sig = grammar.signature
        pattern = parse_term(grammar, "L1 U L2")
        subject = parse_term(grammar, "0 A 2")
        ms = match_mod_ax(sig, pattern, subject, identity_ext=True)
        full = [m for m in ms if m.slice is None]
        assert len(full) == 6
        l1 = Var("L1", "String")
        u = Var("U", "String")
        eps = App("eps", ())
        # U is never empty and L1/L2 absorb eps at the edges
        mids = sorted(
            (str(m.subst.get(l1)), str(m.subst.get(u))) for m in full)
        assert all(uval != str(eps) for _lv, uval in mids)

    def test_assoc_split_oracle(self, testsig):
        """Every contiguous split of the subject is found, and nothing
        else, for a two-variable assoc pattern."""
        sig = testsig.signature
        subject = canonicalize(sig, A("h", a, b, c, a))
        ms = match_mod_ax(sig, A("h", X, Y), subject)
        got = {(str(m.subst.get(X)), str(m.subst.get(Y)))
               for m in ms if m.slice is None}
        elems = list(subject.args)
        expected = set()
        for cut in range(1, len(elems)):
            lhs = canonicalize(sig, A("h", *elems[:cut])) \
                if cut > 1 else elems[0]
            rhs = canonicalize(sig, A("h", *elems[cut:])) \
                if len(elems) - cut > 1 else elems[cut]
            expected.add((str(lhs), str(rhs)))
        assert got == expected

    def test_extension_slices(self, grammar):
        sig = grammar.signature
        pattern = parse_term(grammar, "1 1")
        subject = parse_term(grammar, "0 1 1 0")
        ms = match_mod_ax(sig, pattern, subject, extension=True)
        assert any(m.slice == (1, 3) for m in ms)


class TestACMatching:
    def test_ac_partition_oracle(self, testsig):
        """AC match `m(X, Y)` against a 4-element AC subject: solutions
        are exactly the nontrivial two-block multiset partitions."""
        sig = testsig.signature
        subject = canonicalize(sig, A("m", a, b, c, a))
        ms = match_mod_ax(sig, A("m", X, Y), subject)
        got = set()
        for m in ms:
            lhs, rhs = m.subst.get(X), m.subst.get(Y)
            got.add(frozenset([str(lhs), str(rhs)]))
        elems = list(subject.args)
        expected = set()
        for r in range(1, len(elems)):
            for idxs in itertools.combinations(range(len(elems)), r):
                part1 = [elems[i] for i in idxs]
                part2 = [elems[i] for i in range(len(elems))
                         if i not in idxs]
                mk = lambda p: canonicalize(sig, A("m", *p)) \
                    if len(p) > 1 else p[0]
                expected.add(frozenset([str(mk(part1)), str(mk(part2))]))
        assert got == expected

    def test_acu_variable_can_vanish(self, testsig):
        sig = testsig.signature
        ms = match_mod_ax(sig, A("u", X, a), a)
        assert any(m.subst.get(X) == e for m in ms)


class TestUnification:
    def test_comm_two_unifiers(self, critical):
        sig = critical.signature
        t1 = parse_term(critical, "X + Y")
        t2 = parse_term(critical, "0 + s(0)")
        sols = unify_mod_ax(sig, t1, t2)
        x = Var("X", "Int")
        got = {(str(s.get(x))) for s in sols.solutions}
        assert got == {"0", "s(0)"}

    def test_occurs_check(self, testsig):
        sig = testsig.signature
        sols = unify_mod_ax(sig, X, A("f", X, a))
        assert not sols.solutions and sols.complete

    def test_assoc_general_solution(self, testsig):
        # X h a =? b h Y needs the splitting solution X = b h Z
        sig = testsig.signature
        sols = unify_mod_ax(sig, A("h", X, a), A("h", b, Y))
        assert len(sols.solutions) == 2
        assert any(isinstance(s.get(X), App) and s.get(X).op == "h"
                   for s in sols.solutions)

    def test_assoc_truncation_flagged(self, testsig):
        sig = testsig.signature
        sols = unify_mod_ax(sig, A("h", X, a), A("h", b, Y),
                            assoc_bound=1)
        assert not sols.complete

    def test_soundness_property(self, testsig):
        """Criterion suite: unifier soundness, 200+ cases."""
        sig = testsig.signature
        rng = random.Random(31)
        checked = 0
        while checked < 210:
            t1 = random_term(rng, 2)
            t2 = random_term(rng, 2)
            sols = unify_mod_ax(sig, t1, t2)
            for s in sols.solutions:
                assert ax_equal(sig, s.apply(sig, t1), s.apply(sig, t2)), \
                    f"unsound unifier {s} for {t1} =? {t2}"
                checked += 1
            checked += 1

    def test_ground_completeness_property(self, testsig):
        """Criterion suite: ground completeness vs brute force, 200+
        cases (A-truncated problems excluded)."""
        sig = testsig.signature
        rng = random.Random(32)
        pool = ground_pool()
        checked = 0
        while checked < 200:
            t1 = random_term(rng, 2)
            t2 = random_term(rng, 2)
            pvars = list(dict.fromkeys(vars_of(t1) + vars_of(t2)))
            if len(pvars) > 2:
                continue
            sols = unify_mod_ax(sig, t1, t2)
            if not sols.complete:
                continue
            for gmap in ground_substs(pvars, pool):
                gs = Subst(gmap)
                if not ax_equal(sig, gs.apply(sig, t1), gs.apply(sig, t2)):
                    continue
                assert any(subst_matches(sig, s, gs, pvars)
                           for s in sols.solutions), \
                    f"missed ground unifier {gs} for {t1} =? {t2}"
                checked += 1
            checked += 1

    def test_minimize_drops_instances(self, testsig):
        sig = testsig.signature
        general = Subst({X: Y})
        specific = Subst({X: a, Y: a})
        out = minimize_solutions(sig, [general, specific], [X, Y])
        assert out == [general]

    def test_deterministic_order(self, testsig):
        sig = testsig.signature
        s1 = unify_mod_ax(sig, A("m", X, Y), A("m", a, b, c)).solutions
        s2 = unify_mod_ax(sig, A("m", X, Y), A("m", a, b, c)).solutions
        assert s1 == s2
