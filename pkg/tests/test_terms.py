"""Canonical forms, positions, substitutions, and Ax-equality."""

import itertools
import random

import pytest

from narwhal.errors import CyclicSubsorts, SortViolation
from narwhal.modlang import parse_module, parse_term
from narwhal.terms import (
    App,
    Pos,
    Subst,
    Var,
    all_positions,
    ax_equal,
    canonicalize,
    equal_mod_ax_renaming,
    replace_at,
    subterm_at,
    term_key,
    vars_of,
)

from conftest import random_term


def A(name, *args):
    return App(name, tuple(args))


a, b, c, e = A("a"), A("b"), A("c"), A("e")
X, Y, Z = Var("X", "Elt"), Var("Y", "Elt"), Var("Z", "Elt")


class TestSorts:
    def test_subsort_closure(self, grammar):
        sig = grammar.signature
        assert sig.leq("TSymbol", "String")
        assert sig.leq("NSymbol", "String")
        assert not sig.leq("String", "TSymbol")
        assert sig.leq("String", "String")

    def test_least_sort(self, grammar):
        sig = grammar.signature
        t = parse_term(grammar, "0 1")
        assert sig.least_sort(t) == "String"
        assert sig.least_sort(parse_term(grammar, "0")) == "TSymbol"

    def test_cyclic_subsorts_rejected(self):
        with pytest.raises(CyclicSubsorts):
            parse_module("""
            mod BAD is
              sorts A B .
              subsort A < B .
              subsort B < A .
            endm
            """)


class TestCanonicalize:
    def test_assoc_flattening(self, testsig):
        sig = testsig.signature
        t1 = canonicalize(sig, A("h", A("h", a, b), c))
        t2 = canonicalize(sig, A("h", a, A("h", b, c)))
        assert t1 == t2
        assert len(t1.args) == 3

    def test_comm_sorting(self, testsig):
        sig = testsig.signature
        assert canonicalize(sig, A("g", b, a)) == canonicalize(
            sig, A("g", a, b))

    def test_ac_multiset(self, testsig):
        sig = testsig.signature
        t1 = canonicalize(sig, A("m", A("m", c, a), b))
        t2 = canonicalize(sig, A("m", b, A("m", a, c)))
        assert t1 == t2

    def test_live_identity_collapses(self, testsig):
        sig = testsig.signature
        assert canonicalize(sig, A("u", a, e)) == a
        assert canonicalize(sig, A("u", e, e)) == e
        assert canonicalize(sig, A("u", e, A("u", a, b))) == \
            canonicalize(sig, A("u", a, b))

    def test_idempotence_property(self, testsig):
        """Criterion suite: canonicalization idempotence, 200+ cases."""
        sig = testsig.signature
        rng = random.Random(11)
        for _ in range(250):
            t = random_term(rng)
            once = canonicalize(sig, t)
            assert canonicalize(sig, once) == once

    def test_arg_permutation_invariance(self, testsig):
        sig = testsig.signature
        rng = random.Random(12)
        for _ in range(200):
            args = tuple(random_term(rng, 2) for _ in range(3))
            base = canonicalize(sig, A("m", *args))
            for perm in itertools.permutations(args):
                assert canonicalize(sig, A("m", *perm)) == base


class TestPositions:
    def test_root_str(self):
        assert str(Pos(())) == "Λ"
        assert str(Pos((2, 1))) == "2.1"

    def test_subterm_replace_roundtrip(self, testsig):
        sig = testsig.signature
        t = canonicalize(sig, A("f", A("f", a, b), c))
        for pos, sub in all_positions(t):
            assert subterm_at(t, pos) == sub
            assert replace_at(sig, t, pos, sub) == t

    def test_replace_recanonicalizes(self, testsig):
        sig = testsig.signature
        t = canonicalize(sig, A("g", b, X))
        got = replace_at(sig, t, Pos((1,)), c)
        # one argument replaced, comm order restored afterwards
        assert c in got.args
        assert got == canonicalize(sig, got)


class TestSubst:
    def test_identity_bindings_dropped(self):
        s = Subst({X: X, Y: a})
        assert s.domain == (Y,)

    def test_apply_sort_checked(self, grammar):
        # binding a Grammar variable to a String makes `_@_` ill-sorted
        g = Var("G", "Grammar")
        t = parse_term(grammar, "0 1 @ G:Grammar")
        bad = parse_term(grammar, "0 1")
        with pytest.raises(SortViolation):
            Subst({g: bad}).apply(grammar.signature, t)

    def test_composition_law_property(self, testsig):
        """Criterion suite: substitution composition, 200+ cases."""
        sig = testsig.signature
        rng = random.Random(13)
        checked = 0
        while checked < 220:
            t = random_term(rng)
            s1 = Subst({v: random_term(rng, 1)
                        for v in vars_of(t) if rng.random() < 0.7})
            mid = s1.apply(sig, t)
            s2 = Subst({v: random_term(rng, 1, ground=True)
                        for v in vars_of(mid)})
            comp = s1.compose(sig, s2)
            assert comp.apply(sig, t) == s2.apply(sig, mid)
            checked += 1

    def test_extend_composes_through(self, testsig):
        sig = testsig.signature
        s = Subst({X: A("f", Y, a)})
        s2 = s.extend(sig, Y, b)
        assert s2.get(X) == A("f", b, a)
        assert s2.get(Y) == b


class TestAxEquality:
    def test_ax_equal_modulo_axioms(self, testsig):
        sig = testsig.signature
        assert ax_equal(sig, A("m", a, A("m", b, c)), A("m", c, A("m", a, b)))
        assert not ax_equal(sig, A("h", a, b), A("h", b, a))

    def test_renaming_equality(self, testsig):
        sig = testsig.signature
        assert equal_mod_ax_renaming(sig, A("f", X, Y), A("f", Y, Z))
        assert not equal_mod_ax_renaming(sig, A("f", X, X), A("f", X, Y))

    def test_renaming_respects_sorts(self, grammar):
        sig = grammar.signature
        n = Var("N", "NSymbol")
        w = Var("W", "String")
        assert not equal_mod_ax_renaming(sig, n, w)

    def test_term_key_total_order(self, testsig):
        rng = random.Random(14)
        terms = [random_term(rng) for _ in range(50)]
        keys = sorted(terms, key=term_key)
        for t1, t2 in zip(keys, keys[1:]):
            assert term_key(t1) <= term_key(t2)
