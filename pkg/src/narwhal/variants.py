"""Folding variant narrowing and equational unification.

FV-narrowing equationally narrows a term with the variant-flagged
equations modulo the structural axioms, folding away variants subsumed by
previously retained ones.  Equational unification of t1 and t2 runs
FV-narrowing on the goal `t1 =?= t2` and reads one E-unifier off every
branch that reaches the constant `tt`.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .axunify import (
    DEFAULT_ASSOC_BOUND,
    SolutionSet,
    _match,
    minimize_solutions,
    unify_mod_ax,
)
from .rewrite import InstrumentedTrace, innermost_positions, normalize
from .terms import (
    App,
    FAMILY_UNIF,
    FreshVars,
    Pos,
    Signature,
    Subst,
    Term,
    canonicalize,
    subterm_at,
    replace_at,
    term_key,
    vars_of,
)
from .theory import RewriteTheory, rename_statement
from .transform import TT, UNIF_OP

DEFAULT_MAX_DEPTH = 10
DEFAULT_MAX_COUNT = 512


@dataclass(frozen=True)
class Variant:
    term: Term
    subst: Subst
    depth: int


@dataclass(frozen=True)
class FVEdge:
    equation_label: str
    position: Pos
    unifier: Subst


@dataclass
class FVTreeNode:
    id: int
    variant: Variant
    parent: Optional[int]
    edge: Optional[FVEdge]
    trace: InstrumentedTrace
    children: List[int] = field(default_factory=list)
    folded_by: Optional[int] = None

    @property
    def is_success(self) -> bool:
        return isinstance(self.variant.term, App) and \
            self.variant.term.op == TT and not self.variant.term.args


@dataclass
class FVTree:
    root: int
    nodes: Dict[int, FVTreeNode]
    root_vars: Tuple
    complete: bool = True

    def success_nodes(self) -> List[FVTreeNode]:
        return [n for n in self.nodes.values()
                if n.is_success and n.folded_by is None]


def tuple_matches(sig: Signature, pairs) -> bool:
    """One consistent matcher across a sequence of (pattern, subject)
    term pairs, modulo axioms."""
    def go(i, b):
        if i == len(pairs):
            return True
        pat, subj = pairs[i]
        if b:
            pat = Subst(b).apply(sig, pat)
        for b2 in _match(sig, canonicalize(sig, pat),
                         canonicalize(sig, subj), b, False):
            if go(i + 1, b2):
                return True
        return False

    return go(0, {})


def variant_subsumes(sig: Signature, general: Variant, specific: Variant,
                     root_vars) -> bool:
    """True when one substitution delta sends the general variant's term
    and substitution (pointwise over the root variables) onto the
    specific one, modulo axioms."""
    pairs = [(general.term, specific.term)]
    for v in root_vars:
        pairs.append((general.subst.get(v, v), specific.subst.get(v, v)))
    return tuple_matches(sig, pairs)


def fv_narrow_step(theory: RewriteTheory, v: Variant, root_vars,
                   fresh: FreshVars,
                   assoc_bound: int = DEFAULT_ASSOC_BOUND):
    """All FV-narrowing children of a normalized variant, in the
    deterministic (equation, position, unifier) order.  Each entry is
    (edge, child variant, normalization trace)."""
    sig = theory.signature
    out = []
    positions = innermost_positions(sig, v.term)
    for eq in theory.variant_equations:
        eq_kind = sig.kind_name(sig.least_sort(eq.lhs))
        usable = [(pos, sub) for pos, sub in positions
                  if sig.kind_name(sig.least_sort(sub)) == eq_kind]
        if not usable:
            continue
        lhs, rhs, _ = rename_statement(sig, eq.lhs, eq.rhs, FAMILY_UNIF,
                                       fresh)
        for pos, sub in usable:
            sols = unify_mod_ax(sig, sub, lhs, assoc_bound=assoc_bound,
                                fresh=fresh)
            for sigma in sols:
                replaced = replace_at(sig, v.term, pos, rhs)
                nf, trace = normalize(theory, sigma.apply(sig, replaced))
                child_subst = _normalized_subst(
                    theory, v.subst.compose(sig, sigma).restrict(root_vars))
                child = Variant(nf, child_subst, v.depth + 1)
                out.append((FVEdge(eq.label, pos, sigma), child, trace))
    return out


def _normalized_subst(theory: RewriteTheory, s: Subst) -> Subst:
    """E0,Ax-normalize every range term (variants carry normalized
    substitutions; folding depends on it)."""
    return Subst({v: normalize(theory, t)[0] for v, t in s.mapping.items()})


def generate_variants(theory: RewriteTheory, t: Term,
                      max_depth: int = DEFAULT_MAX_DEPTH,
                      max_count: int = DEFAULT_MAX_COUNT,
                      fresh: Optional[FreshVars] = None,
                      assoc_bound: int = DEFAULT_ASSOC_BOUND) -> FVTree:
    """Breadth-first folding variant narrowing tree of a term."""
    sig = theory.signature
    if fresh is None:
        fresh = FreshVars()
    t = canonicalize(sig, t)
    root_vars = tuple(sorted(set(vars_of(t)), key=term_key))
    nf, trace0 = normalize(theory, t)
    root = FVTreeNode(0, Variant(nf, Subst({}), 0), None, None, trace0)
    nodes = {0: root}
    tree = FVTree(0, nodes, root_vars)
    frontier = [0]
    next_id = 1
    while frontier:
        nid = frontier.pop(0)
        node = nodes[nid]
        if node.variant.depth >= max_depth:
            tree.complete = False
            continue
        if node.is_success:
            continue
        retained = [nodes[i] for i in sorted(nodes)
                    if i != nid and nodes[i].folded_by is None]
        for edge, child, trace in fv_narrow_step(
                theory, node.variant, root_vars, fresh, assoc_bound):
            if len(nodes) >= max_count:
                tree.complete = False
                return tree
            cnode = FVTreeNode(next_id, child, nid, edge, trace)
            next_id += 1
            nodes[cnode.id] = cnode
            node.children.append(cnode.id)
            if not cnode.is_success:
                for w in retained:
                    if variant_subsumes(sig, w.variant, child, root_vars):
                        cnode.folded_by = w.id
                        break
            if cnode.folded_by is None:
                frontier.append(cnode.id)
                retained.append(cnode)
    return tree


def variant_unify_terms(theory: RewriteTheory, t1: Term, t2: Term,
                        max_depth: int = DEFAULT_MAX_DEPTH,
                        max_count: int = DEFAULT_MAX_COUNT,
                        fresh: Optional[FreshVars] = None,
                        assoc_bound: int = DEFAULT_ASSOC_BOUND
                        ) -> Tuple[SolutionSet, FVTree]:
    """E-unification via the `=?=`/`tt` encoding.  Returns the minimized
    set of E-unifiers (restricted to the problem variables) and the
    FV-tree witness."""
    sig = theory.signature
    pvars = sorted(set(vars_of(t1)) | set(vars_of(t2)), key=term_key)
    k1 = sig.kind_name(sig.least_sort(canonicalize(sig, t1)))
    k2 = sig.kind_name(sig.least_sort(canonicalize(sig, t2)))
    if k1 != k2:
        empty = FVTree(0, {0: FVTreeNode(
            0, Variant(canonicalize(sig, t1), Subst({}), 0), None, None,
            InstrumentedTrace(canonicalize(sig, t1), ()))}, tuple(pvars))
        return SolutionSet((), complete=True), empty
    goal = canonicalize(sig, App(UNIF_OP, (t1, t2)))
    tree = generate_variants(theory, goal, max_depth, max_count, fresh,
                             assoc_bound)
    raw = []
    seen = set()
    for n in sorted(tree.success_nodes(), key=lambda n: n.id):
        s = n.variant.subst.restrict(pvars)
        if s not in seen:
            seen.add(s)
            raw.append(s)
    minimal = minimize_solutions(sig, raw, pvars)
    return SolutionSet(tuple(minimal), complete=tree.complete), tree
