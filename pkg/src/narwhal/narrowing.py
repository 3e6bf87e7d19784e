"""(R,E)-narrowing: steps, trees, reachability goals, and the state key
used to merge renaming-equivalent nodes in the graph view.

A narrowing step unifies a subterm of the normalized source with a
renamed rule left-hand side using variant-based E-unification, replaces
the subterm with the instantiated right-hand side, and re-normalizes.
"""

from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Tuple

from .axunify import DEFAULT_ASSOC_BOUND
from .rewrite import InstrumentedTrace, innermost_positions, normalize
from .terms import (
    FAMILY_INPUT,
    FAMILY_RULE,
    FreshVars,
    Pos,
    Signature,
    Subst,
    Term,
    Var,
    canonicalize,
    replace_at,
    term_key,
    vars_of,
)
from .theory import RewriteTheory, Rule, rename_statement
from .variants import (
    DEFAULT_MAX_COUNT,
    DEFAULT_MAX_DEPTH,
    FVTree,
    variant_unify_terms,
)


@dataclass(frozen=True)
class Bounds:
    max_depth: int = DEFAULT_MAX_DEPTH
    max_count: int = DEFAULT_MAX_COUNT
    assoc_bound: int = DEFAULT_ASSOC_BOUND


@dataclass
class NarrowingStep:
    term: Term
    rule: Rule  # renamed-apart copy used for this step
    position: Pos
    rule_subst: Subst
    input_subst: Subst
    unifier: Subst  # full E-unifier (rule_subst ∪ input_subst)
    trace: InstrumentedTrace  # normalization of the yielded term
    fv_tree: FVTree  # witness of the E-unification
    incomplete: bool = False


def re_narrow_children(theory: RewriteTheory, t: Term,
                       fresh: Optional[FreshVars] = None,
                       bounds: Bounds = Bounds()) -> List[NarrowingStep]:
    """All one-step (R,E)-narrowings of a normalized term, in the
    deterministic rule / position / unifier order."""
    sig = theory.signature
    if fresh is None:
        fresh = FreshVars()
    t = canonicalize(sig, t)
    tvars = set(vars_of(t))
    out: List[NarrowingStep] = []
    for rule in theory.narrowing_rules:
        rlhs, rrhs, _ = rename_statement(sig, rule.lhs, rule.rhs,
                                         FAMILY_RULE, fresh)
        renamed = Rule(rule.label, rlhs, rrhs, narrowing=True)
        rvars = set(vars_of(rlhs)) | set(vars_of(rrhs))
        for pos, sub in innermost_positions(sig, t):
            sols, tree = variant_unify_terms(
                theory, sub, rlhs, max_depth=bounds.max_depth,
                max_count=bounds.max_count, fresh=fresh,
                assoc_bound=bounds.assoc_bound)
            for sigma in sols:
                replaced = replace_at(sig, t, pos, rrhs)
                nf, trace = normalize(theory, sigma.apply(sig, replaced))
                out.append(NarrowingStep(
                    term=nf,
                    rule=renamed,
                    position=pos,
                    rule_subst=sigma.restrict(rvars),
                    input_subst=sigma.restrict(tvars),
                    unifier=sigma.restrict(rvars | tvars),
                    trace=trace,
                    fv_tree=tree,
                    incomplete=not sols.complete))
    return out


@dataclass(frozen=True)
class ReachabilityGoal:
    input_term: Term
    target: Term
    max_solutions: int = 1
    max_depth: int = 5

    def goal_vars(self):
        return tuple(dict.fromkeys(vars_of(self.input_term) +
                                   vars_of(self.target)))


def check_goal(theory: RewriteTheory, goal: ReachabilityGoal, u: Term,
               path_subst: Subst, fresh: Optional[FreshVars] = None,
               bounds: Bounds = Bounds()):
    """Try to E-unify a node's term with the goal target.  Returns
    (targetUnifier γ, answer σγ restricted to the goal variables, all
    unifiers) or None."""
    sig = theory.signature
    target = path_subst.apply(sig, goal.target)
    sols, _tree = variant_unify_terms(
        theory, u, target, max_depth=bounds.max_depth,
        max_count=bounds.max_count, fresh=fresh,
        assoc_bound=bounds.assoc_bound)
    if not sols.solutions:
        return None
    gamma = sols.solutions[0]
    answer = path_subst.compose(sig, gamma).restrict(goal.goal_vars())
    return gamma, answer, tuple(sols.solutions)


@dataclass
class Solution:
    node_path: Tuple[int, ...]
    answer: Subst
    target_unifier: Subst
    depth: int


@dataclass
class TreeNode:
    id: int
    term: Term
    subst: Subst  # computed narrowing substitution (path, root vars)
    depth: int
    parent: Optional[int]
    step: Optional[NarrowingStep]
    children: List[int] = field(default_factory=list)


def solve_reachability(theory: RewriteTheory, goal: ReachabilityGoal,
                       bounds: Bounds = Bounds(),
                       fresh: Optional[FreshVars] = None):
    """Breadth-first narrowing search for ∃X: t →* t'.  Returns
    (solutions, nodes dict) with deterministic node ids."""
    sig = theory.signature
    if fresh is None:
        fresh = FreshVars()
    root_vars = tuple(dict.fromkeys(vars_of(goal.input_term)))
    nf, _ = normalize(theory, goal.input_term)
    nodes: Dict[int, TreeNode] = {
        0: TreeNode(0, nf, Subst({}), 0, None, None)}
    solutions: List[Solution] = []
    frontier = [0]
    next_id = 1

    def path_of(nid):
        path = []
        while nid is not None:
            path.append(nid)
            nid = nodes[nid].parent
        return tuple(reversed(path))

    while frontier and len(solutions) < goal.max_solutions:
        nid = frontier.pop(0)
        node = nodes[nid]
        hit = check_goal(theory, goal, node.term, node.subst, fresh, bounds)
        if hit is not None:
            gamma, answer, _all = hit
            solutions.append(Solution(path_of(nid), answer, gamma,
                                      node.depth))
            if len(solutions) >= goal.max_solutions:
                break
            continue
        if node.depth >= goal.max_depth:
            continue
        for step in re_narrow_children(theory, node.term, fresh, bounds):
            child_subst = node.subst.compose(sig, step.unifier) \
                .restrict(root_vars)
            child = TreeNode(next_id, step.term, child_subst,
                             node.depth + 1, nid, step)
            nodes[next_id] = child
            node.children.append(next_id)
            frontier.append(next_id)
            next_id += 1
    return solutions, nodes


# -- graph-view state keys ----------------------------------------------------


_KEY_VAR_CAP = 6


def canonical_state_key(sig: Signature, t: Term):
    """A key equal across terms that differ only by a sort-preserving
    variable bijection (modulo axioms): the least canonical form over
    renumberings of the variables.  Falls back to first-occurrence
    numbering when there are many variables."""
    t = canonicalize(sig, t)
    vs = list(dict.fromkeys(vars_of(t)))

    def renumber(order):
        ren = Subst({v: Var(f"v{i + 1}", v.sort, FAMILY_INPUT)
                     for i, v in enumerate(order)})
        return term_key(ren.apply(sig, t))

    if not vs:
        return term_key(t)
    if len(vs) > _KEY_VAR_CAP:
        return renumber(vs)
    best = None
    for order in permutations(vs):
        k = renumber(order)
        if best is None or k < best:
            best = k
    return best
