"""Equational normalization and one-step rule rewriting.

Normalization applies the oriented equations leftmost-innermost (first
equation in declaration order, first matcher in the deterministic matcher
order) until no equation applies anywhere, recording every internal step.
Rule rewriting matches rule left-hand sides anywhere in the normalized
term, honoring declared identities through matching extensions, and
re-normalizes each result.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ReductionBudgetExceeded
from .axunify import _match, match_mod_ax
from .terms import (
    App,
    Pos,
    Signature,
    Subst,
    Term,
    Var,
    canonicalize,
    replace_at,
)
from .theory import Equation, RewriteTheory, Rule

DEFAULT_BUDGET = 10000


@dataclass(frozen=True)
class ReductionStep:
    source: Term
    label: str
    position: Pos
    matcher: Subst
    result: Term


@dataclass(frozen=True)
class InstrumentedTrace:
    initial: Term
    steps: Tuple[ReductionStep, ...]

    @property
    def final(self) -> Term:
        return self.steps[-1].result if self.steps else self.initial

    def __len__(self):
        return len(self.steps)


def innermost_positions(sig: Signature, t: Term, path=()) -> List[Tuple[Pos, Term]]:
    """Application positions in leftmost-innermost order: argument
    positions first (left to right), then slices of an assoc sequence
    (narrowest first), then the node itself."""
    out: List[Tuple[Pos, Term]] = []
    if isinstance(t, Var):
        return out
    for i, a in enumerate(t.args, 1):
        out.extend(innermost_positions(sig, a, path + (i,)))
    if t.args and sig.is_assoc(t.op) and not sig.decl(t.op).comm \
            and len(t.args) > 2:
        n = len(t.args)
        for width in range(2, n):
            for lo in range(0, n - width + 1):
                sl = Pos(path, (lo, lo + width))
                out.append((sl, App(t.op, tuple(t.args[lo:lo + width]))))
    out.append((Pos(path), t))
    return out


def _funcs(t: Term, cache) -> frozenset:
    if isinstance(t, Var):
        return frozenset()
    hit = cache.get(t)
    if hit is None:
        hit = frozenset({t.op}).union(*(_funcs(a, cache) for a in t.args)) \
            if t.args else frozenset({t.op})
        cache[t] = hit
    return hit


def _find_redex(theory: RewriteTheory, t: Term):
    sig = theory.signature
    fcache = theory.__dict__.setdefault("_func_cache", {})
    eq_funcs = theory.__dict__.get("_eq_funcs")
    if eq_funcs is None:
        # ops with a live identity (and their identity constants) can
        # appear implicitly during matching, so they are never required
        loose = set()
        for name in sig._ops_by_name:
            d = sig.decl(name)
            if d is None or d.poly:
                continue
            if d.identity is not None and d.identity_axiom:
                loose.add(name)
                if isinstance(d.identity, App):
                    loose.add(d.identity.op)
        eq_funcs = [_funcs(eq.lhs, fcache) - loose
                    for eq in theory.equations]
        theory.__dict__["_eq_funcs"] = eq_funcs
    for pos, sub in innermost_positions(sig, t):
        sub_funcs = _funcs(sub, fcache)
        for eq, lhs_funcs in zip(theory.equations, eq_funcs):
            # matching can only bind variables to subject pieces, so
            # every function symbol of the lhs must occur in the subject
            if not lhs_funcs <= sub_funcs:
                continue
            b = next(_match(sig, eq.lhs, sub, {}, False), None)
            if b is not None:
                return pos, eq, Subst(b)
    return None


def normalize(theory: RewriteTheory, t: Term,
              budget: int = DEFAULT_BUDGET) -> Tuple[Term, InstrumentedTrace]:
    """Reduce to the E0,Ax-irreducible form, returning the instrumented
    trace of every reduction step taken."""
    sig = theory.signature
    cache = theory.__dict__.setdefault("_norm_cache", {})
    cached = cache.get(t)
    if cached is not None:
        return cached
    result = _normalize_uncached(theory, t, budget)
    cache[t] = result
    if result[0] != t:
        cache[result[0]] = (result[0], InstrumentedTrace(result[0], ()))
    return result


def _normalize_uncached(theory, t, budget):
    sig = theory.signature
    cur = canonicalize(sig, t)
    initial = cur
    steps: List[ReductionStep] = []
    while True:
        hit = _find_redex(theory, cur)
        if hit is None:
            return cur, InstrumentedTrace(initial, tuple(steps))
        if len(steps) >= budget:
            raise ReductionBudgetExceeded(
                f"no normal form within {budget} reduction steps")
        pos, eq, sigma = hit
        rhs = sigma.apply(sig, eq.rhs)
        nxt = replace_at(sig, cur, pos, rhs)
        steps.append(ReductionStep(cur, eq.label, pos, sigma, nxt))
        cur = nxt


@dataclass(frozen=True)
class RewriteResult:
    rule: Rule
    position: Pos
    matcher: Subst
    replaced: Term
    result: Term
    trace: InstrumentedTrace


def one_step_rewrites(theory: RewriteTheory, t: Term,
                      budget: int = DEFAULT_BUDGET) -> List[RewriteResult]:
    """All one-step rule rewrites of an irreducible term, results
    re-normalized.  Deterministic order: rule, then position, then
    matcher."""
    sig = theory.signature
    t = canonicalize(sig, t)
    out: List[RewriteResult] = []
    positions = innermost_positions(sig, t)
    for rule in theory.rules:
        for pos, sub in positions:
            for m in match_mod_ax(sig, rule.lhs, sub, identity_ext=True):
                rhs = m.subst.apply(sig, rule.rhs)
                replaced = replace_at(sig, t, pos, rhs)
                nf, trace = normalize(theory, replaced, budget)
                out.append(RewriteResult(rule, pos, m.subst, replaced,
                                         nf, trace))
    return out


def replay_step(theory: RewriteTheory, step: ReductionStep) -> bool:
    """Independently re-apply a recorded reduction step."""
    sig = theory.signature
    eq = next(e for e in theory.equations if e.label == step.label)
    rhs = step.matcher.apply(sig, eq.rhs)
    return replace_at(sig, step.source, step.position, rhs) == step.result
