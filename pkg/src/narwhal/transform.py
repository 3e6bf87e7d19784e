"""Program transformations that prepare a theory for unification and
narrowing: the `=?=`/`tt` infrastructure with one unification equation per
kind, the elimination of assoc+id operators in favor of explicit variant
equations, and executability diagnostics.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import NameClash, UnsupportedAxCombination
from .terms import (
    App,
    FAMILY_INPUT,
    OpDecl,
    Var,
    build_signature,
    vars_of,
)
from .theory import Equation, RewriteTheory

UNIF_OP = "_=?=_"
TT = "tt"
BOOL_SORT = "Bool"
BOOL_KIND = "[Bool]"


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error", "warning" or "info"
    code: str
    message: str
    rule_label: Optional[str] = None


@dataclass
class TransformReport:
    added_ops: List[str] = field(default_factory=list)
    added_equations: List[str] = field(default_factory=list)
    replaced_ops: List[str] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)

    def merged(self, other: "TransformReport") -> "TransformReport":
        return TransformReport(
            self.added_ops + other.added_ops,
            self.added_equations + other.added_equations,
            self.replaced_ops + other.replaced_ops,
            self.diagnostics + other.diagnostics)


def _kind_order(sig) -> List[str]:
    """Kinds in order of their first declared sort."""
    seen = []
    for s in sig.sorts:
        k = sig.kind_name(s)
        if k not in seen:
            seen.append(k)
    return seen


def add_unification_infrastructure(
        theory: RewriteTheory) -> Tuple[RewriteTheory, TransformReport]:
    """Inject the kind-polymorphic `=?=` operator, the `tt` constant and
    one variant equation `X:[K] =?= X:[K] = tt` per kind ([Bool] included)."""
    sig = theory.signature
    if sig.ops_named(UNIF_OP) or sig.ops_named(TT):
        raise NameClash(
            "unification infrastructure (=?= / tt) already present")
    report = TransformReport()
    sorts = list(sig.sorts)
    synthetic = set(sig.synthetic_sorts)
    if BOOL_SORT not in sorts:
        sorts.append(BOOL_SORT)
        synthetic.add(BOOL_SORT)
    ops = list(sig.ops)
    ops.append(OpDecl(TT, (), BOOL_KIND))
    ops.append(OpDecl(UNIF_OP, ("Universal", "Universal"), BOOL_KIND,
                      poly=True))
    report.added_ops += [TT, UNIF_OP]
    sig2 = build_signature(sorts, sig.subsort_pairs, ops,
                           synthetic_sorts=synthetic)
    kinds = [BOOL_KIND] + [k for k in _kind_order(sig2) if k != BOOL_KIND]
    equations = list(theory.equations)
    for k in kinds:
        x = Var("X", k, FAMILY_INPUT)
        label = f"unif-{k}"
        equations.append(Equation(label, App(UNIF_OP, (x, x)),
                                  App(TT, ()), variant=True))
        report.added_equations.append(label)
    out = theory.with_(signature=sig2, equations=tuple(equations))
    return out, report


def transform_au(theory: RewriteTheory) -> Tuple[RewriteTheory,
                                                 TransformReport]:
    """Replace every assoc+id operator by an assoc-only declaration plus
    the variant equations AU1 `f(e,X)=X`, AU2 `f(X,e)=X` and AU3
    `f(X,e,Y)=f(X,Y)`.  The identity element is remembered on the
    declaration (for rule-matching extensions) but its axiom is retired.
    ACU and plain-id operators stay native."""
    sig = theory.signature
    report = TransformReport()
    targets = [d for d in sig.ops
               if d.assoc and not d.comm and d.identity is not None
               and d.identity_axiom]
    if not targets:
        return theory, report
    ops = []
    for d in sig.ops:
        if d in targets:
            ops.append(OpDecl(d.name, d.arg_sorts, d.result_sort,
                              assoc=True, comm=False, identity=d.identity,
                              identity_axiom=False))
            report.replaced_ops.append(d.name)
        else:
            ops.append(d)
    sig2 = build_signature(sig.sorts, sig.subsort_pairs, ops,
                           synthetic_sorts=sig.synthetic_sorts)
    equations = list(theory.equations)
    many = len(targets) > 1
    for d in targets:
        s = d.result_sort
        e = d.identity
        x = Var("X", s, FAMILY_INPUT)
        y = Var("Y", s, FAMILY_INPUT)
        suffix = f"-{d.name}" if many else ""
        trio = [
            (f"AU1{suffix}", App(d.name, (e, x)), x),
            (f"AU2{suffix}", App(d.name, (x, e)), x),
            (f"AU3{suffix}", App(d.name, (x, e, y)), App(d.name, (x, y))),
        ]
        for label, lhs, rhs in trio:
            equations.append(Equation(label, lhs, rhs, variant=True))
            report.added_equations.append(label)
    out = theory.with_(signature=sig2, equations=tuple(equations))
    return out, report


def check_executability(theory: RewriteTheory) -> List[Diagnostic]:
    """Static diagnostics: non-topmost narrowing rules, extra right-hand
    side variables, and axiom combinations we cannot execute."""
    sig = theory.signature
    out: List[Diagnostic] = []
    arg_kinds = {sig.kind_name(s) for d in sig.ops for s in d.arg_sorts
                 if not d.poly}
    for r in theory.rules:
        state_kind = sig.kind_name(sig.least_sort(r.lhs))
        if state_kind in arg_kinds:
            out.append(Diagnostic(
                "warning", "non-topmost",
                f"rule {r.label} rewrites sort kind {state_kind}, which "
                "occurs below other operators: narrowing completeness "
                "is not guaranteed", r.label))
        extra = [v for v in vars_of(r.rhs) if v not in vars_of(r.lhs)]
        if extra:
            names = ", ".join(v.name for v in extra)
            out.append(Diagnostic(
                "info", "extra-rhs-vars",
                f"rule {r.label} introduces right-hand side "
                f"variables {names}", r.label))
    for d in sig.ops:
        if d.assoc and not d.comm and d.identity is not None \
                and d.identity_axiom:
            out.append(Diagnostic(
                "error", "unsupported-axioms",
                f"operator {d.name} is assoc with a live identity; run the "
                "AU transformation"))
    return out


def transform_for_session(theory: RewriteTheory) -> Tuple[RewriteTheory,
                                                          TransformReport]:
    """The full automatic pipeline: AU elimination, then the unification
    infrastructure, then diagnostics on the result."""
    t1, r1 = transform_au(theory)
    t2, r2 = add_unification_infrastructure(t1)
    report = r1.merged(r2)
    report.diagnostics.extend(check_executability(t2))
    return t2, report
