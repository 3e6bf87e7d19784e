"""Rewrite theories: a signature plus oriented equations and rules."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .terms import Signature, Term, Subst, vars_of


@dataclass(frozen=True)
class Equation:
    label: str
    lhs: Term
    rhs: Term
    variant: bool = False


@dataclass(frozen=True)
class Rule:
    label: str
    lhs: Term
    rhs: Term
    narrowing: bool = False


@dataclass(frozen=True)
class RewriteTheory:
    """(Sigma, E0, Ax, R): axioms live on the signature's operators."""

    name: str
    signature: Signature
    equations: tuple = ()
    rules: tuple = ()
    # declared module variables, for parsing terms relative to the module
    var_decls: tuple = ()  # tuple of Var

    @property
    def variant_equations(self):
        return tuple(e for e in self.equations if e.variant)

    @property
    def narrowing_rules(self):
        return tuple(r for r in self.rules if r.narrowing)

    def with_(self, **kw) -> "RewriteTheory":
        return replace(self, **kw)


def rename_statement(sig: Signature, lhs: Term, rhs: Term, family, fresh):
    """Rename a rule/equation apart, covering extra right-hand-side vars."""
    all_vars = dict.fromkeys(vars_of(lhs) + vars_of(rhs))
    ren = Subst({v: fresh.make(family, v.sort) for v in all_vars})
    return ren.apply(sig, lhs), ren.apply(sig, rhs), ren
