"""Shared fixtures: corpus theories, a mixed-axiom test signature, and
seeded random term generation for the property suites."""

import itertools
import random

import pytest

from narwhal import corpus_text
from narwhal.modlang import parse_module
from narwhal.terms import App, Var, canonicalize

TESTSIG_TEXT = """
mod TESTSIG is
  sort Elt .
  op a : -> Elt .
  op b : -> Elt .
  op c : -> Elt .
  op e : -> Elt .
  op f : Elt Elt -> Elt .
  op g : Elt Elt -> Elt [comm] .
  op h : Elt Elt -> Elt [assoc] .
  op m : Elt Elt -> Elt [assoc comm] .
  op u : Elt Elt -> Elt [assoc comm id: e] .
endm
"""

CONSTS = ("a", "b", "c", "e")
BINOPS = ("f", "g", "h", "m", "u")
VARS = ("X", "Y", "Z")


@pytest.fixture(scope="session")
def testsig():
    return parse_module(TESTSIG_TEXT)


@pytest.fixture(scope="session")
def critical():
    return parse_module(corpus_text("critical-section.maude"))


@pytest.fixture(scope="session")
def grammar():
    return parse_module(corpus_text("grammar-int.maude"))


@pytest.fixture(scope="session")
def commmult():
    return parse_module(corpus_text("comm-mult.maude"))


def random_term(rng, depth=3, ground=False, ops=BINOPS):
    """A random Elt term over the TESTSIG operators."""
    if depth <= 0 or rng.random() < 0.3:
        if not ground and rng.random() < 0.4:
            return Var(rng.choice(VARS), "Elt")
        return App(rng.choice(CONSTS), ())
    op = rng.choice(ops)
    width = 2 if op == "f" or op == "g" else rng.choice((2, 2, 3))
    return App(op, tuple(random_term(rng, depth - 1, ground, ops)
                         for _ in range(width)))


def ground_pool(max_depth=1):
    """Small deterministic pool of ground terms for substitutions."""
    pool = [App(ctor, ()) for ctor in CONSTS]
    if max_depth >= 1:
        pool.append(App("f", (App("a", ()), App("b", ()))))
        pool.append(App("m", (App("a", ()), App("a", ()))))
    return pool


def ground_substs(variables, pool):
    """All total ground substitutions over the pool, as dicts."""
    variables = list(variables)
    for combo in itertools.product(pool, repeat=len(variables)):
        yield dict(zip(variables, combo))


def canon(theory, t):
    return canonicalize(theory.signature, t)
