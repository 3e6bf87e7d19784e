"""narwhal: an interactive symbolic-execution workbench for rewrite theories.

Parses a Maude-subset module language, rewrites modulo axioms, computes
equational unifiers by folding variant narrowing, performs (R,E)-narrowing,
and serves interactive exploration sessions over HTTP.
"""
from importlib import resources

from .errors import NarwhalError
from .modlang import parse_module, parse_term, print_term, print_theory
from .terms import App, FreshVars, Pos, Signature, Subst, Term, Var
from .theory import Equation, RewriteTheory, Rule

__all__ = [
    "App", "Equation", "FreshVars", "NarwhalError", "Pos", "RewriteTheory",
    "Rule", "Signature", "Subst", "Term", "Var", "corpus_text",
    "parse_module", "parse_term", "print_term", "print_theory",
]

__version__ = "0.1.0"


def corpus_text(name: str) -> str:
    """Text of a bundled .maude corpus module (e.g. 'grammar-int')."""
    if not name.endswith(".maude"):
        name += ".maude"
    return resources.files("narwhal.corpus").joinpath(name).read_text()
