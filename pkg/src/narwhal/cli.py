"""Batch command-line entry points over the engine."""

import json
import sys
import traceback

import click

from .axunify import DEFAULT_ASSOC_BOUND, unify_mod_ax
from .errors import NarwhalError
from .modlang import parse_module, parse_term, print_term, print_theory
from .narrowing import Bounds, ReachabilityGoal, solve_reachability
from .rewrite import normalize
from .session import SessionStore, apply_op
from .terms import Subst
from .transform import transform_for_session
from .variants import (
    DEFAULT_MAX_COUNT,
    DEFAULT_MAX_DEPTH,
    variant_unify_terms,
)


def _load(module_path: str):
    try:
        with open(module_path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise click.UsageError(f"cannot read module: {exc}")
    return parse_module(text)


def _subst_lines(theory, s: Subst):
    if s.is_identity():
        return ["  (identity)"]
    return [f"  {print_term(theory, v)} / {print_term(theory, t)}"
            for v, t in sorted(s.mapping.items(),
                               key=lambda kv: kv[0].name)]


def _subst_dict(theory, s: Subst):
    return {print_term(theory, v): print_term(theory, t)
            for v, t in sorted(s.mapping.items(),
                               key=lambda kv: kv[0].name)}


def _emit(data):
    click.echo(json.dumps(data, indent=2, sort_keys=False))


_format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "structured"]),
    default="text", show_default=True, help="Output format.")


@click.group()
def cli():
    """Symbolic exploration workbench for rewrite theories."""


@cli.command()
@click.argument("module_path")
@click.argument("term_text")
@click.option("--trace", is_flag=True, help="Print the instrumented steps.")
@click.option("--budget", default=10000, show_default=True,
              help="Maximum number of reduction steps.")
@_format_option
def reduce(module_path, term_text, trace, budget, fmt):
    """Reduce TERM_TEXT to its normal form in MODULE_PATH."""
    theory = _load(module_path)
    term = parse_term(theory, term_text)
    nf, tr = normalize(theory, term, budget)
    if fmt == "structured":
        _emit({
            "input": print_term(theory, term),
            "normalForm": print_term(theory, nf),
            "steps": [
                {"source": print_term(theory, s.source),
                 "equation": s.label,
                 "position": str(s.position),
                 "matcher": _subst_dict(theory, s.matcher),
                 "result": print_term(theory, s.result)}
                for s in tr.steps
            ] if trace else None,
        })
        return
    if trace:
        for i, s in enumerate(tr.steps, 1):
            click.echo(f"{i}. {print_term(theory, s.source)}")
            click.echo(f"   --[{s.label} at {s.position}]--> "
                       f"{print_term(theory, s.result)}")
    click.echo(print_term(theory, nf))


@cli.command("unify-ax")
@click.argument("module_path")
@click.argument("t1_text")
@click.argument("t2_text")
@click.option("--assoc-bound", default=DEFAULT_ASSOC_BOUND,
              show_default=True,
              help="Per-variable budget for associative splitting.")
@_format_option
def unify_ax(module_path, t1_text, t2_text, assoc_bound, fmt):
    """Unify two terms modulo the module's axioms."""
    theory = _load(module_path)
    t1 = parse_term(theory, t1_text)
    t2 = parse_term(theory, t2_text)
    sols = unify_mod_ax(theory.signature, t1, t2, assoc_bound)
    if fmt == "structured":
        _emit({
            "unifiers": [_subst_dict(theory, s) for s in sols.solutions],
            "complete": sols.complete,
        })
        return
    if not sols.solutions:
        click.echo("No unifiers.")
    for i, s in enumerate(sols.solutions, 1):
        click.echo(f"Unifier {i}:")
        for line in _subst_lines(theory, s):
            click.echo(line)
    if not sols.complete:
        click.echo("(incomplete: associative splitting was bounded)")


@cli.command("variant-unify")
@click.argument("module_path")
@click.argument("t1_text")
@click.argument("t2_text")
@click.option("--max-depth", default=DEFAULT_MAX_DEPTH, show_default=True)
@click.option("--max-count", default=DEFAULT_MAX_COUNT, show_default=True)
@click.option("--assoc-bound", default=DEFAULT_ASSOC_BOUND,
              show_default=True)
@_format_option
def variant_unify(module_path, t1_text, t2_text, max_depth, max_count,
                  assoc_bound, fmt):
    """E-unify two terms by folding variant narrowing."""
    base = _load(module_path)
    theory, _report = transform_for_session(base)
    t1 = parse_term(theory, t1_text)
    t2 = parse_term(theory, t2_text)
    sols, _tree = variant_unify_terms(theory, t1, t2, max_depth, max_count,
                                      assoc_bound=assoc_bound)
    summary = "complete" if sols.complete else "incomplete"
    if fmt == "structured":
        _emit({
            "unifiers": [_subst_dict(theory, s) for s in sols.solutions],
            "summary": summary,
        })
        return
    if not sols.solutions:
        click.echo("No unifiers.")
    for i, s in enumerate(sols.solutions, 1):
        click.echo(f"Unifier {i}:")
        for line in _subst_lines(theory, s):
            click.echo(line)
    click.echo(summary)


@cli.command()
@click.argument("module_path")
@_format_option
def transform(module_path, fmt):
    """Print the module after the equational-unification transform."""
    base = _load(module_path)
    theory, report = transform_for_session(base)
    if fmt == "structured":
        _emit({
            "transformed": print_theory(theory),
            "addedOps": list(report.added_ops),
            "addedEquations": list(report.added_equations),
            "replacedOps": list(report.replaced_ops),
            "diagnostics": [
                {"level": d.level, "code": d.code, "message": d.message,
                 "rule": d.rule_label}
                for d in report.diagnostics
            ],
        })
        return
    click.echo(print_theory(theory))
    for d in report.diagnostics:
        click.echo(f"[{d.level}] {d.code}: {d.message}", err=True)


@cli.command()
@click.argument("module_path")
@click.argument("input_text")
@click.argument("goal_text")
@click.option("--max-solutions", default=1, show_default=True)
@click.option("--max-depth", default=5, show_default=True)
@click.option("--max-count", default=DEFAULT_MAX_COUNT, show_default=True)
@click.option("--assoc-bound", default=DEFAULT_ASSOC_BOUND,
              show_default=True)
@_format_option
def search(module_path, input_text, goal_text, max_solutions, max_depth,
           max_count, assoc_bound, fmt):
    """Narrowing reachability: GOAL_TEXT is `=>* <target term>`."""
    if not goal_text.lstrip().startswith("=>*"):
        raise click.UsageError("goal must start with '=>*'")
    target_text = goal_text.lstrip()[3:].strip()
    base = _load(module_path)
    theory, _report = transform_for_session(base)
    input_term = parse_term(theory, input_text)
    target = parse_term(theory, target_text)
    goal = ReachabilityGoal(input_term, target, max_solutions, max_depth)
    bounds = Bounds(DEFAULT_MAX_DEPTH, max_count, assoc_bound)
    solutions, _nodes = solve_reachability(theory, goal, bounds)
    if fmt == "structured":
        _emit({
            "solutions": [
                {"answer": _subst_dict(theory, s.answer),
                 "depth": s.depth}
                for s in solutions
            ],
            "exhausted": len(solutions) < max_solutions,
        })
        return
    for i, s in enumerate(solutions, 1):
        click.echo(f"Solution {i} (depth {s.depth}):")
        for line in _subst_lines(theory, s.answer):
            click.echo(line)
    if len(solutions) < max_solutions:
        click.echo("No more solutions within bounds.")


@cli.command("narrow-tree")
@click.argument("module_path")
@click.argument("input_text")
@click.option("--depth", default=3, show_default=True,
              help="Expansion depth, 1 to 5.")
@click.option("--target", default=None,
              help="Optional reachability target term.")
def narrow_tree(module_path, input_text, depth, target):
    """Dump the depth-bounded narrowing tree in the structured format."""
    try:
        with open(module_path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise click.UsageError(f"cannot read module: {exc}")
    store = SessionStore()
    session = store.create(text, "re-narrowing", input_text, target)
    apply_op(store, session.id, "expand-subtree",
             {"node": f"s{session.root}", "depth": depth})
    _emit(session.tree_wire())


@cli.command()
@click.option("--port", default=None, type=int,
              help="Listen port; defaults to NARWHAL_PORT or 8080.")
def serve(port):
    """Run the HTTP wire API."""
    from .server import main as serve_main
    serve_main(port)


def main(argv=None):
    try:
        result = cli.main(args=argv, standalone_mode=False)
        return 0 if result is None else result
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except NarwhalError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
