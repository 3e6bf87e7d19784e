"""Surface language: tokenizer, module parser, mixfix term parser, printers.

The accepted language is the unconditional Maude subset documented in
docs/surface-language.md.  Mixfix terms are parsed with a bottom-up span
chart whose candidate set is generated from the operator declarations; the
chart deduplicates alternatives by canonical form, so the pervasive
associativity ambiguity of juxtaposition collapses to a single reading.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    AmbiguousParse,
    SortError,
    SyntaxError_,
    UnknownSortOrOp,
    UnsupportedFeature,
)
from .terms import (
    FAMILY_INPUT,
    FAMILY_RULE,
    FAMILY_UNIF,
    App,
    OpDecl,
    Signature,
    Term,
    Var,
    build_signature,
    canonicalize,
    is_kind_name,
)
from .theory import Equation, RewriteTheory, Rule

_SELF_DELIMITING = "(),"

_UNSUPPORTED_KEYWORDS = {
    "ceq": "conditional equations",
    "crl": "conditional rules",
    "cmb": "conditional membership axioms",
    "mb": "membership axioms",
    "fmod": "functional modules",
    "omod": "object-oriented modules",
    "protecting": "module importation",
    "including": "module importation",
    "extending": "module importation",
    "pr": "module importation",
    "inc": "module importation",
    "ex": "module importation",
}


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str):
    """Whitespace-separated tokens; ( ) , are self-delimiting; *** and ---
    comments run to end of line."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for marker in ("***", "---"):
            idx = line.find(marker)
            if idx >= 0:
                line = line[:idx]
        col = 0
        cur = ""
        cur_start = 0
        for col, ch in enumerate(line + " ", 1):
            if ch.isspace() or ch in _SELF_DELIMITING:
                if cur:
                    out.append(Token(cur, lineno, cur_start))
                    cur = ""
                if ch in _SELF_DELIMITING:
                    out.append(Token(ch, lineno, col))
            else:
                if not cur:
                    cur_start = col
                cur += ch
    return out


# -- module parsing -----------------------------------------------------------


def parse_module(text: str) -> RewriteTheory:
    tokens = tokenize(text)
    if not tokens:
        raise SyntaxError_("empty input")
    pos = 0

    def cur():
        return tokens[pos] if pos < len(tokens) else None

    def expect(word):
        nonlocal pos
        t = cur()
        if t is None or t.text != word:
            got = t.text if t else "end of input"
            where = t or tokens[-1]
            raise SyntaxError_(f"expected '{word}', found '{got}'",
                               where.line, where.col)
        pos += 1
        return t

    expect("mod")
    name_tok = cur()
    if name_tok is None:
        raise SyntaxError_("missing module name")
    mod_name = name_tok.text
    pos += 1
    expect("is")

    statements = []
    current = []
    while True:
        t = cur()
        if t is None:
            raise SyntaxError_("missing 'endm'", tokens[-1].line, tokens[-1].col)
        if t.text == "endm":
            if current:
                raise SyntaxError_("statement not terminated by '.'",
                                   current[0].line, current[0].col)
            pos += 1
            break
        if t.text == "." :
            if current:
                statements.append(current)
                current = []
            pos += 1
            continue
        current.append(t)
        pos += 1
    if cur() is not None:
        t = cur()
        raise SyntaxError_(f"trailing input after endm: '{t.text}'", t.line, t.col)

    return _build_theory(mod_name, statements)


def _build_theory(mod_name, statements):
    sorts = []
    subsorts = []
    raw_ops = []     # (names, arg_sorts, result, attr tokens, head token)
    raw_vars = []    # (names, sort, head token)
    raw_eqs = []
    raw_rls = []
    synthetic = []

    for st in statements:
        head = st[0]
        kw = head.text
        if kw in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(
                f"unsupported feature: {_UNSUPPORTED_KEYWORDS[kw]} "
                f"(line {head.line})")
        if kw in ("sort", "sorts"):
            sorts.extend(t.text for t in st[1:])
        elif kw in ("subsort", "subsorts"):
            groups = [[]]
            for t in st[1:]:
                if t.text == "<":
                    groups.append([])
                else:
                    groups[-1].append(t.text)
            if len(groups) < 2 or any(not g for g in groups):
                raise SyntaxError_("malformed subsort declaration",
                                   head.line, head.col)
            for lo, hi in zip(groups, groups[1:]):
                for a in lo:
                    for b in hi:
                        subsorts.append((a, b))
        elif kw in ("op", "ops"):
            raw_ops.append(_split_op_statement(st, plural=(kw == "ops")))
        elif kw in ("var", "vars"):
            idx = next((i for i, t in enumerate(st) if t.text == ":"), None)
            if idx is None or idx + 2 != len(st):
                raise SyntaxError_("malformed variable declaration",
                                   head.line, head.col)
            raw_vars.append(([t.text for t in st[1:idx]], st[idx + 1].text, head))
        elif kw == "eq":
            raw_eqs.append(st)
        elif kw == "rl":
            raw_rls.append(st)
        else:
            raise SyntaxError_(f"unknown declaration keyword '{kw}'",
                               head.line, head.col)

    # first build: no identity terms yet, so identity terms can be parsed
    # against the rest of the signature
    ops_no_id = []
    for names, arg_sorts, result, attrs, head in raw_ops:
        for s in arg_sorts + [result]:
            if is_kind_name(s):
                inner = s[1:-1]
                if inner not in sorts and inner not in synthetic:
                    synthetic.append(inner)
        poly = any(a[0] == "poly" for a in attrs)
        for n in names:
            ops_no_id.append(OpDecl(n, tuple(arg_sorts), result,
                                    assoc=any(a[0] == "assoc" for a in attrs),
                                    comm=any(a[0] == "comm" for a in attrs),
                                    poly=poly))
    base_sig = build_signature(sorts + synthetic, subsorts, ops_no_id,
                               synthetic_sorts=synthetic)

    ops = []
    for names, arg_sorts, result, attrs, head in raw_ops:
        identity = None
        for kind, payload in attrs:
            if kind == "id":
                identity = _parse_term_tokens(base_sig, {}, payload)
        poly = any(a[0] == "poly" for a in attrs)
        for n in names:
            ops.append(OpDecl(n, tuple(arg_sorts), result,
                              assoc=any(a[0] == "assoc" for a in attrs),
                              comm=any(a[0] == "comm" for a in attrs),
                              identity=identity, poly=poly))
    sig = build_signature(sorts + synthetic, subsorts, ops,
                          synthetic_sorts=synthetic)

    var_decls = []
    varmap = {}
    for names, sort, head in raw_vars:
        if sort not in sig.sorts and not (is_kind_name(sort) and sort in sig.kinds):
            raise UnknownSortOrOp(f"unknown sort {sort} in variable declaration "
                                  f"(line {head.line})")
        for n in names:
            v = Var(n, sort)
            var_decls.append(v)
            varmap[n] = v

    equations = []
    eq_counter = 0
    for st in raw_eqs:
        eq_counter += 1
        label, lhs_toks, rhs_toks, attrs = _split_statement(
            st, "=", default_label=f"eq-{eq_counter}")
        lhs = _parse_term_tokens(sig, varmap, lhs_toks)
        rhs = _parse_term_tokens(sig, varmap, rhs_toks)
        _check_statement_kinds(sig, lhs, rhs, st[0], "equation")
        equations.append(Equation(label, lhs, rhs,
                                  variant=any(a[0] == "variant" for a in attrs)))

    rules = []
    rl_counter = 0
    seen_labels = set()
    for st in raw_rls:
        rl_counter += 1
        label, lhs_toks, rhs_toks, attrs = _split_statement(
            st, "=>", default_label=f"rl-{rl_counter}")
        if label in seen_labels:
            raise SyntaxError_(f"duplicate rule label '{label}'",
                               st[0].line, st[0].col)
        seen_labels.add(label)
        lhs = _parse_term_tokens(sig, varmap, lhs_toks)
        rhs = _parse_term_tokens(sig, varmap, rhs_toks)
        _check_statement_kinds(sig, lhs, rhs, st[0], "rule")
        rules.append(Rule(label, lhs, rhs,
                          narrowing=any(a[0] == "narrowing" for a in attrs)))

    return RewriteTheory(mod_name, sig, tuple(equations), tuple(rules),
                         tuple(var_decls))


def _check_statement_kinds(sig, lhs, rhs, head, what):
    kl = sig.kind_name(sig.least_sort(lhs))
    kr = sig.kind_name(sig.least_sort(rhs))
    if kl != kr:
        raise SortError(f"{what} sides lie in different kinds {kl} vs {kr} "
                        f"(line {head.line})")


def _split_op_statement(st, plural):
    """op/ops NAME... : ARGSORTS -> RESULT [attrs]"""
    head = st[0]
    toks = st[1:]
    colon = None
    for i, t in enumerate(toks):
        if t.text == ":":
            colon = i
            break
    if colon is None:
        raise SyntaxError_("missing ':' in operator declaration",
                           head.line, head.col)
    name_toks = toks[:colon]
    if not name_toks:
        raise SyntaxError_("missing operator name", head.line, head.col)
    if plural:
        names = [t.text for t in name_toks]
    else:
        names = ["".join(t.text for t in name_toks)]
    rest = toks[colon + 1:]
    arrow = None
    for i, t in enumerate(rest):
        if t.text == "->":
            arrow = i
            break
    if arrow is None:
        raise SyntaxError_("missing '->' in operator declaration",
                           head.line, head.col)
    arg_sorts = [t.text for t in rest[:arrow]]
    after = rest[arrow + 1:]
    if not after:
        raise SyntaxError_("missing result sort", head.line, head.col)
    result = after[0].text
    attrs = _parse_attrs(after[1:], head)
    return names, arg_sorts, result, attrs, head


_ATTR_KEYWORDS = {"assoc", "comm", "variant", "narrowing", "poly", "id:",
                  "left", "right"}


def _parse_attrs(toks, head):
    """Attribute bracket: '[assoc id: eps]' arrives as tokens that carry
    the brackets glued to the first and last word."""
    if not toks:
        return []
    texts = [t.text for t in toks]
    if not texts[0].startswith("[") or not texts[-1].endswith("]"):
        raise SyntaxError_(f"malformed attribute list near '{texts[0]}'",
                           head.line, head.col)
    texts[0] = texts[0][1:]
    texts[-1] = texts[-1][:-1]
    texts = [t for t in texts if t]
    attrs = []
    i = 0
    while i < len(texts):
        word = texts[i]
        if word in ("assoc", "comm", "variant", "narrowing"):
            attrs.append((word, None))
            i += 1
        elif word == "id:":
            j = i + 1
            payload = []
            while j < len(texts) and texts[j] not in _ATTR_KEYWORDS:
                payload.append(Token(texts[j], head.line, head.col))
                j += 1
            if not payload:
                raise SyntaxError_("missing identity term after id:",
                                   head.line, head.col)
            attrs.append(("id", _resplit(payload)))
            i = j
        elif word == "poly":
            # poly (1 2): consume through the closing paren
            j = i + 1
            while j < len(texts) and texts[j] != ")":
                j += 1
            attrs.append(("poly", None))
            i = j + 1
        else:
            raise UnsupportedFeature(f"unsupported operator attribute '{word}' "
                                     f"(line {head.line})")
    return attrs


def _resplit(tokens):
    """Re-tokenize glued payload tokens so parens separate."""
    out = []
    for t in tokens:
        for piece in tokenize(t.text):
            out.append(Token(piece.text, t.line, t.col))
    return out


def _split_statement(st, sep, default_label):
    """eq/rl [label] : LHS sep RHS [attrs]"""
    head = st[0]
    toks = st[1:]
    label = default_label
    if toks and toks[0].text.startswith("[") and toks[0].text.endswith("]"):
        label = toks[0].text[1:-1]
        if len(toks) < 2 or toks[1].text != ":":
            raise SyntaxError_("expected ':' after statement label",
                               head.line, head.col)
        toks = toks[2:]
    sep_idx = None
    depth = 0
    for i, t in enumerate(toks):
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
        elif t.text == sep and depth == 0:
            sep_idx = i
            break
    if sep_idx is None:
        raise SyntaxError_(f"missing '{sep}' in statement", head.line, head.col)
    lhs = toks[:sep_idx]
    rest = toks[sep_idx + 1:]
    # trailing attribute bracket, if any
    attrs = []
    for i in range(len(rest)):
        if rest[i].text.startswith("[") and rest[-1].text.endswith("]"):
            # candidate attribute bracket start: accept only if it parses
            try:
                attrs = _parse_attrs(rest[i:], head)
            except (SyntaxError_, UnsupportedFeature):
                continue
            rest = rest[:i]
            break
    if not lhs or not rest:
        raise SyntaxError_("empty statement side", head.line, head.col)
    return label, lhs, rest, attrs


# -- term parsing -------------------------------------------------------------


def parse_term(theory: RewriteTheory, text: str) -> Term:
    varmap = {v.name: v for v in theory.var_decls}
    return _parse_term_tokens(theory.signature, varmap, tokenize(text))


def _op_patterns(sig: Signature):
    cache = getattr(sig, "_pattern_cache", None)
    if cache is not None:
        return cache
    patterns = []
    for name in sorted({d.name for d in sig.ops}):
        d = sig.decl(name)
        if d.is_mixfix:
            elems = []
            parts = name.split("_")
            hole = 0
            for i, part in enumerate(parts):
                if i > 0:
                    elems.append(("hole", hole))
                    hole += 1
                for piece in _split_literal(part):
                    elems.append(("lit", piece))
            if hole != d.arity:
                raise SortError(f"mixfix pattern of {name} has {hole} holes "
                                f"for arity {d.arity}")
            patterns.append((name, elems))
        elif d.arity == 0:
            patterns.append((name, [("lit", name)]))
        else:
            elems = [("lit", name), ("lit", "(")]
            for k in range(d.arity):
                if k:
                    elems.append(("lit", ","))
                elems.append(("hole", k))
            elems.append(("lit", ")"))
            patterns.append((name, elems))
    sig._pattern_cache = patterns
    return patterns


def _split_literal(part):
    out = []
    cur = ""
    for ch in part:
        if ch in _SELF_DELIMITING:
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def _hole_ok(sig, name, hole_idx, sort):
    for d in sig.ops_named(name):
        if d.poly:
            return True
        want = d.arg_sorts[hole_idx]
        if sig.leq(sort, want) or sig.kind_name(sort) == sig.kind_name(want):
            return True
    return False


def _leaf_candidates(sig, varmap, tok: Token):
    """Interpretations of a single token: declared var, on-the-fly var."""
    out = []
    if tok.text in varmap:
        out.append(varmap[tok.text])
    elif ":" in tok.text and not tok.text.startswith(":"):
        name, _, sort = tok.text.partition(":")
        if sort in sig.sorts or (is_kind_name(sort) and sort in sig.kinds):
            family = FAMILY_INPUT
            if name.startswith("%"):
                family = FAMILY_RULE
            elif name.startswith("#"):
                family = FAMILY_UNIF
            out.append(Var(name, sort, family))
        else:
            raise UnknownSortOrOp(
                f"unknown sort '{sort}' in variable '{tok.text}' "
                f"(line {tok.line}, col {tok.col})")
    return out


def _parse_term_tokens(sig: Signature, varmap, tokens) -> Term:
    if not tokens:
        raise SyntaxError_("empty term")
    n = len(tokens)
    patterns = _op_patterns(sig)
    # chart[(i, j)] : dict canonical-term -> least sort
    chart = {}

    def add(span, term):
        entry = chart.setdefault(span, {})
        if term in entry:
            return
        try:
            sort = sig.least_sort(term)
        except SortError:
            return
        entry[term] = sort

    for i, tok in enumerate(tokens):
        for leaf in _leaf_candidates(sig, varmap, tok):
            add((i, i + 1), leaf)

    for width in range(1, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            if (tokens[i].text == "(" and tokens[j - 1].text == ")"
                    and width >= 3):
                for term in list(chart.get((i + 1, j - 1), {})):
                    add((i, j), term)
            for name, elems in patterns:
                for args in _match_pattern(sig, chart, tokens, i, j, name, elems):
                    term = canonicalize(sig, App(name, args))
                    add((i, j), term)

    results = chart.get((0, n), {})
    if not results:
        text = " ".join(t.text for t in tokens)
        raise SyntaxError_(f"cannot parse term: {text}",
                           tokens[0].line, tokens[0].col)
    if len(results) == 1:
        return next(iter(results))
    # least-sort preference among distinct canonical readings
    best = [t for t, s in results.items()
            if all(sig.leq(s, s2) for s2 in results.values())]
    if len(best) == 1:
        return best[0]
    alts = sorted(str(t) for t in results)
    raise AmbiguousParse("ambiguous term; parenthesize to disambiguate: "
                         + " | ".join(alts), alternatives=alts)


def _match_pattern(sig, chart, tokens, i, j, name, elems):
    arity = sum(1 for e in elems if e[0] == "hole")
    out = []

    def rec(pi, pos, acc):
        if pi == len(elems):
            if pos == j:
                out.append(tuple(acc))
            return
        kind, payload = elems[pi]
        if kind == "lit":
            if pos < j and tokens[pos].text == payload:
                rec(pi + 1, pos + 1, acc)
            return
        remaining = len(elems) - pi - 1
        for end in range(pos + 1, j - remaining + 1):
            entry = chart.get((pos, end))
            if not entry:
                continue
            for term, sort in entry.items():
                if _hole_ok(sig, name, payload, sort):
                    acc.append(term)
                    rec(pi + 1, end, acc)
                    acc.pop()

    rec(0, i, [])
    return out


# -- printing -----------------------------------------------------------------


def print_term_raw(t: Term) -> str:
    """Sort-annotation-free fallback printer (identity attributes, debug)."""
    if isinstance(t, Var):
        return str(t)
    if not t.args:
        return t.op
    return f"{t.op}({', '.join(print_term_raw(a) for a in t.args)})"


def print_term(theory_or_sig, t: Term) -> str:
    if isinstance(theory_or_sig, RewriteTheory):
        sig = theory_or_sig.signature
        declared = set(theory_or_sig.var_decls)
    else:
        sig = theory_or_sig
        declared = set()

    def pvar(v: Var) -> str:
        if v in declared and v.family == FAMILY_INPUT:
            return v.name
        return f"{v.name}:{v.sort}"

    def needs_parens(a: Term) -> bool:
        return isinstance(a, App) and bool(a.args) and sig.decl(a.op).is_mixfix

    def p(x: Term) -> str:
        if isinstance(x, Var):
            return pvar(x)
        if not x.args:
            return x.op
        d = sig.decl(x.op)
        rendered = []
        for a in x.args:
            s = p(a)
            rendered.append(f"({s})" if needs_parens(a) else s)
        if not d.is_mixfix:
            if d.assoc and len(rendered) > 2:
                # flattened assoc prefix op: print right-nested binary
                out = rendered[-1]
                for r in reversed(rendered[:-1]):
                    out = f"{x.op}({r}, {out})"
                return out
            return f"{x.op}({', '.join(rendered)})"
        parts = x.op.split("_")
        if d.assoc and len(x.args) > 2:
            sep = parts[1]
            pieces = [parts[0]] if parts[0] else []
            for k, r in enumerate(rendered):
                if k:
                    pieces.extend(_split_literal_spaced(sep))
                pieces.append(r)
            if parts[-1]:
                pieces.append(parts[-1])
            return " ".join(x for x in pieces if x)
        pieces = []
        ri = 0
        for k, part in enumerate(parts):
            if k > 0:
                pieces.append(rendered[ri])
                ri += 1
            pieces.extend(_split_literal_spaced(part))
        return " ".join(x for x in pieces if x)

    return p(canonicalize(sig, t))


def _split_literal_spaced(part):
    return _split_literal(part) if part else []


def print_theory(theory: RewriteTheory) -> str:
    sig = theory.signature
    lines = [f"mod {theory.name} is"]
    user_sorts = [s for s in sig.sorts if s not in sig.synthetic_sorts]
    if user_sorts:
        kw = "sorts" if len(user_sorts) > 1 else "sort"
        lines.append(f"  {kw} {' '.join(user_sorts)} .")
    for a, b in sig.subsort_pairs:
        lines.append(f"  subsort {a} < {b} .")
    for d in sig.ops:
        kw = "op"
        args = " ".join(d.arg_sorts)
        args = f"{args} " if args else ""
        attrs = d.attr_text()
        attrs = f" [{attrs}]" if attrs else ""
        lines.append(f"  {kw} {d.name} : {args}-> {d.result_sort}{attrs} .")
    for v in theory.var_decls:
        lines.append(f"  var {v.name} : {v.sort} .")
    for e in theory.equations:
        attr = " [variant]" if e.variant else ""
        lines.append(f"  eq [{e.label}] : {print_term(theory, e.lhs)} = "
                     f"{print_term(theory, e.rhs)}{attr} .")
    for r in theory.rules:
        attr = " [narrowing]" if r.narrowing else ""
        lines.append(f"  rl [{r.label}] : {print_term(theory, r.lhs)} => "
                     f"{print_term(theory, r.rhs)}{attr} .")
    lines.append("endm")
    return "\n".join(lines) + "\n"
