"""Matching and unification modulo structural axioms.

Handles the axiom combinations natively supported at this level: free
operators, comm (C), assoc (A, with a bound on sequence splitting), assoc
comm (AC), assoc comm id (ACU), and id with or without comm (U, CU).
Assoc plus a live identity axiom (AU) is rejected here; the theory
transformation compiles it into explicit equations first.

Matching treats subject variables as constants.  For operators that carry
an identity element, rule matching may let the outermost sequence
variables absorb nothing (binding them to the identity); that behaviour is
opt-in via ``identity_ext`` because equation matching must not use it.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import UnsupportedAxCombination
from .terms import (
    App,
    FAMILY_UNIF,
    FreshVars,
    Signature,
    Subst,
    Term,
    Var,
    binding_ok,
    canonicalize,
    term_key,
    vars_of,
)

DEFAULT_ASSOC_BOUND = 4

Binding = Dict[Var, Term]


@dataclass(frozen=True)
class Match:
    """One matcher; ``slice`` is set when only a contiguous sub-slice of a
    flattened assoc subject was matched (extension matching)."""

    subst: Subst
    slice: Optional[Tuple[int, int]] = None


@dataclass
class SolutionSet:
    """Unifiers plus a completeness flag (False when the assoc bound
    truncated the search)."""

    solutions: Tuple[Subst, ...]
    complete: bool = True
    notes: Tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


# -- matching -----------------------------------------------------------------


def _seq_elems(t: Term, op: str) -> List[Term]:
    if isinstance(t, App) and t.op == op:
        return list(t.args)
    return [t]


def _mk_seq(sig: Signature, op: str, elems: List[Term]) -> Term:
    if len(elems) == 1:
        return elems[0]
    return canonicalize(sig, App(op, tuple(elems)))


def _bind(sig: Signature, b: Binding, v: Var, t: Term) -> Optional[Binding]:
    t = canonicalize(sig, t)
    prev = b.get(v)
    if prev is not None:
        return b if prev == t else None
    if not binding_ok(sig, v, t):
        return None
    b2 = dict(b)
    b2[v] = t
    return b2


def _subst_elems(sig: Signature, b: Binding, elems, op) -> List[Term]:
    """Apply the partial binding to pattern elements and re-flatten."""
    if not b:
        return list(elems)
    s = Subst(b)
    out = []
    for e in elems:
        e2 = s.apply(sig, e)
        out.extend(_seq_elems(e2, op))
    return out


def _match(sig: Signature, pat: Term, subj: Term,
           b: Binding, identity_ext: bool) -> Iterator[Binding]:
    subj = canonicalize(sig, subj)
    if isinstance(pat, Var):
        b2 = _bind(sig, b, pat, subj)
        if b2 is not None:
            yield b2
        return
    if not pat.args:
        if pat == subj:
            yield b
        return
    decls = sig.ops_named(pat.op)
    d = decls[0] if decls else None
    use_ident = (d is not None and d.identity is not None and
                 (identity_ext or d.identity_axiom))
    if d is not None and not d.poly and d.assoc:
        pelems = _subst_elems(sig, b, pat.args, pat.op)
        selems = _seq_elems(subj, pat.op)
        ident = d.identity if use_ident else None
        if d.comm:
            yield from _match_ac(sig, d, pelems, selems, b, identity_ext, ident)
        else:
            yield from _match_seq(sig, d, pelems, selems, b, identity_ext, ident)
        return
    if isinstance(subj, App) and subj.op == pat.op and \
            len(subj.args) == len(pat.args):
        if d is not None and d.comm and len(pat.args) == 2:
            for pa in ((0, 1), (1, 0)):
                for b2 in _match(sig, pat.args[0], subj.args[pa[0]],
                                 b, identity_ext):
                    yield from _match(sig, pat.args[1], subj.args[pa[1]],
                                      b2, identity_ext)
        else:
            stack = [b]
            for pa, sa in zip(pat.args, subj.args):
                stack = [b3 for b2 in stack
                         for b3 in _match(sig, pa, sa, b2, identity_ext)]
                if not stack:
                    break
            yield from stack
    if use_ident and not d.assoc and len(pat.args) == 2:
        # binary op with identity: one argument absorbs the identity and
        # the other matches the whole subject
        for i in (0, 1):
            for b2 in _match(sig, pat.args[i], d.identity, b, identity_ext):
                yield from _match(sig, pat.args[1 - i], subj, b2, identity_ext)


def _match_seq(sig: Signature, d, pelems: List[Term], selems: List[Term],
               b: Binding, identity_ext: bool,
               ident: Optional[Term]) -> Iterator[Binding]:
    """Assoc (no comm) matching: pattern elements bind contiguous blocks.

    Only the first and last pattern elements may absorb an empty block
    (binding to the identity), and only under identity extension.
    """
    edge_opts = [(False, False)]
    if ident is not None:
        if isinstance(pelems[0], Var):
            edge_opts.append((True, False))
        if len(pelems) > 1 and isinstance(pelems[-1], Var):
            edge_opts.append((False, True))
        if len(pelems) > 2 and isinstance(pelems[0], Var) and \
                isinstance(pelems[-1], Var):
            edge_opts.append((True, True))
    seen = set()
    for drop_l, drop_r in edge_opts:
        core = pelems[:]
        b0 = b
        if drop_l:
            b0 = _bind(sig, b0, core[0], ident)
            if b0 is None:
                continue
            core = core[1:]
        if drop_r:
            b0 = _bind(sig, b0, core[-1], ident)
            if b0 is None:
                continue
            core = core[:-1]
        if not core:
            continue
        core = _subst_elems(sig, b0, core, d.name)
        for b2 in _match_seq_strict(sig, d, core, selems, b0, identity_ext):
            key = tuple(sorted(b2.items(), key=lambda kv: term_key(kv[0])))
            if key not in seen:
                seen.add(key)
                yield b2


def _match_seq_strict(sig: Signature, d, pelems: List[Term],
                      selems: List[Term], b: Binding,
                      identity_ext: bool) -> Iterator[Binding]:
    if not pelems:
        if not selems:
            yield b
        return
    p0 = pelems[0]
    rest = pelems[1:]
    room = len(selems) - len(rest)
    if room < 1:
        return
    if isinstance(p0, Var) and p0 not in b:
        for k in range(1, room + 1):
            block = _mk_seq(sig, d.name, selems[:k])
            b2 = _bind(sig, b, p0, block)
            if b2 is None:
                continue
            yield from _match_seq_strict(
                sig, d, _subst_elems(sig, b2, rest, d.name),
                selems[k:], b2, identity_ext)
        return
    if isinstance(p0, Var):
        pe = _seq_elems(b[p0], d.name)
        k = len(pe)
        if k <= len(selems) and all(x == y for x, y in zip(pe, selems)):
            yield from _match_seq_strict(sig, d, rest, selems[k:], b,
                                         identity_ext)
        return
    for b2 in _match(sig, p0, selems[0], b, identity_ext):
        yield from _match_seq_strict(
            sig, d, _subst_elems(sig, b2, rest, d.name),
            selems[1:], b2, identity_ext)


def _match_ac(sig: Signature, d, pelems: List[Term], selems: List[Term],
              b: Binding, identity_ext: bool,
              ident: Optional[Term]) -> Iterator[Binding]:
    """AC/ACU matching: pattern elements take sub-multisets of the subject.

    Non-variable pattern elements each take exactly one subject element;
    variables take any non-empty sub-multiset (empty allowed only when an
    identity is in play, binding the variable to it).
    """
    seen = set()
    for b2 in _match_ac_go(sig, d, pelems, selems, b, identity_ext, ident):
        key = tuple(sorted(b2.items(), key=lambda kv: term_key(kv[0])))
        if key not in seen:
            seen.add(key)
            yield b2


def _match_ac_go(sig, d, pelems, selems, b, identity_ext, ident):
    if not pelems:
        if not selems:
            yield b
        return
    p0 = pelems[0]
    rest = pelems[1:]
    if isinstance(p0, Var) and p0 in b:
        need = _seq_elems(b[p0], d.name)
        remaining = list(selems)
        ok = True
        for x in need:
            if x in remaining:
                remaining.remove(x)
            elif ident is not None and x == ident:
                continue
            else:
                ok = False
                break
        if ok:
            yield from _match_ac_go(sig, d, rest, remaining, b,
                                    identity_ext, ident)
        return
    if isinstance(p0, Var):
        n = len(selems)
        lo = 0 if ident is not None else 1
        choices = [c for k in range(lo, n + 1)
                   for c in combinations(range(n), k)]
        for c in choices:
            if not c:
                block = ident
            else:
                block = _mk_seq(sig, d.name, [selems[i] for i in c])
            b2 = _bind(sig, b, p0, block)
            if b2 is None:
                continue
            left = [selems[i] for i in range(len(selems)) if i not in c]
            yield from _match_ac_go(sig, d,
                                    _subst_elems(sig, b2, rest, d.name),
                                    left, b2, identity_ext, ident)
        return
    for i, s in enumerate(selems):
        for b2 in _match(sig, p0, s, b, identity_ext):
            left = selems[:i] + selems[i + 1:]
            yield from _match_ac_go(sig, d,
                                    _subst_elems(sig, b2, rest, d.name),
                                    left, b2, identity_ext, ident)


def match_mod_ax(sig: Signature, pattern: Term, subject: Term,
                 extension: bool = False,
                 identity_ext: bool = False) -> List[Match]:
    """All matchers of ``pattern`` against ``subject`` modulo the axioms.

    With ``extension``, the pattern may also match any contiguous slice of
    length >= 2 of a flattened assoc subject; such matches carry the slice
    boundaries.  Results are deterministic and duplicate-free.
    """
    pattern = canonicalize(sig, pattern)
    subject = canonicalize(sig, subject)
    out: List[Match] = []
    seen = set()

    def emit(b: Binding, sl):
        s = Subst(b)
        key = (s, sl)
        if key not in seen:
            seen.add(key)
            out.append(Match(s, sl))

    for b in _match(sig, pattern, subject, {}, identity_ext):
        emit(b, None)
    if extension and isinstance(subject, App):
        decls = sig.ops_named(subject.op)
        if decls and decls[0].assoc and not decls[0].comm and \
                len(subject.args) > 2:
            n = len(subject.args)
            for lo in range(n):
                for hi in range(lo + 2, n + 1):
                    if hi - lo == n:
                        continue
                    piece = App(subject.op, tuple(subject.args[lo:hi]))
                    for b in _match(sig, pattern, piece, {}, identity_ext):
                        emit(b, (lo, hi))
    return out


# -- unification --------------------------------------------------------------


@dataclass
class _Search:
    sig: Signature
    fresh: FreshVars
    bound: int
    truncated: bool = False
    budgets: Dict[Var, int] = field(default_factory=dict)

    def budget(self, v: Var) -> int:
        return self.budgets.get(v, self.bound)

    def fresh_var(self, sort: str, parent: Optional[Var] = None) -> Var:
        z = self.fresh.make(FAMILY_UNIF, sort)
        if parent is not None:
            self.budgets[z] = self.budget(parent) - 1
        return z


def _occurs(v: Var, t: Term) -> bool:
    return v in vars_of(t)


def _occurs_collapsible(sig: Signature, v: Var, t: Term) -> bool:
    """True when every occurrence of v in t lies only below operators
    with a live identity axiom, so the surrounding context could still
    collapse onto v.  Any other occurs-check hit is unsolvable."""
    if isinstance(t, Var):
        return True
    decls = sig.ops_named(t.op)
    d = decls[0] if decls and not decls[0].poly else None
    live = d is not None and d.identity is not None and d.identity_axiom
    for a in t.args:
        if _occurs(v, a) and not (live and _occurs_collapsible(sig, v, a)):
            return False
    return True


def _unify(st: _Search, pairs, subst: Subst) -> Iterator[Subst]:
    sig = st.sig
    if not pairs:
        yield subst
        return
    a, b = pairs[0]
    rest = pairs[1:]
    a = subst.apply(sig, a)
    b = subst.apply(sig, b)
    if a == b:
        yield from _unify(st, rest, subst)
        return
    if isinstance(b, Var) and not isinstance(a, Var):
        a, b = b, a
    if isinstance(a, Var):
        if isinstance(b, Var):
            if sig.leq(b.sort, a.sort):
                yield from _unify(st, rest, subst.extend(sig, a, b))
            elif sig.leq(a.sort, b.sort):
                yield from _unify(st, rest, subst.extend(sig, b, a))
            else:
                for g in sig.glb_sorts(a.sort, b.sort):
                    z = st.fresh_var(g)
                    s2 = subst.extend(sig, a, z).extend(sig, b, z)
                    yield from _unify(st, rest, s2)
            return
        if not _occurs(a, b):
            if binding_ok(sig, a, b):
                yield from _unify(st, rest, subst.extend(sig, a, b))
            return
        # occurs under a theory operator: cancellation or identity
        # collapse may still solve it, but only when every occurrence
        # sits below collapse-capable (live identity) operators
        d = _theory_decl(sig, b)
        if d is None or not _occurs_collapsible(sig, a, b):
            return
        a = canonicalize(sig, a)
        yield from _unify_theory(st, d, a, b, rest, subst)
        return
    d1 = _theory_decl(sig, a)
    d2 = _theory_decl(sig, b)
    if d1 is None and d2 is None:
        if a.op != b.op or len(a.args) != len(b.args):
            return
        yield from _unify(st, list(zip(a.args, b.args)) + rest, subst)
        return
    d = d1 if d1 is not None else d2
    if d1 is not None and d2 is not None and d1.name != d2.name:
        # different theory roots: try each side's theory in turn
        for dd in (d1, d2):
            yield from _unify_theory(st, dd, a, b, rest, subst)
        return
    yield from _unify_theory(st, d, a, b, rest, subst)


def _theory_decl(sig: Signature, t: Term):
    if not isinstance(t, App) or not t.args:
        return None
    decls = sig.ops_named(t.op)
    if not decls or decls[0].poly:
        return None
    d = decls[0]
    if d.assoc or d.comm or (d.identity is not None and d.identity_axiom):
        return d
    return None


def _unify_theory(st: _Search, d, a: Term, b: Term,
                  rest, subst: Subst) -> Iterator[Subst]:
    live_id = d.identity is not None and d.identity_axiom
    if d.assoc and live_id and not d.comm:
        raise UnsupportedAxCombination(
            f"operator {d.name} is assoc with a live identity; "
            "apply the theory transformation first")
    if d.assoc and d.comm:
        yield from _unify_acmulti(st, d, a, b, rest, subst, live_id)
        return
    if d.assoc:
        left = _seq_elems(a, d.name)
        right = _seq_elems(b, d.name)
        yield from _unify_seq(st, d, left, right, rest, subst)
        return
    # C, U or CU: branch over identity assignments, then decompose
    seen = set()
    for s2 in _unify_cu(st, d, a, b, rest, subst, live_id):
        if s2 not in seen:
            seen.add(s2)
            yield s2


def _unify_cu(st: _Search, d, a, b, rest, subst, live_id):
    sig = st.sig

    def argpairs():
        if isinstance(a, App) and a.op == d.name and \
                isinstance(b, App) and b.op == d.name:
            yield [(a.args[0], b.args[0]), (a.args[1], b.args[1])]
            if d.comm:
                yield [(a.args[0], b.args[1]), (a.args[1], b.args[0])]

    for extra in argpairs():
        yield from _unify(st, extra + rest, subst)
    if live_id:
        # send a top-level variable argument to the identity and retry
        for t in (a, b):
            if isinstance(t, App) and t.op == d.name:
                for arg in t.args:
                    if isinstance(arg, Var) and \
                            binding_ok(sig, arg, d.identity):
                        s2 = subst.extend(sig, arg, d.identity)
                        yield from _unify(st, [(a, b)] + rest, s2)


def _unify_seq(st: _Search, d, left, right, rest, subst) -> Iterator[Subst]:
    """Bounded word unification for assoc (no comm, no live id) sequences."""
    sig = st.sig
    left = _subst_flat(sig, subst, left, d.name)
    right = _subst_flat(sig, subst, right, d.name)
    while left and right and left[0] == right[0]:
        left = left[1:]
        right = right[1:]
    while left and right and left[-1] == right[-1]:
        left = left[:-1]
        right = right[:-1]
    if not left and not right:
        yield from _unify(st, rest, subst)
        return
    if not left or not right:
        return
    # a lone variable absorbs the whole other side
    for side_l, side_r in ((left, right), (right, left)):
        if len(side_l) == 1 and isinstance(side_l[0], Var):
            v = side_l[0]
            whole = _mk_seq(sig, d.name, side_r)
            if not _occurs(v, whole) and binding_ok(sig, v, whole):
                yield from _unify(st, rest, subst.extend(sig, v, whole))
            return
    x, y = left[0], right[0]
    if isinstance(y, Var) and not isinstance(x, Var):
        x, y = y, x
        left, right = right, left
    if isinstance(x, Var):
        # heads equal
        for s2 in _unify(st, [(x, y)], subst):
            yield from _unify_seq(st, d, left[1:], right[1:], rest, s2)
        # x absorbs y and keeps going
        if not _occurs(x, y):
            if st.budget(x) > 1:
                z = st.fresh_var(d.result_sort, x)
                val = _mk_seq(sig, d.name, [y, z])
                if binding_ok(sig, x, val):
                    s2 = subst.extend(sig, x, val)
                    yield from _unify_seq(st, d, [z] + left[1:], right[1:],
                                          rest, s2)
            else:
                st.truncated = True
        # y absorbs x and keeps going (both heads variables)
        if isinstance(y, Var) and not _occurs(y, x):
            if st.budget(y) > 1:
                z = st.fresh_var(d.result_sort, y)
                val = _mk_seq(sig, d.name, [x, z])
                if binding_ok(sig, y, val):
                    s2 = subst.extend(sig, y, val)
                    yield from _unify_seq(st, d, left[1:], [z] + right[1:],
                                          rest, s2)
            else:
                st.truncated = True
        return
    # both heads non-variable: unify them, then the tails
    for s2 in _unify(st, [(x, y)], subst):
        yield from _unify_seq(st, d, left[1:], right[1:], rest, s2)


def _subst_flat(sig, subst, elems, op):
    out = []
    for e in elems:
        out.extend(_seq_elems(subst.apply(sig, e), op))
    return out


def _unify_acmulti(st: _Search, d, a, b, rest, subst,
                   live_id) -> Iterator[Subst]:
    """AC/ACU unification via cancellation plus Diophantine basis
    enumeration (fresh variable per minimal solution, subset selection)."""
    sig = st.sig
    left = _subst_flat(sig, subst, _seq_elems(a, d.name), d.name)
    right = _subst_flat(sig, subst, _seq_elems(b, d.name), d.name)
    # cancellation: AC(U) is cancellative, drop common elements
    lcount = _counts(left)
    rcount = _counts(right)
    for t in list(lcount):
        if t in rcount:
            c = min(lcount[t], rcount[t])
            lcount[t] -= c
            rcount[t] -= c
            if lcount[t] == 0:
                del lcount[t]
            if rcount[t] == 0:
                del rcount[t]
    if not lcount and not rcount:
        yield from _unify(st, rest, subst)
        return
    if (not lcount or not rcount) and not live_id:
        return
    if not lcount or not rcount:
        # ACU: every leftover element must collapse to the identity
        leftover = lcount or rcount
        pairs = []
        for t, c in leftover.items():
            if isinstance(t, Var):
                pairs.append((t, d.identity))
            else:
                return
        yield from _unify(st, pairs + rest, subst)
        return
    items = sorted(lcount.keys() | rcount.keys(), key=term_key)
    coeff = [lcount.get(t, 0) - rcount.get(t, 0) for t in items]
    basis = _dioph_basis(coeff)
    if not basis:
        return
    nitems = len(items)
    m = len(basis)
    if m > 16:
        st.truncated = True
        basis = basis[:16]
        m = 16
    seen_assign = set()
    for mask in range(1, 1 << m):
        chosen = [basis[k] for k in range(m) if mask >> k & 1]
        total = [sum(s[i] for s in chosen) for i in range(nitems)]
        ok = True
        for i, t in enumerate(items):
            if isinstance(t, Var):
                if total[i] == 0 and not live_id:
                    ok = False
                    break
            else:
                if total[i] != 1:
                    ok = False
                    break
        if not ok:
            continue
        # value per chosen basis vector: an alien it covers, else fresh
        zvals = []
        alien_pairs = []
        for s in chosen:
            covered = [items[i] for i in range(nitems)
                       if s[i] > 0 and not isinstance(items[i], Var)]
            if covered:
                zvals.append(covered[0])
                for other in covered[1:]:
                    alien_pairs.append((covered[0], other))
            else:
                zvals.append(None)
        assign = []
        for i, t in enumerate(items):
            if not isinstance(t, Var):
                continue
            elems = []
            for k, s in enumerate(chosen):
                v = zvals[k]
                if v is None:
                    v = ("z", k)
                elems.extend([v] * s[i])
            assign.append((t, tuple(sorted(elems, key=_zkey))))
        key = (tuple(assign), tuple(sorted(map(tuple, alien_pairs),
                                          key=lambda p: (_zkey(p[0]),
                                                         _zkey(p[1])))))
        if key in seen_assign:
            continue
        seen_assign.add(key)
        zcache = {}

        def resolve(v):
            if isinstance(v, tuple) and v and v[0] == "z":
                if v not in zcache:
                    zcache[v] = st.fresh_var(d.result_sort)
                return zcache[v]
            return v

        pairs = []
        for t, elems in assign:
            terms = [resolve(e) for e in elems]
            if not terms:
                val = d.identity
            else:
                val = _mk_seq(sig, d.name, terms)
            pairs.append((t, val))
        pairs.extend(alien_pairs)
        yield from _unify(st, pairs + rest, subst)


def _zkey(v):
    if isinstance(v, tuple) and v and v[0] == "z":
        return (3, str(v[1]))
    return (0,) + tuple(map(str, term_key(v)[:2]))


def _counts(elems) -> Dict[Term, int]:
    out: Dict[Term, int] = {}
    for e in elems:
        out[e] = out.get(e, 0) + 1
    return out


def _dioph_basis(coeff: List[int]) -> List[Tuple[int, ...]]:
    """Minimal non-zero solutions in naturals of sum(coeff[i] * x[i]) = 0.

    Component bound follows the classic max-coefficient bound; plenty for
    the small systems that arise from flattened argument lists.
    """
    n = len(coeff)
    maxpos = max((c for c in coeff if c > 0), default=0)
    maxneg = max((-c for c in coeff if c < 0), default=0)
    if maxpos == 0 or maxneg == 0:
        return []
    bound = [maxneg if coeff[i] > 0 else maxpos for i in range(n)]
    sols: List[Tuple[int, ...]] = []

    def gen(i, acc, total):
        if i == n:
            if total == 0 and any(acc):
                v = tuple(acc)
                if not any(all(s[j] <= v[j] for j in range(n)) for s in sols):
                    sols.append(v)
            return
        rem_pos = sum(coeff[j] * bound[j] for j in range(i, n) if coeff[j] > 0)
        rem_neg = sum(-coeff[j] * bound[j] for j in range(i, n)
                      if coeff[j] < 0)
        if total > rem_neg or -total > rem_pos:
            return
        for v in range(bound[i] + 1):
            gen(i + 1, acc + [v], total + coeff[i] * v)

    gen(0, [], 0)
    sols.sort()
    return [s for s in sols
            if not any(t != s and all(t[j] <= s[j] for j in range(n))
                       for t in sols)]


# -- solution post-processing -------------------------------------------------


def subst_matches(sig: Signature, general: Subst, specific: Subst,
                  variables) -> bool:
    """True when ``specific`` is an instance of ``general`` modulo axioms
    over the given variables."""
    variables = sorted(set(variables), key=term_key)

    def go(i, b):
        if i == len(variables):
            return True
        v = variables[i]
        g = general.get(v, v)
        if b:
            g = Subst(b).apply(sig, g)
        s = specific.get(v, v)
        for b2 in _match(sig, g, s, b, False):
            if go(i + 1, b2):
                return True
        return False

    return go(0, {})


def minimize_solutions(sig: Signature, solutions, variables) -> List[Subst]:
    """Drop solutions that are instances of another; on renaming-equivalent
    pairs the earlier one wins.  Order is preserved."""
    sols = list(solutions)
    keep = []
    for i, s in enumerate(sols):
        dominated = False
        for j, t in enumerate(sols):
            if i == j:
                continue
            if subst_matches(sig, t, s, variables):
                if subst_matches(sig, s, t, variables):
                    if j < i:
                        dominated = True
                        break
                else:
                    dominated = True
                    break
        if not dominated:
            keep.append(s)
    return keep


def unify_mod_ax(sig: Signature, t1: Term, t2: Term,
                 assoc_bound: int = DEFAULT_ASSOC_BOUND,
                 fresh: Optional[FreshVars] = None) -> SolutionSet:
    """Complete set of Ax-unifiers of two terms (minimal, deterministic).

    ``complete`` is False when bounded assoc splitting truncated the
    search.  Fresh variables drawn from ``fresh`` belong to the unifier
    family; pass a shared supply to keep names apart from existing terms.
    """
    if fresh is None:
        fresh = FreshVars()
    t1 = canonicalize(sig, t1)
    t2 = canonicalize(sig, t2)
    pvars = sorted(set(vars_of(t1)) | set(vars_of(t2)), key=term_key)
    st = _Search(sig=sig, fresh=fresh, bound=assoc_bound)
    raw = []
    seen = set()
    for s in _unify(st, [(t1, t2)], Subst({})):
        rr = s.restrict(pvars)
        if rr not in seen:
            seen.add(rr)
            raw.append(rr)
    raw.sort(key=_subst_sort_key)
    minimal = minimize_solutions(sig, raw, pvars)
    return SolutionSet(tuple(minimal), complete=not st.truncated)


def _subst_sort_key(s: Subst):
    return tuple((term_key(v), term_key(t)) for v, t in sorted(
        s.mapping.items(), key=lambda kv: term_key(kv[0])))
