"""Order-sorted signatures, canonical terms, substitutions, and renaming.

Terms are immutable. Applications of associative operators are kept
flattened (a single n-ary argument sequence) and arguments of commutative
operators are sorted under a fixed total term order, so equality modulo
the structural axioms of an operator reduces to structural equality of
canonical forms (plus a renaming search when variables are involved).

Identity elements declared with a live ``id:`` axiom are collapsed during
canonicalization; identities kept only for matching extensions (after the
AU transformation) are handled by explicit equations instead.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (
    BadAxiomAttribute,
    CyclicSubsorts,
    DuplicateOpConflict,
    NoLeastSort,
    SortError,
    SortViolation,
)

# Variable families: input-term variables, fresh rule variables, fresh
# unifier variables.  Kept in disjoint namespaces by their print prefix.
FAMILY_INPUT = "in"
FAMILY_RULE = "rule"
FAMILY_UNIF = "unif"

FAMILY_PREFIX = {FAMILY_INPUT: "", FAMILY_RULE: "%", FAMILY_UNIF: "#"}


def is_kind_name(sort: str) -> bool:
    return sort.startswith("[") and sort.endswith("]")


@dataclass(frozen=True)
class Var:
    name: str
    sort: str
    family: str = FAMILY_INPUT

    def __str__(self):
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __hash__(self):  # cached: terms are deep and hashed constantly
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.op, self.args))
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self):  # debugging only; real printing lives in modlang
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


@dataclass(frozen=True)
class OpDecl:
    """One operator declaration.

    ``identity`` survives the AU transformation (for matching extensions)
    even when ``identity_axiom`` has been turned off, in which case the
    ``id:`` attribute is no longer printed nor used by unification.
    """

    name: str
    arg_sorts: tuple
    result_sort: str
    assoc: bool = False
    comm: bool = False
    identity: Optional[Term] = None
    identity_axiom: bool = True
    poly: bool = False  # kind-polymorphic (the injected =?= only)

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    @property
    def is_mixfix(self) -> bool:
        return "_" in self.name

    def attr_text(self) -> str:
        parts = []
        if self.assoc:
            parts.append("assoc")
        if self.comm:
            parts.append("comm")
        if self.identity is not None and self.identity_axiom:
            from .modlang import print_term_raw

            parts.append(f"id: {print_term_raw(self.identity)}")
        if self.poly:
            parts.append("poly (1 2)")
        return " ".join(parts)


class Signature:
    """Sorts, the subsort partial order (with kinds), and operators."""

    def __init__(self, sorts: Iterable[str], subsorts: Iterable[tuple],
                 ops: Iterable[OpDecl], synthetic_sorts: Iterable[str] = ()):
        self.sorts = tuple(dict.fromkeys(sorts))
        self.subsort_pairs = tuple(dict.fromkeys(subsorts))
        self.synthetic_sorts = frozenset(synthetic_sorts)
        for a, b in self.subsort_pairs:
            if a not in self.sorts or b not in self.sorts:
                raise SortError(f"subsort declaration uses unknown sort: {a} < {b}")
        self._closure = self._subsort_closure()
        self.kind_of = self._compute_kinds()
        self.kinds = {}
        for s, k in self.kind_of.items():
            self.kinds.setdefault(k, set()).add(s)
        self.ops = self._merge_ops(ops)
        self._ops_by_name = {}
        for d in self.ops:
            self._ops_by_name.setdefault(d.name, []).append(d)
        self._least_sort_cache = {}
        self._canon_cache = {}
        self._validate_attributes()

    # -- construction helpers -------------------------------------------------

    def _subsort_closure(self):
        below = {s: {s} for s in self.sorts}  # below[sup] holds all subs
        changed = True
        edges = {}
        for a, b in self.subsort_pairs:
            edges.setdefault(b, set()).add(a)
        while changed:
            changed = False
            for b, subs in edges.items():
                for a in list(subs):
                    new = below[a] - below[b]
                    if new:
                        below[b] |= new
                        changed = True
        for s in self.sorts:
            for t in below[s]:
                if t != s and s in below[t]:
                    raise CyclicSubsorts(f"cyclic subsort relation between {s} and {t}")
        return below

    def _compute_kinds(self):
        parent = {s: s for s in self.sorts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.subsort_pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps = {}
        for s in self.sorts:
            comps.setdefault(find(s), []).append(s)
        kind_of = {}
        for members in comps.values():
            maximal = [s for s in members
                       if not any(s != t and s in self._closure[t] for t in members)]
            rep = sorted(maximal)[0]
            kname = f"[{rep}]"
            for s in members:
                kind_of[s] = kname
        return kind_of

    def _merge_ops(self, ops):
        merged = []
        for d in ops:
            dup = False
            for prev in merged:
                if prev == d:
                    dup = True
                    break
                if prev.name == d.name and prev.arity == d.arity:
                    same_attrs = (prev.assoc, prev.comm, prev.identity,
                                  prev.identity_axiom) == (d.assoc, d.comm,
                                                           d.identity, d.identity_axiom)
                    if not same_attrs:
                        raise DuplicateOpConflict(
                            f"operator {d.name}/{d.arity} declared twice with "
                            "incompatible attributes")
            if not dup:
                merged.append(d)
        return tuple(merged)

    def _validate_attributes(self):
        for d in self.ops:
            if d.poly:
                continue
            for s in tuple(d.arg_sorts) + (d.result_sort,):
                if s not in self.sorts and not (is_kind_name(s) and s in self.kinds):
                    raise SortError(f"operator {d.name} uses unknown sort {s}")
            if d.assoc or d.comm:
                if d.arity != 2:
                    raise BadAxiomAttribute(
                        f"assoc/comm on non-binary operator {d.name}")
                k = {self.kind_name(s) for s in d.arg_sorts}
                k.add(self.kind_name(d.result_sort))
                if len(k) != 1:
                    raise BadAxiomAttribute(
                        f"assoc/comm operator {d.name} mixes kinds {sorted(k)}")
            if d.identity is not None:
                ls = self.least_sort(d.identity)
                if vars_of(d.identity):
                    raise BadAxiomAttribute(
                        f"identity of {d.name} is not a ground term")
                if self.kind_name(ls) != self.kind_name(d.arg_sorts[0]):
                    raise BadAxiomAttribute(
                        f"identity of {d.name} lies outside its argument kind")

    # -- queries --------------------------------------------------------------

    def kind_name(self, sort: str) -> str:
        if is_kind_name(sort):
            return sort
        return self.kind_of[sort]

    def leq(self, a: str, b: str) -> bool:
        """Subsort order, extended with sort <= its kind."""
        if a == b:
            return True
        if is_kind_name(b):
            if is_kind_name(a):
                return False
            return self.kind_of.get(a) == b
        if is_kind_name(a):
            return False
        return a in self._closure.get(b, ())

    def glb_sorts(self, a: str, b: str):
        """Maximal common lower bounds of two sorts."""
        if self.leq(a, b):
            return [a]
        if self.leq(b, a):
            return [b]
        if is_kind_name(a) or is_kind_name(b):
            return []
        common = [s for s in self.sorts if self.leq(s, a) and self.leq(s, b)]
        return [s for s in common
                if not any(s != t and self.leq(s, t) for t in common)]

    def ops_named(self, name: str):
        return tuple(self._ops_by_name.get(name, ()))

    def decl(self, name: str) -> OpDecl:
        decls = self.ops_named(name)
        if not decls:
            raise SortError(f"unknown operator {name}")
        return decls[0]

    def is_assoc(self, name: str) -> bool:
        decls = self._ops_by_name.get(name)
        return bool(decls) and decls[0].assoc

    def is_comm(self, name: str) -> bool:
        decls = self._ops_by_name.get(name)
        return bool(decls) and decls[0].comm

    # -- least sorts ----------------------------------------------------------

    def least_sort(self, t: Term) -> str:
        """Least sort of a canonical (or at least well-formed) term.

        Returns a kind name for kind-level terms (well-formed at kind level
        only); raises SortError when the term is not even kind-correct.
        """
        cached = self._least_sort_cache.get(t)
        if cached is not None:
            return cached
        if isinstance(t, Var):
            result = t.sort
        else:
            decls = self.ops_named(t.op)
            if not decls:
                raise SortError(f"unknown operator {t.op}")
            arg_sorts = [self.least_sort(a) for a in t.args]
            if decls[0].poly:
                result = self._poly_sort(t, arg_sorts)
            elif decls[0].assoc and len(t.args) > 2:
                acc = self._resolve(t.op, decls, arg_sorts[:2])
                for s in arg_sorts[2:]:
                    acc = self._resolve(t.op, decls, [acc, s])
                result = acc
            else:
                result = self._resolve(t.op, decls, arg_sorts)
        self._least_sort_cache[t] = result
        return result

    def _poly_sort(self, t, arg_sorts):
        kinds = {self.kind_name(s) for s in arg_sorts}
        if len(kinds) != 1:
            raise SortError(
                f"arguments of {t.op} lie in different kinds: {sorted(kinds)}")
        return self.decl(t.op).result_sort

    def _resolve(self, name, decls, arg_sorts):
        cands = [d for d in decls
                 if d.arity == len(arg_sorts)
                 and all(self.leq(a, b) for a, b in zip(arg_sorts, d.arg_sorts))]
        if cands:
            results = sorted({d.result_sort for d in cands})
            least = [r for r in results
                     if all(self.leq(r, other) for other in results)]
            if len(least) == 1:
                return least[0]
            minimal = [r for r in results
                       if not any(r != o and self.leq(o, r) for o in results)]
            if len(minimal) == 1:
                return minimal[0]
            raise NoLeastSort(
                f"ambiguous overloading for {name}({', '.join(arg_sorts)})",
                candidates=minimal)
        # kind level
        kcands = [d for d in decls
                  if d.arity == len(arg_sorts)
                  and all(self.kind_name(a) == self.kind_name(b)
                          for a, b in zip(arg_sorts, d.arg_sorts))]
        if kcands:
            return self.kind_name(kcands[0].result_sort)
        raise SortError(
            f"ill-sorted application of {name} to ({', '.join(arg_sorts)})")


def build_signature(sorts, subsorts, ops, synthetic_sorts=()) -> Signature:
    return Signature(sorts, subsorts, ops, synthetic_sorts)


# -- term order and canonical forms -------------------------------------------


def term_key(t: Term):
    """Fixed total order: variables < constants < applications, then by
    operator name, then lexicographically on arguments."""
    if isinstance(t, Var):
        return (0, t.name, t.sort, t.family)
    if not t.args:
        return (1, t.op)
    k = t.__dict__.get("_k")
    if k is None:
        k = (2, t.op, tuple(term_key(a) for a in t.args))
        object.__setattr__(t, "_k", k)
    return k


def canonicalize(sig: Signature, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    cached = sig._canon_cache.get(t)
    if cached is not None:
        return cached
    args = [canonicalize(sig, a) for a in t.args]
    decls = sig.ops_named(t.op)
    if decls and not decls[0].poly:
        d = decls[0]
        if d.assoc:
            flat = []
            for a in args:
                if isinstance(a, App) and a.op == t.op:
                    flat.extend(a.args)
                else:
                    flat.append(a)
            args = flat
            if d.comm:
                args = sorted(args, key=term_key)
        elif d.comm:
            args = sorted(args, key=term_key)
        if d.identity is not None and d.identity_axiom:
            # live id: axiom (ACU/CU/U): identity elements collapse, so
            # Ax-equality stays a structural comparison of canonical forms
            kept = [a for a in args if a != d.identity]
            if not kept:
                result = d.identity
                sig._canon_cache[t] = result
                return result
            if len(kept) == 1:
                result = kept[0]
                sig._canon_cache[t] = result
                return result
            args = kept
    result = App(t.op, tuple(args))
    sig._canon_cache[t] = result
    return result


def vars_of(t: Term) -> tuple:
    """Variables in first-occurrence order."""
    out = {}

    def walk(x):
        if isinstance(x, Var):
            out.setdefault(x, None)
        else:
            for a in x.args:
                walk(a)

    walk(t)
    return tuple(out)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


# -- positions ----------------------------------------------------------------


@dataclass(frozen=True)
class Pos:
    """A position in the canonical form.  ``path`` indexes flattened
    argument sequences (1-based); ``slice`` addresses a contiguous run of
    an associative operator's arguments at that path."""

    path: tuple = ()
    slice: Optional[tuple] = None

    def __str__(self):
        base = ".".join(str(i) for i in self.path) if self.path else "Λ"
        if self.slice is not None:
            return f"{base}[{self.slice[0] + 1}..{self.slice[1]}]"
        return base


ROOT = Pos()


def subterm_at(t: Term, pos: Pos) -> Term:
    cur = t
    for i in pos.path:
        cur = cur.args[i - 1]
    if pos.slice is not None:
        lo, hi = pos.slice
        return App(cur.op, tuple(cur.args[lo:hi]))
    return cur


def replace_at(sig: Signature, t: Term, pos: Pos, new: Term) -> Term:
    def rebuild(cur, path):
        if not path:
            if pos.slice is None:
                return new
            lo, hi = pos.slice
            return App(cur.op, cur.args[:lo] + (new,) + cur.args[hi:])
        i = path[0] - 1
        args = list(cur.args)
        args[i] = rebuild(args[i], path[1:])
        return App(cur.op, tuple(args))

    return canonicalize(sig, rebuild(t, pos.path))


def all_positions(t: Term, path=()) -> Iterator[tuple]:
    yield Pos(path), t
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            yield from all_positions(a, path + (i,))


def nonvar_positions(sig: Signature, t: Term, with_slices=False) -> list:
    """All application positions of the canonical form; with ``with_slices``
    also every proper contiguous slice (length >= 2) of assoc sequences."""
    out = []
    for pos, sub in all_positions(t):
        if isinstance(sub, Var):
            continue
        out.append((pos, sub))
        if with_slices and sig.is_assoc(sub.op) and len(sub.args) > 2:
            n = len(sub.args)
            for width in range(2, n):
                for lo in range(0, n - width + 1):
                    sl = Pos(pos.path, (lo, lo + width))
                    out.append((sl, App(sub.op, tuple(sub.args[lo:lo + width]))))
    return out


# -- substitutions ------------------------------------------------------------


class Subst:
    """Finite map from variables to terms.  Immutable."""

    __slots__ = ("_map", "_key")

    def __init__(self, mapping=()):
        m = dict(mapping)
        self._map = {v: t for v, t in m.items() if t != v}
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self._map.items(),
                                     key=lambda kv: term_key(kv[0])))
        return self._key

    @property
    def mapping(self):
        return dict(self.key)

    @property
    def domain(self):
        return tuple(v for v, _ in self.key)

    def get(self, v, default=None):
        return self._map.get(v, default)

    def is_identity(self):
        return not self._map

    def __eq__(self, other):
        return isinstance(other, Subst) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self._map)

    def __repr__(self):
        inner = ", ".join(f"{v}/{t}" for v, t in self.key)
        return "{" + inner + "}"

    def apply(self, sig: Signature, t: Term) -> Term:
        if not self._map:
            return canonicalize(sig, t)

        def rep(x):
            if isinstance(x, Var):
                return self._map.get(x, x)
            if not x.args:
                return x
            g = x.__dict__.get("_g")
            if g is None:
                g = is_ground(x)
                object.__setattr__(x, "_g", g)
            if g:
                return x
            new = tuple(rep(a) for a in x.args)
            if all(n is a for n, a in zip(new, x.args)):
                return x
            return App(x.op, new)

        result = canonicalize(sig, rep(t))
        try:
            sig.least_sort(result)
        except SortError as e:
            raise SortViolation(str(e)) from e
        return result

    def compose(self, sig: Signature, other: "Subst") -> "Subst":
        """Sequential composition: apply(self) then apply(other)."""
        out = {}
        for v, t in self._map.items():
            out[v] = other.apply(sig, t)
        for v, t in other._map.items():
            if v not in out:
                out[v] = t
        return Subst(out)

    def restrict(self, variables) -> "Subst":
        keep = set(variables)
        return Subst({v: t for v, t in self._map.items() if v in keep})

    def extend(self, sig: Signature, v: Var, t: Term) -> "Subst":
        """Bind one more variable, composing through existing bindings."""
        one = Subst({v: t})
        return self.compose(sig, one) if self._map else one


def binding_ok(sig: Signature, v: Var, t: Term) -> bool:
    try:
        ls = sig.least_sort(t)
    except SortError:
        return False
    return sig.leq(ls, v.sort)


# -- fresh variables and renaming ---------------------------------------------


class FreshVars:
    """Deterministic fresh-variable supply, one counter per family."""

    def __init__(self):
        self._counters = {FAMILY_RULE: 0, FAMILY_UNIF: 0, FAMILY_INPUT: 0}

    def make(self, family: str, sort: str) -> Var:
        self._counters[family] += 1
        prefix = FAMILY_PREFIX[family] or "v"
        return Var(f"{prefix}{self._counters[family]}", sort, family)


def rename_term_apart(sig: Signature, t: Term, family: str,
                      fresh: FreshVars):
    ren = Subst({v: fresh.make(family, v.sort) for v in vars_of(t)})
    return ren.apply(sig, t), ren


# -- equality modulo axioms and renaming --------------------------------------


def ax_equal(sig: Signature, t1: Term, t2: Term) -> bool:
    """Equality modulo the structural axioms = canonical-form equality."""
    return canonicalize(sig, t1) == canonicalize(sig, t2)


def equal_mod_ax_renaming(sig: Signature, t1: Term, t2: Term):
    """Sort-preserving variable bijection making canonical forms equal.

    Returns the witness mapping (dict Var -> Var) or None.
    """
    a = canonicalize(sig, t1)
    b = canonicalize(sig, t2)

    def walk(x, y, fwd, bwd):
        if isinstance(x, Var) and isinstance(y, Var):
            if x.sort != y.sort:
                return None
            if x in fwd:
                return (fwd, bwd) if fwd[x] == y else None
            if y in bwd:
                return None
            fwd2 = dict(fwd)
            bwd2 = dict(bwd)
            fwd2[x] = y
            bwd2[y] = x
            return fwd2, bwd2
        if isinstance(x, App) and isinstance(y, App):
            if x.op != y.op or len(x.args) != len(y.args):
                return None
            if sig.is_comm(x.op):
                return walk_multiset(list(x.args), list(y.args), fwd, bwd)
            state = (fwd, bwd)
            for xa, ya in zip(x.args, y.args):
                state = walk(xa, ya, *state)
                if state is None:
                    return None
            return state
        return None

    def walk_multiset(xs, ys, fwd, bwd):
        if not xs:
            return (fwd, bwd)
        x = xs[0]
        for i, y in enumerate(ys):
            state = walk(x, y, fwd, bwd)
            if state is not None:
                deeper = walk_multiset(xs[1:], ys[:i] + ys[i + 1:], *state)
                if deeper is not None:
                    return deeper
        return None

    result = walk(a, b, {}, {})
    return result[0] if result is not None else None
