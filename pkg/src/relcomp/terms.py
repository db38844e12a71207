"""First-order terms, rewrite rules and relative term rewrite systems.

Terms are interned: constructing the same term twice returns the same
object, so equality is usually an identity check and hashing is O(1).
Function symbols are any hashable value (a plain ``str`` for ordinary
symbols, ``(name, height)`` pairs for height-enriched ones); arity is the
number of arguments and must be consistent within a signature.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class Term:
    __slots__ = ()

    def is_var(self) -> bool:
        return False


class Var(Term):
    __slots__ = ("name", "_hash", "__weakref__")
    _table: dict = {}

    def __new__(cls, name: str):
        t = cls._table.get(name)
        if t is None:
            t = object.__new__(cls)
            t.name = name
            t._hash = hash(("var", name))
            cls._table[name] = t
        return t

    def is_var(self):
        return True

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and other.name == self.name)

    def __reduce__(self):
        return (Var, (self.name,))

    def __repr__(self):
        return self.name


class App(Term):
    __slots__ = ("fun", "args", "_hash", "size", "__weakref__")
    _table: dict = {}

    def __new__(cls, fun, args: Iterable[Term] = ()):
        args = tuple(args)
        key = (fun, args)
        t = cls._table.get(key)
        if t is None:
            t = object.__new__(cls)
            t.fun = fun
            t.args = args
            t._hash = hash(key)
            t.size = 1 + sum(_size(a) for a in args)
            cls._table[key] = t
        return t

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.fun == other.fun
            and self.args == other.args
        )

    def __reduce__(self):
        return (App, (self.fun, self.args))

    def __repr__(self):
        return to_str(self)


def _size(t: Term) -> int:
    return t.size if isinstance(t, App) else 1


def fun_name(fun) -> str:
    if isinstance(fun, tuple):
        return f"{fun[0]}_{fun[1]}"
    return str(fun)


def to_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    name = fun_name(t.fun)
    if not t.args:
        return name
    return f"{name}({','.join(to_str(a) for a in t.args)})"


def size(t: Term) -> int:
    """Number of nodes, variables included."""
    return _size(t)


def fcount(t: Term) -> int:
    """Number of function symbol occurrences."""
    if isinstance(t, Var):
        return 0
    return 1 + sum(fcount(a) for a in t.args)


def var_occurrences(t: Term) -> list:
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.append(u)
        else:
            stack.extend(reversed(u.args))
    return out


def variables(t: Term) -> set:
    return set(var_occurrences(t))


def functions(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            out.add((u.fun, len(u.args)))
            stack.extend(u.args)
    return out


def is_linear(t: Term) -> bool:
    occ = var_occurrences(t)
    return len(occ) == len(set(occ))


def is_ground(t: Term) -> bool:
    return not var_occurrences(t)


def positions(t: Term) -> Iterator[tuple]:
    """All positions in pre-order, as tuples of 0-based argument indices."""
    yield ()
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            for p in positions(a):
                yield (i,) + p


def fun_positions(t: Term) -> Iterator[tuple]:
    for p in positions(t):
        if isinstance(subterm(t, p), App):
            yield p


def subterm(t: Term, pos: tuple) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def replace(t: Term, pos: tuple, u: Term) -> Term:
    if not pos:
        return u
    i = pos[0]
    args = list(t.args)
    args[i] = replace(args[i], pos[1:], u)
    return App(t.fun, args)


def match(pattern: Term, t: Term, subst: dict | None = None) -> dict | None:
    """Syntactic matching: a substitution ``s`` with ``pattern s == t`` or None."""
    subst = {} if subst is None else dict(subst)
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, Var):
            bound = subst.get(p)
            if bound is None:
                subst[p] = u
            elif bound is not u and bound != u:
                return None
        else:
            if not isinstance(u, App) or u.fun != p.fun or len(u.args) != len(p.args):
                return None
            stack.extend(zip(p.args, u.args))
    return subst


def substitute(t: Term, subst: dict) -> Term:
    if isinstance(t, Var):
        return subst.get(t, t)
    if not t.args:
        return t
    return App(t.fun, [substitute(a, subst) for a in t.args])


def map_funs(t: Term, fn) -> Term:
    """Rename every function symbol with ``fn(fun, position)``."""

    def go(u, pos):
        if isinstance(u, Var):
            return u
        return App(fn(u.fun, pos), [go(a, pos + (i,)) for i, a in enumerate(u.args)])

    return go(t, ())


# ---------------------------------------------------------------------------
# rules and systems


class RuleError(ValueError):
    pass


class VariableLhs(RuleError):
    pass


class ExtraVariableRhs(RuleError):
    pass


class ArityMismatch(RuleError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise VariableLhs(f"left-hand side of {self} is a variable")
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            raise ExtraVariableRhs(f"right-hand side of {self} has extra variables {names}")

    def __str__(self):
        return f"{to_str(self.lhs)} -> {to_str(self.rhs)}"

    @property
    def is_collapsing(self) -> bool:
        return isinstance(self.rhs, Var)

    @property
    def is_duplicating(self) -> bool:
        left = var_occurrences(self.lhs)
        right = var_occurrences(self.rhs)
        return any(right.count(x) > left.count(x) for x in set(right))


class Language(enum.Enum):
    ALL = "all"
    CONSTRUCTOR = "constructor"


@dataclass(frozen=True)
class RelativeTRS:
    """``R/S``: only ``strict`` steps are counted, ``weak`` steps are free.

    Rules are kept as ordered tuples so that numbering and output are
    deterministic.  ``signature`` maps symbol names to arities and may hold
    symbols that do not occur in any rule.
    """

    strict: tuple = ()
    weak: tuple = ()
    signature: dict = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "strict", tuple(self.strict))
        object.__setattr__(self, "weak", tuple(self.weak))
        sig = dict(self.signature or {})
        for rule in self.strict + self.weak:
            for side in (rule.lhs, rule.rhs):
                for f, n in functions(side):
                    if sig.setdefault(f, n) != n:
                        raise ArityMismatch(f"symbol {fun_name(f)} used with arities {sig[f]} and {n}")
        object.__setattr__(self, "signature", sig)

    def __hash__(self):
        return hash((self.strict, self.weak))

    @property
    def rules(self) -> tuple:
        return self.strict + self.weak

    def with_rules(self, strict, weak) -> "RelativeTRS":
        return RelativeTRS(tuple(strict), tuple(weak), self.signature)

    def defined_symbols(self) -> set:
        return {r.lhs.fun for r in self.rules}

    def constructor_symbols(self) -> set:
        return set(self.signature) - self.defined_symbols()

    def __str__(self):
        s = "; ".join(str(r) for r in self.strict)
        w = "; ".join(str(r) for r in self.weak)
        return f"{{{s}}} / {{{w}}}"


@dataclass(frozen=True)
class PropertyRecord:
    linear: bool
    left_linear: bool
    right_linear: bool
    duplicating: bool
    collapsing: bool
    defined_symbols: frozenset
    constructor_symbols: frozenset


def classify(trs: RelativeTRS) -> PropertyRecord:
    rules = trs.rules
    left = all(is_linear(r.lhs) for r in rules)
    right = all(is_linear(r.rhs) for r in rules)
    return PropertyRecord(
        linear=left and right,
        left_linear=left,
        right_linear=right,
        duplicating=any(r.is_duplicating for r in rules),
        collapsing=any(r.is_collapsing for r in rules),
        defined_symbols=frozenset(trs.defined_symbols()),
        constructor_symbols=frozenset(trs.constructor_symbols()),
    )


def is_non_duplicating(rules: Iterable[Rule]) -> bool:
    return not any(r.is_duplicating for r in rules)


# ---------------------------------------------------------------------------
# rewriting and the derivation-height oracle


def successors(t: Term, rules: Iterable[Rule]) -> set:
    """All one-step reducts of ``t``."""
    return {u for u, _ in _steps(t, tuple(rules))}


def _steps(t: Term, rules: tuple) -> Iterator[tuple]:
    """Yield ``(reduct, rule_index)`` for every redex position and rule."""
    if isinstance(t, Var):
        return
    for k, rule in enumerate(rules):
        s = match(rule.lhs, t)
        if s is not None:
            yield substitute(rule.rhs, s), k
    for i, a in enumerate(t.args):
        for u, k in _steps(a, rules):
            args = list(t.args)
            args[i] = u
            yield App(t.fun, args), k


class FuelExhausted(RuntimeError):
    """Exploration exceeded its budget or found an infinite derivation."""


class EnumerationCapExceeded(RuntimeError):
    pass


FRESH = "$"  # stand-in constant for variables in ground enumerations


def derivation_height(t: Term, rel: RelativeTRS, fuel: int = 100_000, memo: dict | None = None) -> int:
    """Maximal number of strict steps in a rewrite sequence of ``R ∪ S`` from ``t``.

    The whole reachable graph is explored (at most ``fuel`` rewrite steps),
    then the longest path is computed on its strongly connected components.
    A cycle that contains a strict step means an infinite ``R/S``
    derivation and raises :class:`FuelExhausted`; so does running out of
    fuel.  ``memo`` may be shared between calls on the same system.
    """
    memo = {} if memo is None else memo
    if t in memo:
        return memo[t]
    strict, weak = rel.strict, rel.weak
    nstrict = len(strict)
    allrules = strict + weak

    # iterative Tarjan over the rewrite graph, computing heights per SCC
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    edges: dict = {}
    counter = itertools.count()
    spent = 0

    def succ(u):
        nonlocal spent
        out = edges.get(u)
        if out is None:
            out = {}
            for v, k in _steps(u, allrules):
                spent += 1
                if spent > fuel:
                    raise FuelExhausted(f"more than {fuel} rewrite steps explored")
                w = 1 if k < nstrict else 0
                if out.get(v, -1) < w:
                    out[v] = w
            out = list(out.items())
            edges[u] = out
        return out

    try:
        return _tarjan(t, memo, index, low, on_stack, stack, edges, counter, succ)
    except RecursionError:
        raise FuelExhausted("terms grew too deep") from None


def _tarjan(t, memo, index, low, on_stack, stack, edges, counter, succ) -> int:
    work = [(t, 0)]
    index[t] = low[t] = next(counter)
    stack.append(t)
    on_stack.add(t)
    while work:
        u, i = work[-1]
        out = succ(u)
        if i < len(out):
            work[-1] = (u, i + 1)
            v, _ = out[i]
            if v in memo:
                continue
            if v not in index:
                index[v] = low[v] = next(counter)
                stack.append(v)
                on_stack.add(v)
                work.append((v, 0))
            elif v in on_stack:
                low[u] = min(low[u], index[v])
            continue
        work.pop()
        if work:
            parent = work[-1][0]
            low[parent] = min(low[parent], low[u])
        if low[u] == index[u]:
            component = []
            while True:
                v = stack.pop()
                on_stack.discard(v)
                component.append(v)
                if v is u:
                    break
            members = set(component)
            best = 0
            for v in component:
                for x, w in edges[v]:
                    if x in members:
                        if w:
                            raise FuelExhausted(f"infinite derivation through {to_str(v)}")
                        continue
                    best = max(best, w + memo[x])
            # all members of an S-only cycle share the same height
            for v in component:
                memo[v] = best
    return memo[t]


def ground_terms(signature: dict, max_size: int, cap: int = 200_000) -> list:
    """All ground terms of size <= max_size, smallest first."""
    by_size: list = [[] for _ in range(max_size + 1)]
    symbols = sorted(signature.items(), key=lambda kv: (kv[1], fun_name(kv[0])))
    total = 0
    for n in range(1, max_size + 1):
        bucket = by_size[n]
        for f, arity in symbols:
            if arity == 0:
                if n == 1:
                    bucket.append(App(f))
                    total += 1
                continue
            for sizes in _compositions(n - 1, arity):
                for args in itertools.product(*(by_size[k] for k in sizes)):
                    bucket.append(App(f, args))
                    total += 1
                    if total > cap:
                        raise EnumerationCapExceeded(f"more than {cap} terms of size <= {max_size}")
    return [t for bucket in by_size for t in bucket]


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def language_terms(rel: RelativeTRS, lang: Language, max_size: int, cap: int = 200_000) -> list:
    """Ground representatives of the starting language up to ``max_size``.

    Variables are modelled by the fresh constant :data:`FRESH`.
    """
    sig = dict(rel.signature)
    sig[FRESH] = 0
    if lang is Language.ALL:
        return ground_terms(sig, max_size, cap)
    defined = rel.defined_symbols()
    cons_sig = {f: n for f, n in sig.items() if f not in defined}
    values = ground_terms(cons_sig, max(max_size - 1, 1), cap)
    by_size: dict = {}
    for v in values:
        by_size.setdefault(v.size, []).append(v)
    out = []
    for f in sorted(defined, key=fun_name):
        n = sig[f]
        if n == 0:
            out.append(App(f))
            continue
        for total in range(n, max_size):
            for sizes in _compositions(total, n):
                for args in itertools.product(*(by_size.get(k, []) for k in sizes)):
                    out.append(App(f, args))
                    if len(out) > cap:
                        raise EnumerationCapExceeded(f"more than {cap} terms of size <= {max_size}")
    return out


def complexity_sample(rel: RelativeTRS, lang: Language, n: int, fuel: int = 1_000_000, cap: int = 200_000) -> int:
    """Brute-force ``max dh(t)`` over starting terms of size <= n."""
    if not rel.strict:
        return 0
    memo: dict = {}
    best = 0
    for t in language_terms(rel, lang, n, cap):
        best = max(best, derivation_height(t, rel, fuel, memo))
    return best
