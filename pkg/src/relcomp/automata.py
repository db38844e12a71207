"""Relative match-bounds via tree automata completion.

Enriched symbols are pairs ``(name, height)`` printed as ``name_height``.
An automaton compatible with the enriched system certifies that rewriting
from height-0 terms never produces heights above ``c``, which yields a
linear bound on the number of strict steps.

Two completion modes exist.  ``LINEAR`` is for left-linear,
non-duplicating systems.  ``RAISE`` handles non-left-linear but
non-duplicating systems: the automaton is kept quasi-deterministic and
raise-consistent, and left-hand sides are matched with the designated
transitions only.

Epsilon transitions are stored explicitly; all checks work on the
*effective* transitions ``l -> q'`` with ``l -> q`` stored and ``q``
reaching ``q'`` by epsilon steps.
"""

from __future__ import annotations

import enum
import itertools
import time
from collections import Counter
from dataclasses import dataclass, field

from .terms import (
    FRESH,
    App,
    Language,
    RelativeTRS,
    Rule,
    Term,
    Var,
    fcount,
    fun_name,
    is_linear,
    map_funs,
    replace,
    substitute,
)


class PreconditionViolated(ValueError):
    pass


class NoConstant(ValueError):
    pass


class Mode(enum.Enum):
    LINEAR = "linear"
    RAISE = "raise"


# ---------------------------------------------------------------------------
# enriched terms and rules


def lift(t: Term, h: int) -> Term:
    return map_funs(t, lambda f, pos: (f, h))


def base(t: Term) -> Term:
    return map_funs(t, lambda f, pos: f[0])


def height_multiset(t: Term) -> Counter:
    """Multiset of the heights of all function symbols of ``t``."""
    out: Counter = Counter()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            out[u.fun[1]] += 1
            stack.extend(u.args)
    return out


def _min_height(t: Term) -> int:
    return min(height_multiset(t))


def match_rule(rule: Rule, lhs: Term) -> Rule:
    """The rule of match(R) with enriched left-hand side ``lhs``."""
    _check_base(rule, lhs)
    return Rule(lhs, lift(rule.rhs, 1 + _min_height(lhs)))


def matchrt_height(rule: Rule, lhs: Term, c: int) -> int:
    root = lhs.fun[1]
    if fcount(rule.lhs) >= fcount(rule.rhs) and lift(rule.lhs, root) == lhs:
        return min(c, root)
    return min(c, 1 + _min_height(lhs))


def matchrt_rule(rule: Rule, lhs: Term, c: int) -> Rule:
    """The rule of matchRT^c(S) with enriched left-hand side ``lhs``."""
    _check_base(rule, lhs)
    return Rule(lhs, lift(rule.rhs, matchrt_height(rule, lhs, c)))


def _check_base(rule: Rule, lhs: Term) -> None:
    if base(lhs) != rule.lhs:
        raise ValueError(f"{lhs} is not an enrichment of {rule.lhs}")


def label(t: Term, heights) -> Term:
    """Enrich ``t`` with ``heights`` given in pre-order of its symbols."""
    it = iter(heights)

    def go(u):
        if isinstance(u, Var):
            return u
        h = next(it)
        return App((u.fun, h), [go(a) for a in u.args])

    return go(t)


def raise_at(t: Term, pos: tuple) -> Term:
    """Apply the raise rule ``f_c(...) -> f_{c+1}(...)`` at ``pos``."""
    if not pos:
        name, h = t.fun
        return App((name, h + 1), t.args)
    args = list(t.args)
    args[pos[0]] = raise_at(args[pos[0]], pos[1:])
    return App(t.fun, args)


def join(terms) -> Term:
    """Least common raise of enriched terms with equal base (pointwise max)."""
    first = terms[0]
    if isinstance(first, Var):
        if any(u != first for u in terms):
            raise ValueError("cannot join different terms")
        return first
    if any(isinstance(u, Var) or u.fun[0] != first.fun[0] or len(u.args) != len(first.args) for u in terms):
        raise ValueError("cannot join terms with different bases")
    h = max(u.fun[1] for u in terms)
    return App((first.fun[0], h), [join([u.args[i] for u in terms]) for i in range(len(first.args))])


def _match_modulo_base(pattern: Term, t: Term, bindings: dict) -> bool:
    """Match a base pattern against an enriched term, collecting all
    subterms bound to each variable."""
    if isinstance(pattern, Var):
        bindings.setdefault(pattern, []).append(t)
        return True
    if isinstance(t, Var) or t.fun[0] != pattern.fun or len(t.args) != len(pattern.args):
        return False
    return all(_match_modulo_base(p, a, bindings) for p, a in zip(pattern.args, t.args))


def _top_part(pattern: Term, t: Term) -> Term:
    """The enriched left-hand side: ``t`` cut at the variables of ``pattern``."""
    if isinstance(pattern, Var):
        return pattern
    return App(t.fun, [_top_part(p, a) for p, a in zip(pattern.args, t.args)])


def enriched_steps(t: Term, rel: RelativeTRS, c: int):
    """One-step successors of an enriched term under the raise-aware
    relation of match(R) / matchRT^c(S).

    Yields ``(successor, is_strict, enriched_rule)``.  Non-linear variables
    match subterms with equal base; the bound value is their join.
    """
    strict_count = len(rel.strict)

    def go(u, pos):
        if isinstance(u, Var):
            return
        for idx, rule in enumerate(rel.rules):
            bindings: dict = {}
            if not _match_modulo_base(rule.lhs, u, bindings):
                continue
            try:
                sigma = {x: join(ts) for x, ts in bindings.items()}
            except ValueError:
                continue
            lhs = _top_part(rule.lhs, u)
            if idx < strict_count:
                er = match_rule(rule, lhs)
            else:
                er = matchrt_rule(rule, lhs, c)
            yield pos, substitute(er.rhs, sigma), idx < strict_count, er
        for i, a in enumerate(u.args):
            yield from go(a, pos + (i,))

    for pos, new, is_strict, er in go(t, ()):
        yield replace(t, pos, new), is_strict, er


# ---------------------------------------------------------------------------
# multisets


def drop(m: Counter, n: int) -> Counter:
    out = Counter(m)
    out.pop(n, None)
    return out


def _mgt(a: Counter, b: Counter) -> bool:
    # replacing elements by *larger* ones is a decrease
    a = +a
    b = +b
    if a == b:
        return False
    for y, k in b.items():
        if k > a.get(y, 0):
            if not any(x < y and a[x] > b.get(x, 0) for x in a):
                return False
    return True


def multiset_compare(a, b, mode: str = "gt", c: int | None = None) -> bool:
    """Compare height multisets.

    ``mode`` is ``"gt"``, ``"ge"``, ``"gtc"`` or ``"gec"``; the last two
    drop every occurrence of ``c`` from both sides first.
    """
    a = Counter(a)
    b = Counter(b)
    if mode in ("gtc", "gec"):
        if c is None:
            raise ValueError("the bounded comparisons need c")
        a, b = drop(a, c), drop(b, c)
        mode = mode[:2]
    if mode == "gt":
        return _mgt(a, b)
    if mode == "ge":
        return +a == +b or _mgt(a, b)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# tree automata


@dataclass
class TreeAutomaton:
    """States are positive ints; ``trans`` maps ``(symbol, arg_states)`` to
    a set of target states and ``eps`` maps a state to its epsilon
    successors.  ``designated`` records the designated state of each
    left-hand side (only used by raise-mode automata)."""

    states: set = field(default_factory=set)
    finals: set = field(default_factory=set)
    trans: dict = field(default_factory=dict)
    eps: dict = field(default_factory=dict)
    designated: dict = field(default_factory=dict)

    def __post_init__(self):
        self._version = 0
        self._cache_version = -1
        self._eff = None
        self._index = None

    # -- construction --------------------------------------------------------

    def new_state(self) -> int:
        q = max(self.states, default=0) + 1
        self.states.add(q)
        self._version += 1
        return q

    def add_transition(self, sym, args, q) -> bool:
        targets = self.trans.setdefault((sym, tuple(args)), set())
        if q in targets:
            return False
        targets.add(q)
        self.states.add(q)
        self.states.update(args)
        self._version += 1
        return True

    def add_eps(self, p, q) -> bool:
        if p == q or q in self.eps.get(p, ()):
            return False
        self.eps.setdefault(p, set()).add(q)
        self.states.update((p, q))
        self._version += 1
        return True

    def add_final(self, q) -> bool:
        if q in self.finals:
            return False
        self.finals.add(q)
        self._version += 1
        return True

    def copy(self) -> "TreeAutomaton":
        return TreeAutomaton(
            set(self.states),
            set(self.finals),
            {k: set(v) for k, v in self.trans.items()},
            {k: set(v) for k, v in self.eps.items()},
            dict(self.designated),
        )

    # -- derived views -------------------------------------------------------

    def closure(self, q) -> frozenset:
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in self.eps.get(p, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def _refresh(self):
        if self._cache_version == self._version:
            return
        closures: dict = {}
        eff = {}
        for lhs, targets in self.trans.items():
            out = set()
            for q in targets:
                if q not in closures:
                    closures[q] = self.closure(q)
                out |= closures[q]
            eff[lhs] = frozenset(out)
        index: dict = {}
        for (sym, args), targets in sorted(eff.items(), key=lambda kv: _lhs_key(kv[0])):
            index.setdefault(sym, []).append((args, targets))
        self._eff = eff
        self._index = index
        self._cache_version = self._version

    def effective(self) -> dict:
        self._refresh()
        return self._eff

    def index(self) -> dict:
        self._refresh()
        return self._index

    def designated_state(self, lhs):
        return self.designated.get(lhs)

    def max_height(self) -> int:
        return max((sym[1] for sym, _ in self.trans), default=0)

    def reach(self, u) -> frozenset:
        """States reachable from ``u``: an int (a state) or a pair
        ``(symbol, children)`` built from the same two forms."""
        if isinstance(u, int):
            return self.closure(u)
        sym, children = u
        sets = [self.reach(ch) for ch in children]
        out = set()
        for args, targets in self.index().get(sym, ()):
            if all(a in s for a, s in zip(args, sets)):
                out |= targets
        return frozenset(out)

    def accepts(self, t: Term) -> bool:
        return bool(self.reach(_ground_to_node(t)) & self.finals)

    # -- output --------------------------------------------------------------

    def transition_lines(self) -> list:
        lines = []
        for (sym, args), targets in sorted(self.trans.items(), key=lambda kv: _lhs_key(kv[0])):
            lhs = fun_name(sym) + (f"({','.join(map(str, args))})" if args else "")
            for q in sorted(targets):
                lines.append(f"{lhs} -> {q}")
        for p in sorted(self.eps):
            for q in sorted(self.eps[p]):
                lines.append(f"{p} -> {q}")
        return lines

    def to_json(self) -> dict:
        return {
            "states": sorted(self.states),
            "finals": sorted(self.finals),
            "transitions": self.transition_lines(),
            "designated": [
                [fun_name(sym), list(args), q]
                for (sym, args), q in sorted(self.designated.items(), key=lambda kv: _lhs_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TreeAutomaton":
        a = cls()
        a.states.update(data["states"])
        a.finals.update(data["finals"])
        for line in data["transitions"]:
            lhs, q = line.rsplit(" -> ", 1)
            if lhs.isdigit():
                a.add_eps(int(lhs), int(q))
                continue
            sym, args = _parse_lhs(lhs)
            a.add_transition(sym, args, int(q))
        for name, args, q in data.get("designated", []):
            a.designated[(_parse_sym(name), tuple(args))] = q
        return a


def _parse_sym(name: str):
    base_name, h = name.rsplit("_", 1)
    return (base_name, int(h))


def _parse_lhs(lhs: str):
    if lhs.endswith(")"):
        head, rest = lhs.split("(", 1)
        args = tuple(int(x) for x in rest[:-1].split(","))
    else:
        head, args = lhs, ()
    return _parse_sym(head), args


def _lhs_key(lhs):
    (name, h), args = lhs
    return (str(name), h, args)


def _ground_to_node(t: Term):
    if isinstance(t, Var):
        raise ValueError("automata run on ground terms")
    return (t.fun, tuple(_ground_to_node(a) for a in t.args))


def automaton_signature(rel: RelativeTRS) -> dict:
    sig = dict(rel.signature)
    sig.setdefault(FRESH, 0)
    return sig


def initial_automaton(sig: dict, lang: Language, rel: RelativeTRS) -> TreeAutomaton:
    """Height-0 automaton for all ground terms or for constructor-based
    terms (defined root, constructor arguments)."""
    if not any(n == 0 for n in sig.values()):
        raise NoConstant("the signature has no constant")
    a = TreeAutomaton()
    symbols = sorted(sig.items(), key=lambda kv: str(kv[0]))
    if lang is Language.ALL:
        q = 1
        a.states.add(q)
        a.finals.add(q)
        for f, n in symbols:
            a.add_transition((f, 0), (q,) * n, q)
        return a
    defined = rel.defined_symbols()
    qc, qf = 1, 2
    a.states.update((qc, qf))
    a.finals.add(qf)
    if not any(n == 0 for f, n in sig.items() if f not in defined):
        raise NoConstant("no constructor constant")
    for f, n in symbols:
        a.add_transition((f, 0), (qc,) * n, qf if f in defined else qc)
    return a


# ---------------------------------------------------------------------------
# completion


@dataclass(frozen=True)
class Bounded:
    c: int
    automaton: TreeAutomaton
    mode: Mode


@dataclass(frozen=True)
class GaveUp:
    reason: str

    def __bool__(self):
        return False


@dataclass
class CompletionBudget:
    max_transitions: int = 2000
    max_states: int = 500
    deadline: float | None = None  # time.monotonic() value
    max_height: int = 8


class _OutOfBudget(Exception):
    pass


def _node(t: Term, sigma: dict):
    if isinstance(t, Var):
        return sigma[t]
    return (t.fun, tuple(_node(a, sigma) for a in t.args))


def _instances(pattern: Term, a: TreeAutomaton, raise_mode: bool):
    """All ``(enriched_lhs_heights, sigma, q)`` with ``l sigma ->* q`` where
    ``l`` is an enrichment of ``pattern``.  In raise mode only designated
    transitions are used and ``sigma`` maps into designated states."""
    index = a.index()
    designated_states = set(a.designated.values()) if raise_mode else None
    memo: dict = {}

    def go(p):
        key = id(p)
        if key in memo:
            return memo[key]
        out = []
        seen = set()
        for sym, rows in index.items():
            if sym[0] != p.fun:
                continue
            for args, targets in rows:
                if raise_mode:
                    d = a.designated.get((sym, args))
                    if d is None:
                        continue
                    targets = (d,)
                options = []
                for sub, q in zip(p.args, args):
                    if isinstance(sub, Var):
                        if raise_mode and q not in designated_states:
                            options = None
                            break
                        options.append([((), ((sub, q),))])
                    else:
                        opts = [(hs, sg) for hs, sg, s in go(sub) if s == q]
                        if not opts:
                            options = None
                            break
                        options.append(opts)
                if options is None:
                    continue
                for combo in itertools.product(*options):
                    sigma: dict = {}
                    ok = True
                    hs = (sym[1],)
                    for sub_hs, sub_sigma in combo:
                        hs += sub_hs
                        for x, q in sub_sigma:
                            if sigma.setdefault(x, q) != q:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        continue
                    frozen = tuple(sorted(sigma.items(), key=lambda kv: kv[0].name))
                    for q in sorted(targets):
                        item = (hs, frozen, q)
                        if item not in seen:
                            seen.add(item)
                            out.append(item)
        memo[key] = out
        return out

    return sorted(go(pattern), key=lambda it: (it[1] and tuple(q for _, q in it[1]), it[0], it[2]))


class _Completion:
    def __init__(self, rel: RelativeTRS, a: TreeAutomaton, mode: Mode, budget: CompletionBudget):
        self.rel = rel
        self.a = a
        self.raise_mode = mode is Mode.RAISE
        self.budget = budget

    def check_budget(self):
        a, b = self.a, self.budget
        n_trans = sum(len(v) for v in a.trans.values()) + sum(len(v) for v in a.eps.values())
        if n_trans > b.max_transitions:
            raise _OutOfBudget(f"more than {b.max_transitions} transitions")
        if len(a.states) > b.max_states:
            raise _OutOfBudget(f"more than {b.max_states} states")
        if a.max_height() > b.max_height:
            raise _OutOfBudget(f"heights above {b.max_height}")
        if b.deadline is not None and time.monotonic() > b.deadline:
            raise _OutOfBudget("deadline reached")

    # establishing u ->* q

    def ensure(self, u, q):
        a = self.a
        if q in a.reach(u):
            return
        if isinstance(u, int):
            a.add_eps(u, q)
            return
        sym, children = u
        # reuse a transition into q whose state arguments already fit
        for args, targets in a.index().get(sym, ()):
            if q not in targets:
                continue
            if all(not isinstance(ch, int) or p in a.closure(ch) for ch, p in zip(children, args)):
                for ch, p in zip(children, args):
                    if not isinstance(ch, int):
                        self.ensure(ch, p)
                return
        args = tuple(self.state_for(ch) for ch in children)
        a.add_transition(sym, args, q)

    def state_for(self, u) -> int:
        """A state accepting ``u``: reuse identical left-hand sides, else
        allocate fresh states bottom-up."""
        if isinstance(u, int):
            return u
        a = self.a
        sym, children = u
        args = tuple(self.state_for(ch) for ch in children)
        targets = a.trans.get((sym, args))
        if targets:
            d = a.designated.get((sym, args))
            return d if d is not None else min(targets)
        q = a.new_state()
        a.add_transition(sym, args, q)
        return q

    # raise-mode closure

    def close(self):
        a = self.a
        while True:
            changed = False
            eff = a.effective()
            for lhs in sorted(eff, key=_lhs_key):
                targets = eff[lhs]
                d = a.designated.get(lhs)
                if d is None or d not in targets:
                    a.designated[lhs] = min(targets)
            by_arg: dict = {}
            for (sym, args), targets in eff.items():
                for i, p in enumerate(args):
                    by_arg.setdefault(p, []).append((sym, args, i, targets))
            for lhs in sorted(eff, key=_lhs_key):
                p = a.designated[lhs]
                for q in sorted(eff[lhs]):
                    if q == p:
                        continue
                    if q in a.finals:
                        changed |= a.add_final(p)
                    for sym, args, i, targets in by_arg.get(q, ()):
                        new_args = args[:i] + (p,) + args[i + 1:]
                        for t in targets:
                            changed |= a.add_transition(sym, new_args, t)
            lhs_by_args: dict = {}
            for (sym, args) in eff:
                lhs_by_args.setdefault((sym[0], args), []).append(sym[1])
            for (sym, args), targets in eff.items():
                for h in lhs_by_args[(sym[0], args)]:
                    if h > sym[1]:
                        for t in targets:
                            changed |= a.add_transition((sym[0], h), args, t)
            if not changed:
                return
            self.check_budget()

    def run(self) -> int:
        rel, a = self.rel, self.a
        n_strict = len(rel.strict)
        if self.raise_mode:
            self.close()
        while True:
            changed = False
            for idx, rule in enumerate(rel.rules):
                for hs, sigma, q in _instances(rule.lhs, a, self.raise_mode):
                    c = a.max_height()
                    lhs = label(rule.lhs, hs)
                    if idx < n_strict:
                        h = 1 + min(hs)
                    else:
                        h = matchrt_height(rule, lhs, c)
                    rhs = _node(lift(rule.rhs, h), dict(sigma))
                    if q in a.reach(rhs):
                        continue
                    self.ensure(rhs, q)
                    changed = True
                    if self.raise_mode:
                        self.close()
                    self.check_budget()
            if not changed:
                return a.max_height()


def complete(
    rel: RelativeTRS,
    lang: Language = Language.ALL,
    mode: Mode | None = None,
    budget: CompletionBudget | None = None,
):
    """Build an automaton compatible with matchRT(R/S, c) and the lifted
    language; returns :class:`Bounded` or :class:`GaveUp`."""
    mode = mode or choose_mode(rel)
    check_preconditions(rel, mode)
    budget = budget or CompletionBudget()
    a = initial_automaton(automaton_signature(rel), lang, rel)
    comp = _Completion(rel, a, mode, budget)
    try:
        c = comp.run()
    except _OutOfBudget as exc:
        return GaveUp(str(exc))
    return Bounded(c, a, mode)


def choose_mode(rel: RelativeTRS) -> Mode:
    if all(is_linear(r.lhs) for r in rel.rules):
        return Mode.LINEAR
    return Mode.RAISE


def check_preconditions(rel: RelativeTRS, mode: Mode) -> None:
    if any(r.is_duplicating for r in rel.rules):
        raise PreconditionViolated("the system is duplicating")
    if any(r.is_collapsing for r in rel.strict):
        raise PreconditionViolated("a strict rule is collapsing")
    if mode is Mode.LINEAR and not all(is_linear(r.lhs) for r in rel.rules):
        raise PreconditionViolated("linear mode needs a left-linear system")


# ---------------------------------------------------------------------------
# independent certificate check


def _all_instances_bruteforce(pattern: Term, a: TreeAutomaton, c: int, states, transitions_only_designated: bool):
    """Every enrichment (heights 0..c) and state substitution, by brute force."""
    n_funs = fcount(pattern)
    vars_ = sorted({v for v in _vars(pattern)}, key=lambda v: v.name)
    for hs in itertools.product(range(c + 1), repeat=n_funs):
        lhs = label(pattern, hs)
        for qs in itertools.product(sorted(states), repeat=len(vars_)):
            sigma = dict(zip(vars_, qs))
            node = _node(lhs, sigma)
            if transitions_only_designated:
                reached = _reach_designated(a, node)
                yield hs, sigma, ({reached} if reached is not None else set())
            else:
                yield hs, sigma, a.reach(node)


def _reach_designated(a: TreeAutomaton, u):
    if isinstance(u, int):
        return u
    sym, children = u
    args = []
    for ch in children:
        r = _reach_designated(a, ch)
        if r is None:
            return None
        args.append(r)
    return a.designated.get((sym, tuple(args)))


def _vars(t: Term):
    if isinstance(t, Var):
        yield t
    else:
        for x in t.args:
            yield from _vars(x)


def _language_included(a: TreeAutomaton, init: TreeAutomaton) -> bool:
    """Is every term accepted by ``init`` also accepted by ``a``?

    Runs the subset construction of ``a`` in lockstep with ``init``."""
    pairs: set = set()
    changed = True
    init_rows = sorted(init.trans.items(), key=lambda kv: _lhs_key(kv[0]))
    while changed:
        changed = False
        by_state: dict = {}
        for qi, sa in pairs:
            by_state.setdefault(qi, set()).add(sa)
        for (sym, args), targets in init_rows:
            choices = [sorted(by_state.get(q, ()), key=sorted) for q in args]
            for combo in itertools.product(*choices):
                reached = set()
                for a_args, a_targets in a.index().get(sym, ()):
                    if all(x in s for x, s in zip(a_args, combo)):
                        reached |= a_targets
                frozen = frozenset(reached)
                for qi in targets:
                    for q2 in init.closure(qi):
                        if (q2, frozen) not in pairs:
                            pairs.add((q2, frozen))
                            changed = True
    return all(sa & a.finals for qi, sa in pairs if qi in init.finals)


def certify(a: TreeAutomaton, rel: RelativeTRS, lang: Language, c: int, mode: Mode) -> bool:
    """Re-check a completion result from scratch."""
    try:
        check_preconditions(rel, mode)
        init = initial_automaton(automaton_signature(rel), lang, rel)
    except (PreconditionViolated, NoConstant):
        return False
    if a.max_height() > c:
        return False
    if not _language_included(a, init):
        return False
    raise_mode = mode is Mode.RAISE
    eff = a.effective()
    if raise_mode:
        # quasi-determinism with the recorded designated states
        for lhs, targets in eff.items():
            p = a.designated.get(lhs)
            if p is None or p not in targets:
                return False
            for q in targets:
                if q != p and not _subsumes(a, eff, p, q):
                    return False
        # raise-consistency
        for (sym, args), targets in eff.items():
            for (sym2, args2), targets2 in eff.items():
                if args2 == args and sym2[0] == sym[0] and sym2[1] > sym[1] and not targets <= targets2:
                    return False
        states = sorted(set(a.designated.values()))
    else:
        states = sorted(a.states)
    n_strict = len(rel.strict)
    for idx, rule in enumerate(rel.rules):
        for hs, sigma, reached in _all_instances_bruteforce(rule.lhs, a, c, states, raise_mode):
            if not reached:
                continue
            lhs = label(rule.lhs, hs)
            h = 1 + min(hs) if idx < n_strict else matchrt_height(rule, lhs, c)
            rhs_reach = a.reach(_node(lift(rule.rhs, h), sigma))
            if not set(reached) <= rhs_reach:
                return False
    return True


def _subsumes(a: TreeAutomaton, eff: dict, p, q) -> bool:
    if q in a.finals and p not in a.finals:
        return False
    for (sym, args), targets in eff.items():
        for i, x in enumerate(args):
            if x == q:
                other = eff.get((sym, args[:i] + (p,) + args[i + 1:]), frozenset())
                if not targets <= other:
                    return False
    return True
