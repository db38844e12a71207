"""Modular complexity proofs.

A CP problem is a relative system plus a start language.  Processors turn
a problem into child problems and a cost; a proof is closed when every
leaf has an empty strict part, and its bound is the sum (asymptotically:
the maximum degree) of all costs in the tree.

Processors:

* ``pair``: an interpretation orients every rule weakly and some strict
  rules strictly; those move to the weak part at the cost of the
  interpretation's degree.
* ``gap``: a constant-growth interpretation orients the weak rules
  weakly, some strict rules strictly and the remaining strict rules by
  the coefficient-only comparison; the oriented rules move to the weak
  part at linear cost.
* ``match-bounds``: a single strict rule is match(-raise)-RT-bounded
  relative to all other rules; it moves to the weak part at linear cost.
* ``split``: two children whose strict parts partition the strict rules,
  at constant cost.  Only used by :func:`tighten`.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

from . import automata
from .interpretations import ArityUnsupported, LinearInterpretation, orient
from .sat import Budget
from .synth import NoneFound, Obligations, SearchShape, ShapeUnsatisfiableStatically, synthesize
from .terms import Language, RelativeTRS

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True, order=True)
class Bound:
    """An asymptotic bound: ``degree`` 0 is O(1), ``degree`` k is O(n^k),
    ``degree`` None is unknown."""

    degree: int | None

    @classmethod
    def const(cls) -> "Bound":
        return cls(0)

    @classmethod
    def poly(cls, k: int) -> "Bound":
        if k < 1:
            raise ValueError("polynomial bounds have degree >= 1")
        return cls(k)

    @classmethod
    def unknown(cls) -> "Bound":
        return cls(None)

    @property
    def known(self) -> bool:
        return self.degree is not None

    def combine(self, other: "Bound") -> "Bound":
        if not self.known or not other.known:
            return Bound.unknown()
        return Bound(max(self.degree, other.degree))

    def better_than(self, other: "Bound") -> bool:
        if not self.known:
            return False
        return not other.known or self.degree < other.degree

    def __str__(self):
        if self.degree is None:
            return "?"
        if self.degree == 0:
            return "O(1)"
        if self.degree == 1:
            return "O(n)"
        return f"O(n^{self.degree})"

    @property
    def verdict(self) -> str:
        return "MAYBE" if not self.known else f"YES(?,{self})"

    @classmethod
    def parse(cls, text: str) -> "Bound":
        if text == "?":
            return cls.unknown()
        if text == "O(1)":
            return cls.const()
        if text == "O(n)":
            return cls.poly(1)
        if text.startswith("O(n^") and text.endswith(")"):
            return cls.poly(int(text[4:-1]))
        raise ValueError(f"not a bound: {text!r}")


# ---------------------------------------------------------------------------
# problems and proofs


@dataclass(frozen=True)
class CPProblem:
    rel: RelativeTRS
    lang: Language = Language.ALL

    @property
    def closed(self) -> bool:
        return not self.rel.strict

    def shift(self, rules) -> "CPProblem":
        """Move ``rules`` from the strict to the weak part."""
        rules = set(rules)
        strict = tuple(r for r in self.rel.strict if r not in rules)
        weak = self.rel.weak + tuple(r for r in self.rel.strict if r in rules)
        return CPProblem(self.rel.with_rules(strict, weak), self.lang)


@dataclass(frozen=True)
class SplitWitness:
    first: tuple
    second: tuple


@dataclass
class Step:
    processor: str  # "pair", "gap", "match-bounds" or "split"
    label: str
    cost: Bound
    shifted: tuple
    witness: object
    children: list = field(default_factory=list)
    note: str = ""


@dataclass
class ProofNode:
    problem: CPProblem
    step: Step | None = None

    @property
    def closed(self) -> bool:
        if self.step is None:
            return self.problem.closed
        return all(ch.closed for ch in self.step.children)

    def nodes(self):
        yield self
        if self.step is not None:
            for ch in self.step.children:
                yield from ch.nodes()


def total_bound(proof: ProofNode) -> Bound:
    if proof.step is None:
        return Bound.const() if proof.problem.closed else Bound.unknown()
    out = proof.step.cost
    for ch in proof.step.children:
        out = out.combine(total_bound(ch))
    return out


class BadPartition(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


@dataclass
class AnalysisConfig:
    lang: Language = Language.ALL
    timeout: float = 60.0
    dims: tuple = (1, 2, 3)
    coeff_bits: int = 2
    const_bits: int = 3
    seed: int = 0
    solver: str | None = None
    deterministic: bool = False
    # per SAT call; keeps one hard search from starving the portfolio
    max_conflicts: int | None = 15_000
    maximize_rounds: int = 8
    mb_transitions: int = 1000
    mb_states: int = 300
    mb_max_height: int = 6
    mb_seconds: float = 10.0
    # only processors whose cost degree is at most this are tried
    max_degree: int | None = None


class _Clock:
    def __init__(self, config: AnalysisConfig, deadline: float | None):
        self.config = config
        self.deadline = deadline

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def sat_budget(self) -> Budget:
        return Budget(max_conflicts=self.config.max_conflicts, deadline=self.deadline)

    def mb_budget(self) -> automata.CompletionBudget:
        c = self.config
        deadline = self.deadline
        if not c.deterministic:
            slice_end = time.monotonic() + c.mb_seconds
            deadline = slice_end if deadline is None else min(deadline, slice_end)
        return automata.CompletionBudget(c.mb_transitions, c.mb_states, deadline, c.mb_max_height)


def _clock(config: AnalysisConfig, clock: _Clock | None) -> _Clock:
    if clock is not None:
        return clock
    return _Clock(config, time.monotonic() + config.timeout if config.timeout else None)


# ---------------------------------------------------------------------------
# processors


def _search(rel, shape, obligations, config, clock, exclude=()):
    try:
        return synthesize(
            rel, shape, obligations, clock.sat_budget(), seed=config.seed, solver=config.solver, exclude=exclude
        )
    except (ArityUnsupported, ShapeUnsatisfiableStatically):
        return NoneFound("unsat")


def _maximize(rel, shape, base: Obligations, interp, config, clock):
    """Grow the strictly oriented set: repeatedly demand the current set
    plus at least one more candidate rule."""
    candidates = base.some_strict
    for _ in range(config.maximize_rounds):
        chosen = tuple(r for r in candidates if orient(r, interp, "strict"))
        rest = tuple(r for r in candidates if r not in chosen)
        if not rest or clock.expired():
            break
        ob = Obligations(
            strict=base.strict + chosen,
            weak=tuple(r for r in base.weak if r not in chosen),
            ncp=tuple(r for r in base.ncp if r not in chosen),
            some_strict=rest,
        )
        better = _search(rel, shape, ob, config, clock)
        if not better:
            break
        interp = better
    return interp


def pair_processor(problem: CPProblem, shape: SearchShape, config: AnalysisConfig | None = None, clock=None):
    """Complexity-pair step with an interpretation of ``shape``; returns a
    :class:`Step` or None when no interpretation is found."""
    config = config or AnalysisConfig()
    clock = _clock(config, clock)
    rel = problem.rel
    if not rel.strict:
        return None
    ob = Obligations.pair(rel)
    interp = _search(rel, shape, ob, config, clock)
    if not interp:
        return None
    interp = _maximize(rel, shape, ob, interp, config, clock)
    shifted = tuple(r for r in rel.strict if orient(r, interp, "strict"))
    _recheck(rel.rules, interp, "weak")
    return Step(
        "pair",
        interp.label,
        Bound.poly(interp.degree()),
        shifted,
        interp,
        [ProofNode(problem.shift(shifted))],
    )


def gap_processor(
    problem: CPProblem,
    shape: SearchShape | None = None,
    config: AnalysisConfig | None = None,
    clock=None,
    exclude=(),
):
    """Complexity-gap step with a constant-growth interpretation (an SLI
    by default).  ``exclude`` lists shifted sets to avoid."""
    config = config or AnalysisConfig()
    clock = _clock(config, clock)
    shape = shape or SearchShape.sli(config.const_bits)
    rel = problem.rel
    if not rel.strict:
        return None
    if not shape.constant_growth:
        raise ValueError("the gap processor needs a constant-growth shape")
    ob = Obligations.gap(rel)
    interp = _search(rel, shape, ob, config, clock, exclude)
    if not interp:
        return None
    if not exclude:
        interp = _maximize(rel, shape, ob, interp, config, clock)
    shifted = tuple(r for r in rel.strict if orient(r, interp, "strict"))
    _recheck(rel.weak, interp, "weak")
    _recheck(rel.strict, interp, "ncp")
    return Step(
        "gap",
        f"gap {interp.label}",
        Bound.poly(1),
        shifted,
        interp,
        [ProofNode(problem.shift(shifted))],
        note="linear cost bounds the shifted rules; the remaining rules are bounded by the child",
    )


def matchbounds_processor(problem: CPProblem, config: AnalysisConfig | None = None, clock=None):
    """Try each non-collapsing strict rule as the bounded part."""
    config = config or AnalysisConfig()
    clock = _clock(config, clock)
    rel = problem.rel
    if any(r.is_duplicating for r in rel.rules):
        return None
    for rule in rel.strict:
        if rule.is_collapsing or clock.expired():
            continue
        others = tuple(r for r in rel.rules if r != rule)
        sub = rel.with_rules((rule,), others)
        mode = automata.choose_mode(sub)
        try:
            result = automata.complete(sub, problem.lang, mode, clock.mb_budget())
        except (automata.PreconditionViolated, automata.NoConstant):
            continue
        if not result:
            log.debug("match-bounds gave up on %s: %s", rule, result.reason)
            continue
        if not automata.certify(result.automaton, sub, problem.lang, result.c, result.mode):
            raise AssertionError(f"completion produced an uncertified automaton for {rule}")
        return Step(
            "match-bounds",
            f"match-bounds c={result.c}" + (" raise" if result.mode is automata.Mode.RAISE else ""),
            Bound.poly(1),
            (rule,),
            result,
            [ProofNode(problem.shift((rule,)))],
        )
    return None


def split_processor(problem: CPProblem, first, second) -> Step:
    strict = set(problem.rel.strict)
    first, second = tuple(first), tuple(second)
    if set(first) & set(second) or set(first) | set(second) != strict:
        raise BadPartition("the parts must partition the strict rules")
    return Step(
        "split",
        "split",
        Bound.const(),
        (),
        SplitWitness(first, second),
        [ProofNode(problem.shift(second)), ProofNode(problem.shift(first))],
    )


def _recheck(rules, interp: LinearInterpretation, mode: str):
    for r in rules:
        if not orient(r, interp, mode):
            raise AssertionError(f"witness does not orient {r} ({mode})")


# ---------------------------------------------------------------------------
# strategy


def portfolio(problem: CPProblem, config: AnalysisConfig):
    """Processors in the order they are tried.  Fast searches come first
    so that some proof is found early; :func:`tighten` later retries the
    expensive steps with cheaper processors.  Yields
    ``(degree, name, runner)``."""
    c = config
    unary = all(n <= 1 for n in problem.rel.signature.values())
    dims = sorted(c.dims)

    def pair(shape):
        return lambda p, clk: pair_processor(p, shape, c, clk)

    yield 1, "gap SLI", lambda p, clk: gap_processor(p, SearchShape.sli(c.const_bits), c, clk)
    yield 1, "match-bounds", lambda p, clk: matchbounds_processor(p, c, clk)
    if 1 in dims:
        yield 1, "SLI", pair(SearchShape.tmi(1, c.coeff_bits, c.const_bits))
    small = [d for d in dims if d <= 2]
    large = [d for d in dims if d > 2]
    if unary:
        for d in small:
            yield 1, f"AMI dim {d}", pair(SearchShape.ami(d, c.coeff_bits, c.const_bits))
    if 2 in dims:
        shape = SearchShape.tmi(2, c.coeff_bits, c.const_bits, constant_growth=True)
        yield 1, "gap TMI dim 2", lambda p, clk: gap_processor(p, shape, c, clk)
    for d in small:
        if d >= 2:
            yield d, f"TMI dim {d}", pair(SearchShape.tmi(d, c.coeff_bits, c.const_bits))
    if unary:
        for d in large:
            yield 1, f"AMI dim {d}", pair(SearchShape.ami(d, c.coeff_bits, c.const_bits))
    for d in large:
        yield d, f"TMI dim {d}", pair(SearchShape.tmi(d, c.coeff_bits, c.const_bits))


def _first_step(problem: CPProblem, config: AnalysisConfig, clock: _Clock):
    """The first applicable processor.  When the gap step moves at most
    one rule, match-bounds is consulted too and preferred on a tie."""
    gap_step = None
    for degree, name, run in portfolio(problem, config):
        if config.max_degree is not None and degree > config.max_degree:
            continue
        if clock.expired():
            return None
        if name == "match-bounds" and gap_step is not None and len(gap_step.shifted) > 1:
            return gap_step
        step = run(problem, clock)
        if name == "gap SLI":
            gap_step = step
            continue
        if name == "match-bounds" and step is None and gap_step is not None:
            return gap_step
        if step is not None:
            log.info("%s shifts %d rule(s)", name, len(step.shifted))
            return step
    return gap_step


def _analyze(problem: CPProblem, config: AnalysisConfig, clock: _Clock) -> ProofNode:
    node = ProofNode(problem)
    if problem.closed or clock.expired():
        return node
    step = _first_step(problem, config, clock)
    if step is None:
        return node
    child = _analyze(step.children[0].problem, config, clock)
    if not child.closed and step.label == "gap SLI" and not clock.expired():
        # another strict set may leave an easier remainder
        retry = gap_processor(problem, SearchShape.sli(config.const_bits), config, clock, exclude=[step.shifted])
        if retry is not None:
            child2 = _analyze(retry.children[0].problem, config, clock)
            if child2.closed:
                step, child = retry, child2
    step.children = [child]
    node.step = step
    return node


def analyze(problem: CPProblem | RelativeTRS, config: AnalysisConfig | None = None, deadline=None) -> ProofNode:
    """Build a (possibly open) proof by applying the portfolio until the
    strict part is empty or no processor applies."""
    config = config or AnalysisConfig()
    if isinstance(problem, RelativeTRS):
        problem = CPProblem(problem, config.lang)
    if deadline is None and config.timeout:
        deadline = time.monotonic() + config.timeout
    return _analyze(problem, config, _Clock(config, deadline))


# ---------------------------------------------------------------------------
# tightening


def _steps_by_cost(proof: ProofNode):
    out = []
    for node in proof.nodes():
        if node.step is not None and node.step.processor != "split":
            out.append(node)
    return sorted(out, key=lambda n: -(n.step.cost.degree or 0))


def tighten(proof: ProofNode, config: AnalysisConfig | None = None, deadline=None) -> ProofNode:
    """Replace expensive steps by cheaper sub-proofs.

    For a step that shifted ``R2`` out of ``R/S`` at cost ``O(n^k)``, the
    problem ``R2/((R - R2) u S)`` is analysed with processors of degree
    below ``k``.  On success the step becomes a split whose first child
    keeps the old sub-proof and whose second child is the new proof.
    """
    config = config or AnalysisConfig()
    if deadline is None and config.timeout:
        deadline = time.monotonic() + config.timeout
    if not proof.closed:
        return proof
    clock = _Clock(config, deadline)
    improved = True
    tried: set = set()
    while improved and not clock.expired():
        improved = False
        for node in _steps_by_cost(proof):
            step = node.step
            k = step.cost.degree
            if k is None or k <= 1:
                break
            key = (node.problem.rel, step.shifted, k)
            if key in tried:
                continue
            tried.add(key)
            problem = node.problem
            rest = tuple(r for r in problem.rel.strict if r not in step.shifted)
            target = CPProblem(
                problem.rel.with_rules(step.shifted, rest + problem.rel.weak), problem.lang
            )
            sub = _analyze(target, replace(config, max_degree=k - 1), clock)
            if not sub.closed or not total_bound(sub).better_than(Bound.poly(k)):
                continue
            if not rest:
                node.step = sub.step
            else:
                split = split_processor(problem, rest, step.shifted)
                split.children = [step.children[0], sub]
                node.step = split
            improved = True
            break
    return proof


# ---------------------------------------------------------------------------
# rule numbering (used by the renderers)


def rule_numbers(proof: ProofNode) -> dict:
    """Number rules 1.. in the order of the root problem (strict first)."""
    return {r: i + 1 for i, r in enumerate(proof.problem.rel.rules)}
