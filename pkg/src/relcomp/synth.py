"""SAT-based search for matrix interpretations.

Unknown matrix entries become bit-vectors in a :class:`~relcomp.circuit.Circuit`,
terms are evaluated symbolically with the ordinary interpretation code
running over circuit values, and the orientation conditions become gates.
Every model is decoded and re-checked with the plain-integer orientation
check before it is handed out.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import interpretations as interp_mod
from . import semiring as sr
from .circuit import FALSE, TRUE, ArcticRing, Circuit, NaturalRing, bits_value
from .interpretations import ArityUnsupported, LinearInterpretation, evaluate, orient
from .sat import SAT, UNSAT, Budget, solve as sat_solve
from .terms import RelativeTRS, fun_name

log = logging.getLogger(__name__)


class ShapeUnsatisfiableStatically(ValueError):
    pass


class VerificationFailed(RuntimeError):
    """A decoded model does not pass the independent orientation check."""


@dataclass(frozen=True)
class SearchShape:
    kind: str = "natural"  # "natural" or "arctic"
    dim: int = 1
    coeff_bits: int = 2
    const_bits: int = 3
    triangular: bool = True
    constant_growth: bool = False
    allow_neg_inf: bool = True

    def validate(self) -> None:
        if self.kind not in ("natural", "arctic"):
            raise ShapeUnsatisfiableStatically(f"unknown kind {self.kind!r}")
        if self.dim < 1:
            raise ShapeUnsatisfiableStatically("dimension must be at least 1")
        if self.coeff_bits < 1 or self.const_bits < 1:
            raise ShapeUnsatisfiableStatically("bit widths must be at least 1")
        if self.constant_growth and not (self.kind == "natural" and self.triangular):
            raise ShapeUnsatisfiableStatically("constant growth needs a triangular natural shape")

    @property
    def label(self) -> str:
        if self.kind == "arctic":
            return f"AMI dim {self.dim}"
        if self.dim == 1 and self.triangular:
            return "SLI"
        return f"TMI dim {self.dim}"

    @classmethod
    def sli(cls, const_bits: int = 3) -> "SearchShape":
        return cls("natural", 1, 1, const_bits, True, True)

    @classmethod
    def tmi(cls, dim: int, coeff_bits: int = 2, const_bits: int = 3, constant_growth: bool = False):
        return cls("natural", dim, coeff_bits, const_bits, True, constant_growth)

    @classmethod
    def ami(cls, dim: int, coeff_bits: int = 2, const_bits: int | None = None, allow_neg_inf: bool = True):
        const_bits = coeff_bits if const_bits is None else const_bits
        return cls("arctic", dim, coeff_bits, const_bits, False, False, allow_neg_inf)


@dataclass(frozen=True)
class Obligations:
    """Orientation requirements.

    Every rule in ``strict`` must be strictly oriented, every rule in
    ``weak`` weakly and every rule in ``ncp`` by the non-constant-part
    comparison; additionally at least one rule of ``some_strict`` must be
    strictly oriented.
    """

    strict: tuple = ()
    weak: tuple = ()
    ncp: tuple = ()
    some_strict: tuple = ()

    @classmethod
    def pair(cls, rel: RelativeTRS) -> "Obligations":
        return cls(weak=rel.strict + rel.weak, some_strict=rel.strict)

    @classmethod
    def gap(cls, rel: RelativeTRS) -> "Obligations":
        return cls(weak=rel.weak, ncp=rel.strict, some_strict=rel.strict)

    @classmethod
    def all_strict(cls, rel: RelativeTRS) -> "Obligations":
        return cls(strict=rel.strict, weak=rel.weak)


@dataclass(frozen=True)
class NoneFound:
    reason: str  # "unsat" or "unknown"

    def __bool__(self):
        return False


@dataclass
class Encoding:
    circuit: Circuit
    shape: SearchShape
    signature: dict
    unknowns: dict
    selectors: dict = field(default_factory=dict)

    def decode(self, model) -> LinearInterpretation:
        def val(x):
            if self.shape.kind == "natural":
                return bits_value(x, model)
            inf, bits = x
            if inf == TRUE or (inf != FALSE and model[abs(inf)] == (inf > 0)):
                return sr.NEG_INF
            return bits_value(bits, model)

        symbols = {}
        for f, (mats, vec) in self.unknowns.items():
            symbols[f] = (
                tuple(tuple(tuple(val(x) for x in row) for row in m) for m in mats),
                tuple(val(x) for x in vec),
            )
        return LinearInterpretation(self.shape.kind, self.shape.dim, symbols, self.shape.triangular)

    def exclude_strict_set(self, rules) -> None:
        """Forbid models whose selected strict rules are exactly ``rules``."""
        rules = set(rules)
        self.circuit.add_clause(
            [-s if r in rules else s for r, s in self.selectors.items()]
        )


def _unknown_natural(c: Circuit, shape: SearchShape, arity: int):
    d = shape.dim
    mats = []
    for _ in range(arity):
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                if shape.triangular and i > j:
                    row.append(())
                elif i == j and i == 0 and shape.triangular:
                    row.append((TRUE,))
                elif i == j and shape.triangular:
                    row.append(() if shape.constant_growth else c.fresh_bits(1))
                else:
                    row.append(c.fresh_bits(shape.coeff_bits))
            rows.append(tuple(row))
        mats.append(tuple(rows))
        if not shape.triangular:
            c.require(c.or_all(mats[-1][0][0]))
    vec = tuple(c.fresh_bits(shape.const_bits) for _ in range(d))
    return tuple(mats), vec


def _unknown_arctic(c: Circuit, shape: SearchShape, arity: int):
    d = shape.dim

    def entry(finite: bool, bits: int):
        inf = FALSE if finite or not shape.allow_neg_inf else c.fresh()
        return (inf, c.fresh_bits(bits))

    if arity == 0:
        return (), tuple(entry(i == 0, shape.const_bits) for i in range(d))
    m = tuple(tuple(entry(i == 0 and j == 0, shape.coeff_bits) for j in range(d)) for i in range(d))
    return (m,), tuple((TRUE, ()) for _ in range(d))


def _orient_gate(c: Circuit, ring, lf, rf, kind: str, d: int, mode: str) -> int:
    conds = []
    zero = sr.zero_matrix(d, d, ring)
    arctic_strict = kind == "arctic" and mode == "strict"
    for x in sorted(set(lf.coeffs) | set(rf.coeffs), key=lambda v: v.name):
        lm = lf.coeffs.get(x, zero)
        rm = rf.coeffs.get(x, zero)
        for row_l, row_r in zip(lm, rm):
            for a, b in zip(row_l, row_r):
                conds.append(ring.gt(a, b) if arctic_strict else ring.ge(a, b))
    if mode != "ncp":
        for i, (a, b) in enumerate(zip(lf.constant, rf.constant)):
            if arctic_strict or (mode == "strict" and i == 0):
                conds.append(ring.gt(a, b))
            else:
                conds.append(ring.ge(a, b))
    return c.and_all(conds)


def encode(rel: RelativeTRS, shape: SearchShape, obligations: Obligations) -> Encoding:
    shape.validate()
    if shape.kind == "arctic" and obligations.ncp:
        raise ShapeUnsatisfiableStatically("ncp comparison is only used with natural shapes")
    c = Circuit()
    ring = NaturalRing(c) if shape.kind == "natural" else ArcticRing(c)
    unknowns = {}
    for f, n in sorted(rel.signature.items(), key=lambda kv: fun_name(kv[0])):
        if shape.kind == "arctic":
            if n > 1:
                raise ArityUnsupported(f"arctic interpretation of {fun_name(f)}/{n}")
            unknowns[f] = _unknown_arctic(c, shape, n)
        else:
            unknowns[f] = _unknown_natural(c, shape, n)
    sym = LinearInterpretation(shape.kind, shape.dim, unknowns, shape.triangular, ring=ring)
    cache: dict = {}
    forms: dict = {}

    def gate(rule, mode):
        key = (rule, mode)
        if key not in forms:
            lf = evaluate(rule.lhs, sym, cache)
            rf = evaluate(rule.rhs, sym, cache)
            forms[key] = _orient_gate(c, ring, lf, rf, shape.kind, shape.dim, mode)
        return forms[key]

    for rule in obligations.strict:
        c.require(gate(rule, "strict"))
    for rule in obligations.weak:
        c.require(gate(rule, "weak"))
    for rule in obligations.ncp:
        c.require(gate(rule, "ncp"))
    enc = Encoding(c, shape, dict(rel.signature), unknowns)
    if obligations.some_strict:
        for rule in obligations.some_strict:
            s = c.fresh()
            enc.selectors[rule] = s
            c.add_clause([-s, gate(rule, "strict")])
        c.add_clause(list(enc.selectors.values()))
    return enc


def verify(interp: LinearInterpretation, shape: SearchShape, obligations: Obligations) -> list:
    """Independent re-check; returns a list of problems (empty when sound)."""
    problems = []
    try:
        interp.check_invariants()
    except interp_mod.InvariantViolation as exc:
        problems.append(str(exc))
    if shape.constant_growth and not interp_mod.constant_growth(interp):
        problems.append("interpretation does not have constant growth")
    for rules, mode in ((obligations.strict, "strict"), (obligations.weak, "weak"), (obligations.ncp, "ncp")):
        for rule in rules:
            if not orient(rule, interp, mode):
                problems.append(f"{rule} fails {mode} orientation")
    if obligations.some_strict and not any(orient(r, interp, "strict") for r in obligations.some_strict):
        problems.append("no candidate rule is strictly oriented")
    return problems


def synthesize(
    rel: RelativeTRS,
    shape: SearchShape,
    obligations: Obligations,
    budget: Budget | None = None,
    seed: int = 0,
    solver: str | None = None,
    exclude=(),
):
    """Search for an interpretation of ``shape`` meeting ``obligations``.

    ``exclude`` lists strict-rule sets the selectors must not reproduce.
    Returns a :class:`LinearInterpretation` or :class:`NoneFound`.
    """
    enc = encode(rel, shape, obligations)
    for rules in exclude:
        enc.exclude_strict_set(rules)
    result = sat_solve(enc.circuit.to_cnf(), budget, seed=seed, external=solver)
    if result.status != SAT:
        return NoneFound("unsat" if result.status == UNSAT else "unknown")
    interp = enc.decode(result.model)
    problems = verify(interp, shape, obligations)
    if problems:
        raise VerificationFailed("; ".join(problems))
    return interp
