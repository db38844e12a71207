"""Linear matrix interpretations over the natural and arctic semirings.

A symbol ``f`` of arity ``n`` is interpreted as
``f(x1..xn) = F1 x1 + ... + Fn xn + f0``; the arctic variant only admits
unary symbols and constants, with ``+`` read as ``max`` and products as
max-plus products.  Terms evaluate symbolically to a :class:`LinearForm`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import semiring as sr
from .semiring import NEG_INF
from .terms import Rule, RelativeTRS, Term, Var, fun_name


class InterpretationError(ValueError):
    pass


class MissingSymbol(InterpretationError):
    pass


class ArityUnsupported(InterpretationError):
    pass


class InvariantViolation(InterpretationError):
    pass


@dataclass
class LinearInterpretation:
    """Per-symbol argument matrices and constant vector.

    ``kind`` is ``"natural"`` or ``"arctic"``.  For natural interpretations
    ``triangular`` marks a TMI; a triangular interpretation of dimension 1
    is an SLI.
    """

    kind: str
    dim: int
    symbols: dict = field(default_factory=dict)
    triangular: bool = False
    # alternative value domain, e.g. circuit-valued entries during synthesis
    ring: object = field(default=None, compare=False, repr=False)

    @property
    def semiring(self):
        return self.ring if self.ring is not None else sr.SEMIRINGS[self.kind]

    @property
    def label(self) -> str:
        if self.kind == "arctic":
            return f"AMI dim {self.dim}"
        if self.triangular and self.dim == 1:
            return "SLI"
        if self.triangular:
            return f"TMI dim {self.dim}"
        return f"matrix interpretation dim {self.dim}"

    def degree(self) -> int:
        if self.kind == "arctic":
            return 1
        return self.dim

    def check_invariants(self) -> None:
        d = self.dim
        for f, (mats, vec) in self.symbols.items():
            name = fun_name(f)
            if len(vec) != d or any(len(m) != d or any(len(r) != d for r in m) for m in mats):
                raise InvariantViolation(f"{name}: entries are not of dimension {d}")
            if self.kind == "natural":
                for m in mats:
                    if not sr.shape_check(m, "first_entry_positive"):
                        raise InvariantViolation(f"{name}: top-left entry must be >= 1")
                    if self.triangular and not sr.shape_check(m, "upper_triangular"):
                        raise InvariantViolation(f"{name}: matrix is not upper triangular")
                if any(x is NEG_INF or x < 0 for m in mats for r in m for x in r):
                    raise InvariantViolation(f"{name}: negative entry")
            else:
                if len(mats) > 1:
                    raise InvariantViolation(f"{name}: arctic interpretations allow arity <= 1")
                if mats and not sr.shape_check(mats[0], "arctic_finite_top_left"):
                    raise InvariantViolation(f"{name}: top-left entry must be finite")
                if not mats and vec[0] is NEG_INF:
                    raise InvariantViolation(f"{name}: first constant entry must be finite")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dimension": self.dim,
            "triangular": self.triangular,
            "symbols": {
                fun_name(f): {
                    "matrices": [[[sr.dump_entry(x) for x in row] for row in m] for m in mats],
                    "constant": [sr.dump_entry(x) for x in vec],
                }
                for f, (mats, vec) in sorted(self.symbols.items(), key=lambda kv: fun_name(kv[0]))
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearInterpretation":
        symbols = {}
        for name, entry in data["symbols"].items():
            mats = tuple(sr.as_matrix(m) for m in entry["matrices"])
            vec = tuple(sr.parse_entry(x) for x in entry["constant"])
            symbols[name] = (mats, vec)
        return cls(data["kind"], data["dimension"], symbols, data.get("triangular", False))

    def describe(self) -> list:
        lines = []
        for f, (mats, vec) in sorted(self.symbols.items(), key=lambda kv: fun_name(kv[0])):
            parts = [f"{_fmt_matrix(m)}*x{i + 1}" for i, m in enumerate(mats)]
            if self.kind == "natural" or not mats:
                parts.append(_fmt_vector(vec))
            lines.append(f"{fun_name(f)}: " + " + ".join(parts))
        return lines


def _fmt_matrix(m) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in m) + "]"


def _fmt_vector(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


@dataclass(frozen=True)
class LinearForm:
    """``sum_x coeffs[x] * x + constant`` in the interpretation's semiring."""

    coeffs: dict
    constant: tuple


def evaluate(t: Term, interp: LinearInterpretation, _cache: dict | None = None) -> LinearForm:
    s = interp.semiring
    d = interp.dim
    cache = {} if _cache is None else _cache

    def go(u):
        hit = cache.get(u)
        if hit is not None:
            return hit
        if isinstance(u, Var):
            res = LinearForm({u: sr.identity(d, s)}, sr.zero_vector(d, s))
        else:
            entry = interp.symbols.get(u.fun)
            if entry is None:
                raise MissingSymbol(f"no interpretation for {fun_name(u.fun)}")
            if interp.kind == "arctic" and len(u.args) > 1:
                raise ArityUnsupported(f"arctic interpretation of {fun_name(u.fun)}/{len(u.args)}")
            mats, vec = entry
            coeffs: dict = {}
            const = vec
            for m, a in zip(mats, u.args):
                sub = go(a)
                for x, c in sub.coeffs.items():
                    prod = sr.mat_mul(m, c, s)
                    coeffs[x] = sr.mat_add(coeffs[x], prod, s) if x in coeffs else prod
                const = sr.vec_add(const, sr.mat_vec(m, sub.constant, s), s)
            res = LinearForm(coeffs, const)
        cache[u] = res
        return res

    return go(t)


def _compare_forms(left: LinearForm, right: LinearForm, interp, mode: str) -> bool:
    s = interp.semiring
    d = interp.dim
    zero = sr.zero_matrix(d, d, s)
    for x in set(left.coeffs) | set(right.coeffs):
        lm = left.coeffs.get(x, zero)
        rm = right.coeffs.get(x, zero)
        if mode == "strict" and interp.kind == "arctic":
            if not sr.compare(lm, rm, "strict", s):
                return False
        elif not sr.compare(lm, rm, "weak", s):
            return False
    if mode == "ncp":
        return True
    if interp.kind == "arctic":
        return sr.compare(left.constant, right.constant, "strict" if mode == "strict" else "weak", s)
    if not sr.compare(left.constant, right.constant, "weak", s):
        return False
    if mode == "strict":
        return left.constant[0] > right.constant[0]
    return True


MODES = ("strict", "weak", "ncp")


def orient(rule: Rule, interp: LinearInterpretation, mode: str = "strict") -> bool:
    """Check ``lhs > rhs`` (strict), ``lhs >= rhs`` (weak) or the
    non-constant-part comparison (ncp) by absolute positiveness."""
    if mode not in MODES:
        raise ValueError(f"unknown orientation mode {mode!r}")
    return _compare_forms(evaluate(rule.lhs, interp), evaluate(rule.rhs, interp), interp, mode)


@dataclass(frozen=True)
class CompatiblePair:
    strict_rules: tuple
    degree: int


@dataclass(frozen=True)
class Incompatible:
    reason: str


def classify_pair(rel: RelativeTRS, interp: LinearInterpretation):
    """All strict rules strictly and all weak rules weakly oriented?"""
    interp.check_invariants()
    for rule in rel.strict:
        if not orient(rule, interp, "strict"):
            return Incompatible(f"{rule} is not strictly oriented")
    for rule in rel.weak:
        if not orient(rule, interp, "weak"):
            return Incompatible(f"{rule} is not weakly oriented")
    return CompatiblePair(rel.strict, interp.degree())


def split_pair(rel: RelativeTRS, interp: LinearInterpretation):
    """Partial variant: the strictly oriented strict rules, provided every
    rule of ``rel`` is at least weakly oriented; otherwise Incompatible."""
    interp.check_invariants()
    shifted = []
    for rule in rel.strict:
        if orient(rule, interp, "strict"):
            shifted.append(rule)
        elif not orient(rule, interp, "weak"):
            return Incompatible(f"{rule} is not weakly oriented")
    for rule in rel.weak:
        if not orient(rule, interp, "weak"):
            return Incompatible(f"{rule} is not weakly oriented")
    if not shifted:
        return Incompatible("no rule is strictly oriented")
    return CompatiblePair(tuple(shifted), interp.degree())


def constant_growth(interp: LinearInterpretation) -> bool:
    """Sufficient criterion: every matrix is upper triangular and has a zero
    diagonal apart from the top-left entry."""
    if interp.kind != "natural":
        return False
    for mats, _ in interp.symbols.values():
        for m in mats:
            if not sr.shape_check(m, "upper_triangular"):
                return False
            if any(m[i][i] != 0 for i in range(1, len(m))):
                return False
    return True


def concrete_value(t: Term, interp: LinearInterpretation, assignment: dict | None = None):
    """Bottom-up evaluation of ``t`` to a vector under ``assignment``."""
    s = interp.semiring
    assignment = assignment or {}
    if isinstance(t, Var):
        return assignment[t]
    mats, vec = interp.symbols[t.fun]
    out = vec
    for m, a in zip(mats, t.args):
        out = sr.vec_add(out, sr.mat_vec(m, concrete_value(a, interp, assignment), s), s)
    return out


def sli(weights: dict) -> LinearInterpretation:
    """The SLI ``f(x1..xn) = x1 + ... + xn + weights[f]``; arities come from
    ``weights`` values given as ``(arity, weight)`` pairs."""
    symbols = {f: (tuple(((1,),) for _ in range(n)), (w,)) for f, (n, w) in weights.items()}
    return LinearInterpretation("natural", 1, symbols, triangular=True)

