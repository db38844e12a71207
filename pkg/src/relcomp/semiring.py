"""Exact arithmetic over the natural and the arctic (max-plus) semiring.

Matrices are tuples of row tuples and vectors are plain tuples, so every
value is immutable and hashable.  Natural entries are Python ints; arctic
entries are Python ints or the :data:`NEG_INF` singleton.
"""

from __future__ import annotations

from typing import Sequence


class DimensionMismatch(ValueError):
    pass


class _NegInf:
    __slots__ = ()

    def __repr__(self):
        return "-inf"

    def __reduce__(self):
        return (_neg_inf, ())


def _neg_inf():
    return NEG_INF


NEG_INF = _NegInf()


class Natural:
    """The semiring (N, +, *, 0, 1) with the usual order."""

    name = "natural"
    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def ge(a, b):
        return a >= b

    @staticmethod
    def gt(a, b):
        return a > b


class Arctic:
    """The semiring (N ∪ {-inf}, max, +, -inf, 0).

    The strict order deliberately has ``-inf > -inf``; the weak order has
    ``x >= -inf`` for every ``x``.
    """

    name = "arctic"
    zero = NEG_INF
    one = 0

    @staticmethod
    def add(a, b):
        if a is NEG_INF:
            return b
        if b is NEG_INF:
            return a
        return a if a >= b else b

    @staticmethod
    def mul(a, b):
        if a is NEG_INF or b is NEG_INF:
            return NEG_INF
        return a + b

    @staticmethod
    def ge(a, b):
        if b is NEG_INF:
            return True
        if a is NEG_INF:
            return False
        return a >= b

    @staticmethod
    def gt(a, b):
        if a is NEG_INF:
            return b is NEG_INF
        if b is NEG_INF:
            return True
        return a > b


SEMIRINGS = {"natural": Natural, "arctic": Arctic}


def identity(n: int, sr=Natural):
    return tuple(tuple(sr.one if i == j else sr.zero for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int, sr=Natural):
    return tuple((sr.zero,) * cols for _ in range(rows))


def zero_vector(n: int, sr=Natural):
    return (sr.zero,) * n


def mat_mul(a, b, sr=Natural):
    """Matrix product in ``sr``; arctic gives ``max_k (a[i][k] + b[k][j])``."""
    if not a or not b or len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {_shape(a)} by {_shape(b)}")
    cols = list(zip(*b))
    add, mul, zero = sr.add, sr.mul, sr.zero
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                acc = add(acc, mul(x, y))
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def mat_vec(a, v, sr=Natural):
    if not a or len(a[0]) != len(v):
        raise DimensionMismatch(f"cannot apply {_shape(a)} to vector of length {len(v)}")
    add, mul, zero = sr.add, sr.mul, sr.zero
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            acc = add(acc, mul(x, y))
        out.append(acc)
    return tuple(out)


def mat_add(a, b, sr=Natural):
    if _shape(a) != _shape(b):
        raise DimensionMismatch(f"cannot add {_shape(a)} and {_shape(b)}")
    return tuple(tuple(sr.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def vec_add(u, v, sr=Natural):
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot add vectors of length {len(u)} and {len(v)}")
    return tuple(sr.add(x, y) for x, y in zip(u, v))


def _shape(m):
    if not m:
        return (0, 0)
    if isinstance(m[0], tuple):
        return (len(m), len(m[0]))
    return (len(m),)


def _entries(m):
    if m and isinstance(m[0], tuple):
        for row in m:
            yield from row
    else:
        yield from m


def compare(a, b, mode: str = "weak", sr=Natural) -> bool:
    """Pointwise comparison of two matrices or two vectors.

    ``mode`` is ``"weak"`` (every entry ``>=`` in the semiring's weak order)
    or ``"strict"`` (every entry ``>`` in the arctic strict order; arctic only).
    """
    if _shape(a) != _shape(b):
        raise DimensionMismatch(f"cannot compare {_shape(a)} with {_shape(b)}")
    if mode == "weak":
        rel = sr.ge
    elif mode == "strict":
        if sr is not Arctic:
            raise ValueError("strict pointwise comparison is only defined for arctic values")
        rel = sr.gt
    else:
        raise ValueError(f"unknown comparison mode {mode!r}")
    return all(rel(x, y) for x, y in zip(_entries(a), _entries(b)))


def shape_check(m, shape: str) -> bool:
    """Shape predicates used by the interpretation invariants.

    upper_triangular
        square, diagonal entries <= 1, zero below the diagonal.
    first_entry_positive
        ``m[0][0] >= 1`` (natural monotonicity).
    arctic_finite_top_left
        ``m[0][0]`` is finite (arctic monotonicity); also accepts a vector.
    """
    if shape == "upper_triangular":
        n = len(m)
        if any(len(row) != n for row in m):
            return False
        for i in range(n):
            for j in range(n):
                x = m[i][j]
                if i > j and x != 0:
                    return False
                if i == j and (x is NEG_INF or x > 1):
                    return False
        return True
    if shape == "first_entry_positive":
        x = m[0][0]
        return x is not NEG_INF and x >= 1
    if shape == "arctic_finite_top_left":
        x = m[0][0] if isinstance(m[0], tuple) else m[0]
        return x is not NEG_INF
    raise ValueError(f"unknown shape {shape!r}")


def parse_entry(x):
    """Decode a JSON entry: ints stay ints, the string ``"-inf"`` is NEG_INF."""
    if x == "-inf":
        return NEG_INF
    return int(x)


def dump_entry(x):
    return "-inf" if x is NEG_INF else x


def as_matrix(rows: Sequence[Sequence]) -> tuple:
    return tuple(tuple(parse_entry(x) if isinstance(x, str) else x for x in row) for row in rows)
