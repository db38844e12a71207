"""Boolean circuits with bit-vector arithmetic, emitted straight to CNF.

Every gate is Tseitin-encoded as it is built.  Gates are hash-consed and
constants are folded, so circuits built over partially known values stay
small.  Literal ``1`` is the constant true and ``-1`` the constant false.

Bit-vectors are tuples of literals, least significant bit first, denoting
naturals of unbounded width: sums and products grow the width as needed,
so the arithmetic never overflows.
"""

from __future__ import annotations

from .sat import CNF

TRUE = 1
FALSE = -1


class Circuit:
    def __init__(self):
        self.num_vars = 1
        self.clauses: list = [[TRUE]]
        self._and: dict = {}
        self._xor: dict = {}

    # -- plumbing ------------------------------------------------------------

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def fresh_bits(self, k: int) -> tuple:
        return tuple(self.fresh() for _ in range(k))

    def add_clause(self, lits) -> None:
        out = []
        for lit in lits:
            if lit == TRUE:
                return
            if lit != FALSE:
                out.append(lit)
        self.clauses.append(out)

    def require(self, lit: int) -> None:
        self.add_clause([lit])

    def to_cnf(self) -> CNF:
        return CNF(self.num_vars, [list(c) for c in self.clauses])

    # -- gates ---------------------------------------------------------------

    def and2(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE or a == -b:
            return FALSE
        if a == TRUE or a == b:
            return b
        if b == TRUE:
            return a
        key = (a, b) if a < b else (b, a)
        g = self._and.get(key)
        if g is None:
            g = self.fresh()
            self.clauses.extend(([-g, a], [-g, b], [g, -a, -b]))
            self._and[key] = g
        return g

    def or2(self, a: int, b: int) -> int:
        return -self.and2(-a, -b)

    def and_all(self, lits) -> int:
        lits = list(lits)
        if any(x == FALSE for x in lits):
            return FALSE
        lits = sorted({x for x in lits if x != TRUE})
        if not lits:
            return TRUE
        if len(lits) == 1:
            return lits[0]
        if any(-x in lits for x in lits):
            return FALSE
        key = tuple(lits)
        g = self._and.get(key)
        if g is None:
            g = self.fresh()
            for x in lits:
                self.clauses.append([-g, x])
            self.clauses.append([g] + [-x for x in lits])
            self._and[key] = g
        return g

    def or_all(self, lits) -> int:
        return -self.and_all(-x for x in lits)

    def xor2(self, a: int, b: int) -> int:
        if abs(a) == 1:
            a, b = b, a
        if b == FALSE:
            return a
        if b == TRUE:
            return -a
        sign = 1
        if a < 0:
            a, sign = -a, -sign
        if b < 0:
            b, sign = -b, -sign
        if a == b:
            return FALSE if sign > 0 else TRUE
        key = (a, b) if a < b else (b, a)
        g = self._xor.get(key)
        if g is None:
            g = self.fresh()
            self.clauses.extend(([-g, a, b], [-g, -a, -b], [g, -a, b], [g, a, -b]))
            self._xor[key] = g
        return g * sign

    def ite(self, c: int, a: int, b: int) -> int:
        if c == TRUE or a == b:
            return a
        if c == FALSE:
            return b
        return self.or2(self.and2(c, a), self.and2(-c, b))

    def implies(self, a: int, b: int) -> int:
        return self.or2(-a, b)

    def full_add(self, a: int, b: int, c: int):
        s = self.xor2(self.xor2(a, b), c)
        carry = self.or2(self.and2(a, b), self.and2(c, self.or2(a, b)))
        return s, carry

    # -- bit-vectors ---------------------------------------------------------

    @staticmethod
    def const(n: int) -> tuple:
        bits = []
        while n:
            bits.append(TRUE if n & 1 else FALSE)
            n >>= 1
        return tuple(bits)

    @staticmethod
    def trim(v) -> tuple:
        v = list(v)
        while v and v[-1] == FALSE:
            v.pop()
        return tuple(v)

    def add(self, a, b) -> tuple:
        if not a:
            return tuple(b)
        if not b:
            return tuple(a)
        n = max(len(a), len(b))
        out = []
        carry = FALSE
        for i in range(n):
            x = a[i] if i < len(a) else FALSE
            y = b[i] if i < len(b) else FALSE
            s, carry = self.full_add(x, y, carry)
            out.append(s)
        out.append(carry)
        return self.trim(out)

    def mul(self, a, b) -> tuple:
        if not a or not b:
            return ()
        if len(a) < len(b):
            a, b = b, a
        acc: tuple = ()
        for i, bit in enumerate(b):
            if bit == FALSE:
                continue
            row = (FALSE,) * i + tuple(self.and2(bit, x) for x in a)
            acc = self.add(acc, self.trim(row))
        return acc

    def _cmp(self, a, b, strict: bool) -> int:
        # scan from the least significant bit: res = a[0..i] >(=) b[0..i]
        n = max(len(a), len(b))
        res = FALSE if strict else TRUE
        for i in range(n):
            x = a[i] if i < len(a) else FALSE
            y = b[i] if i < len(b) else FALSE
            res = self.or2(self.and2(x, -y), self.and2(-self.xor2(x, y), res))
        return res

    def ge(self, a, b) -> int:
        return self._cmp(a, b, False)

    def gt(self, a, b) -> int:
        return self._cmp(a, b, True)

    def eq(self, a, b) -> int:
        n = max(len(a), len(b))
        return self.and_all(
            -self.xor2(a[i] if i < len(a) else FALSE, b[i] if i < len(b) else FALSE) for i in range(n)
        )

    def select(self, c: int, a, b) -> tuple:
        n = max(len(a), len(b))
        return self.trim(
            self.ite(c, a[i] if i < len(a) else FALSE, b[i] if i < len(b) else FALSE) for i in range(n)
        )

    def max(self, a, b) -> tuple:
        if not a:
            return tuple(b)
        if not b:
            return tuple(a)
        return self.select(self.ge(a, b), a, b)


def bits_value(bits, model) -> int:
    """Decode a bit-vector under a SAT model (list indexed by variable)."""
    out = 0
    for i, lit in enumerate(bits):
        v = model[abs(lit)] if abs(lit) != 1 else True
        if (lit > 0) == v:
            out |= 1 << i
    return out


class NaturalRing:
    """Natural-number semiring whose values are bit-vectors of a circuit."""

    name = "natural"

    def __init__(self, circuit: Circuit):
        self.c = circuit
        self.zero = ()
        self.one = (TRUE,)

    def add(self, a, b):
        return self.c.add(a, b)

    def mul(self, a, b):
        return self.c.mul(a, b)

    def ge(self, a, b) -> int:
        return self.c.ge(a, b)

    def gt(self, a, b) -> int:
        return self.c.gt(a, b)


class ArcticRing:
    """Arctic semiring over circuit values ``(is_neg_inf, magnitude bits)``."""

    name = "arctic"

    def __init__(self, circuit: Circuit):
        self.c = circuit
        self.zero = (TRUE, ())
        self.one = (FALSE, ())

    def add(self, a, b):
        c = self.c
        ia, ba = a
        ib, bb = b
        if ia == TRUE:
            return b
        if ib == TRUE:
            return a
        if ia == FALSE and ib == FALSE:
            return (FALSE, c.max(ba, bb))
        bits = c.select(ia, bb, c.select(ib, ba, c.max(ba, bb)))
        return (c.and2(ia, ib), bits)

    def mul(self, a, b):
        c = self.c
        ia, ba = a
        ib, bb = b
        if ia == TRUE or ib == TRUE:
            return self.zero
        return (c.or2(ia, ib), c.add(ba, bb))

    def ge(self, a, b) -> int:
        c = self.c
        ia, ba = a
        ib, bb = b
        return c.or2(ib, c.and2(-ia, c.ge(ba, bb)))

    def gt(self, a, b) -> int:
        c = self.c
        ia, ba = a
        ib, bb = b
        return c.or2(c.and2(ia, ib), c.and2(-ia, c.or2(ib, c.gt(ba, bb))))
