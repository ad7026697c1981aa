"""Quadratic function fields k(t)[Y]/(Y^2 - h(t)) and the elliptic group law over them.

Elements are pairs (A, B) of rational functions standing for A + B*Y.  This is
enough to push the generic point of a curve through maps built from the group
law, Frobenius and Verschiebung, and read off coordinate functions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded
from .ff import FieldDescriptor
from .poly import Polynomial, RatFunc

DEGREE_BUDGET = 2000


@dataclass(frozen=True)
class QuadField:
    field: FieldDescriptor
    h: Polynomial
    budget: int = DEGREE_BUDGET

    def elem(self, A, B=None) -> "QElem":
        F = self.field
        A = A if isinstance(A, RatFunc) else RatFunc(A) if isinstance(A, Polynomial) else RatFunc.const(F, A)
        if B is None:
            B = RatFunc.const(F, 0)
        elif not isinstance(B, RatFunc):
            B = RatFunc(B) if isinstance(B, Polynomial) else RatFunc.const(F, B)
        return QElem(self, A, B)

    def const(self, c) -> "QElem":
        return self.elem(RatFunc.const(self.field, c))

    def t(self) -> "QElem":
        return self.elem(RatFunc.var(self.field))

    def Y(self) -> "QElem":
        return self.elem(RatFunc.const(self.field, 0), RatFunc.const(self.field, 1))


class QElem:
    __slots__ = ("K", "A", "B")

    def __init__(self, K: QuadField, A: RatFunc, B: RatFunc):
        self.K = K
        self.A = A
        self.B = B
        if max(A.degree, B.degree) > K.budget:
            raise BudgetExceeded(f"intermediate degree {max(A.degree, B.degree)} exceeds {K.budget}")

    def _co(self, other) -> "QElem":
        if isinstance(other, QElem):
            return other
        return self.K.elem(other)

    def __repr__(self):
        return f"({self.A!r}) + ({self.B!r})*Y"

    def __eq__(self, other):
        other = self._co(other)
        return self.A == other.A and self.B == other.B

    def __hash__(self):
        return hash((self.A, self.B))

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def __add__(self, other):
        o = self._co(other)
        return QElem(self.K, self.A + o.A, self.B + o.B)

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.K, -self.A, -self.B)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        if self.B.is_zero() and o.B.is_zero():
            return QElem(self.K, self.A * o.A, self.B)
        h = RatFunc(self.K.h, reduce=False)
        A = self.A * o.A + self.B * o.B * h
        B = self.A * o.B + self.B * o.A
        return QElem(self.K, A, B)

    __rmul__ = __mul__

    def norm(self) -> RatFunc:
        return self.A * self.A - self.B * self.B * RatFunc(self.K.h, reduce=False)

    def inverse(self) -> "QElem":
        if self.B.is_zero():
            return QElem(self.K, self.A.inverse(), self.B)
        n = self.norm().inverse()
        return QElem(self.K, self.A * n, -self.B * n)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()


class GenericPoint:
    """A point of y^2 = x^3 + a2 x^2 + a4 x over a QuadField, or None for infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x: QElem, y: QElem):
        self.x = x
        self.y = y


def gp_add(a2: int, a4: int, P: GenericPoint | None, Q: GenericPoint | None) -> GenericPoint | None:
    if P is None:
        return Q
    if Q is None:
        return P
    K = P.x.K
    F = K.field
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return None
        num = P.x * P.x * (F.from_int(3)) + P.x * F.mul(2, a2) + F.elem(a4)
        slope = num / (P.y * 2)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - F.elem(a2) - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return GenericPoint(x3, y3)


def gp_neg(P: GenericPoint | None) -> GenericPoint | None:
    return None if P is None else GenericPoint(P.x, -P.y)


def gp_mul(a2: int, a4: int, n: int, P: GenericPoint | None) -> GenericPoint | None:
    if n < 0:
        return gp_mul(a2, a4, -n, gp_neg(P))
    result = None
    base = P
    while n:
        if n & 1:
            result = gp_add(a2, a4, result, base)
        n >>= 1
        if n:
            base = gp_add(a2, a4, base, base)
    return result
