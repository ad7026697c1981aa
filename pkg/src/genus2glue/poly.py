"""Univariate polynomials and rational functions over a FieldDescriptor.

Coefficients are kept as integer codes (see ff), low degree first, with no
trailing zeros; the zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import FieldMismatch
from .ff import FieldDescriptor, FieldElement, FieldEmbedding


def _as_code(field: FieldDescriptor, c) -> int:
    if isinstance(c, FieldElement):
        if c.field is not field:
            raise FieldMismatch(f"coefficient from {c.field!r} in polynomial over {field!r}")
        return c.code
    if isinstance(c, int):
        if 0 <= c < field.q:
            return c
        return field.from_int(c)
    raise TypeError(f"cannot use {c!r} as a coefficient")


class Polynomial:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs: Iterable = ()):
        cs = [_as_code(field, c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, field: FieldDescriptor, ints: Iterable[int]) -> "Polynomial":
        """Integer coefficients reduced mod p (not codes)."""
        return cls(field, [field.from_int(n) for n in ints])

    @classmethod
    def x(cls, field: FieldDescriptor) -> "Polynomial":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: FieldDescriptor, c) -> "Polynomial":
        return cls(field, (_as_code(field, c),))

    @classmethod
    def from_roots(cls, field: FieldDescriptor, roots: Iterable) -> "Polynomial":
        out = cls(field, (1,))
        for r in roots:
            out = out * cls(field, (field.neg(_as_code(field, r)), 1))
        return out

    # -- basic properties --

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.coeffs[i] if i < len(self.coeffs) else 0)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                s = repr(FieldElement(self.field, c))
                if i:
                    s = f"({s})*m" + (f"^{i}" if i > 1 else "")
                terms.append(s)
        return " + ".join(reversed(terms))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field is other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def _check(self, other: "Polynomial"):
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial(self.field, (_as_code(self.field, other),))

    # -- ring operations --

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Polynomial(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Polynomial(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _as_code(self.field, other)
            F = self.field
            return Polynomial(F, [F.mul(c, x) for x in self.coeffs])
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial(F)
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return Polynomial(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Polynomial(self.field, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.lead())
        if len(rem) - 1 < db:
            return Polynomial(F), self
        quo = [0] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = F.mul(rem[i], inv_lead)
            if c:
                quo[i - db] = c
                for j in range(db + 1):
                    if bc[j]:
                        rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, bc[j]))
        return Polynomial(F, quo), Polynomial(F, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * self.field.inv(self.lead())

    def __call__(self, x):
        F = self.field
        if isinstance(x, FieldElement):
            if x.field is not F:
                raise FieldMismatch(f"evaluating a {F!r} polynomial at a {x.field!r} point")
            xc = x.code
        else:
            xc = x
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, xc), c)
        return FieldElement(F, acc) if isinstance(x, FieldElement) else acc

    def derivative(self) -> "Polynomial":
        F = self.field
        return Polynomial(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + Polynomial(self.field, (c,))
        return acc

    def pow_mod(self, n: int, mod: "Polynomial") -> "Polynomial":
        result = Polynomial(self.field, (1,))
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def change_field(self, emb: FieldEmbedding) -> "Polynomial":
        if emb.small is not self.field:
            raise FieldMismatch(f"embedding starts at {emb.small!r}, polynomial lives over {self.field!r}")
        return Polynomial(emb.big, [emb.code(c) for c in self.coeffs])

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def to_json(self) -> dict:
        F = self.field
        return {"field": F.to_json(), "coeffs": [F.digits(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        from .ff import field_from_json

        F = field_from_json(data["field"])
        return cls(F, [F.from_digits(c) for c in data["coeffs"]])

    # -- gcd and friends --

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def resultant(self, other: "Polynomial") -> FieldElement:
        other = self._coerce(other)
        F = self.field
        f, g = self, other
        acc = 1
        while True:
            if f.is_zero() or g.is_zero():
                return FieldElement(F, 0)
            m, n = f.degree, g.degree
            if n == 0:
                return FieldElement(F, F.mul(acc, F.pow(g.lead(), m)))
            r = f % g
            if r.is_zero():
                return FieldElement(F, 0)
            k = r.degree
            if (m * n) % 2:
                acc = F.neg(acc)
            acc = F.mul(acc, F.pow(g.lead(), m - k))
            f, g = g, r

    def discriminant_nonzero(self) -> bool:
        return self.is_squarefree()

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return not self.is_zero()
        d = self.derivative()
        if d.is_zero():
            return False
        return self.gcd(d).degree == 0

    def pth_root(self) -> "Polynomial":
        """For f(x) = g(x^p) returns g with coefficients replaced by their p-th roots."""
        F = self.field
        p = F.p
        if any(c for i, c in enumerate(self.coeffs) if i % p):
            raise ArithmeticError("not a p-th power")
        return Polynomial(F, [F.pth_root(c) for c in self.coeffs[::p]])

    def squarefree_decomposition(self) -> list[tuple["Polynomial", int]]:
        f = self.monic()
        if f.degree <= 0:
            return []
        p = self.field.p
        out: list[tuple[Polynomial, int]] = []
        d = f.derivative()
        if d.is_zero():
            return [(g, e * p) for g, e in f.pth_root().squarefree_decomposition()]
        c = f.gcd(d)
        w = f.exact_div(c)
        i = 1
        while w.degree > 0:
            y = w.gcd(c)
            z = w.exact_div(y)
            if z.degree > 0:
                out.append((z, i))
            i += 1
            w = y
            c = c.exact_div(y)
        if c.degree > 0:
            out.extend((g, e * p) for g, e in c.pth_root().squarefree_decomposition())
        return out

    def distinct_degree(self) -> list[tuple["Polynomial", int]]:
        """For squarefree monic f: list of (product of all degree-d factors, d)."""
        F = self.field
        f = self.monic()
        out = []
        x = Polynomial.x(F)
        h = x
        d = 0
        while f.degree >= 2 * (d + 1):
            d += 1
            h = h.pow_mod(F.q, f)
            g = f.gcd(h - x)
            if g.degree > 0:
                out.append((g, d))
                f = f.exact_div(g)
                h = h % f
        if f.degree > 0:
            out.append((f, f.degree))
        return out

    def equal_degree(self, d: int, rng: random.Random | None = None) -> list["Polynomial"]:
        """Cantor-Zassenhaus splitting of a product of distinct degree-d monic irreducibles."""
        F = self.field
        f = self.monic()
        if f.degree == d:
            return [f]
        rng = rng or random.Random(0x6E7)
        exponent = (F.q**d - 1) // 2
        while True:
            a = Polynomial(F, [rng.randrange(F.q) for _ in range(f.degree)])
            if a.degree <= 0:
                continue
            g = f.gcd(a)
            if 0 < g.degree < f.degree:
                break
            b = a.pow_mod(exponent, f) - Polynomial(F, (1,))
            g = f.gcd(b)
            if 0 < g.degree < f.degree:
                break
        return g.equal_degree(d, rng) + f.exact_div(g).equal_degree(d, rng)

    def factor(self) -> list[tuple["Polynomial", int]]:
        """Monic irreducible factors with multiplicities, sorted by (degree, coeffs)."""
        out = []
        for g, e in self.squarefree_decomposition():
            for prod, d in g.distinct_degree():
                for irr in prod.equal_degree(d):
                    out.append((irr, e))
        out.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
        return out

    def roots(self) -> list[FieldElement]:
        """Distinct roots in the coefficient field, sorted by code."""
        F = self.field
        if self.is_zero():
            raise ValueError("zero polynomial has every element as a root")
        if self.degree <= 0:
            return []
        f = self.monic()
        x = Polynomial.x(F)
        g = f.gcd(x.pow_mod(F.q, f) - x)
        if g.degree <= 0:
            return []
        roots = [F.neg(lin.coeffs[0]) for lin in g.equal_degree(1)]
        return [FieldElement(F, r) for r in sorted(roots)]

    def splitting_degree(self) -> int:
        """Smallest k such that every root lies in F_{q^k}."""
        from math import lcm

        k = 1
        for g, _ in self.factor():
            k = lcm(k, g.degree)
        return k


def poly_norm(A: Polynomial, B: Polynomial, h: Polynomial) -> Polynomial:
    """Norm of A + B*Y from F(m)[Y]/(Y^2 - h) down to F(m): A^2 - B^2 h."""
    return A * A - B * B * h


def poly_toolkit_resultant(f: Polynomial, g: Polynomial) -> FieldElement:
    return f.resultant(g)


class RatFunc:
    """num/den in lowest terms with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, reduce: bool = True):
        F = num.field
        if den is None:
            den = Polynomial(F, (1,))
        elif den.field is not F:
            raise FieldMismatch("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = Polynomial(F, (1,))
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lead = den.lead()
            if lead != 1:
                inv = F.inv(lead)
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @property
    def field(self) -> FieldDescriptor:
        return self.num.field

    @classmethod
    def const(cls, field: FieldDescriptor, c) -> "RatFunc":
        return cls(Polynomial(field, (_as_code(field, c),)), reduce=False)

    @classmethod
    def var(cls, field: FieldDescriptor) -> "RatFunc":
        return cls(Polynomial.x(field), reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def degree(self) -> int:
        """Degree as a map P^1 -> P^1."""
        return max(self.num.degree, self.den.degree, 0)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Polynomial):
            return RatFunc(other, reduce=False)
        return RatFunc.const(self.field, other)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RatFunc(Polynomial(self.field))
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1, d2 = self.num.exact_div(g1), o.den.exact_div(g1)
        n2, d1 = o.num.exact_div(g2), self.den.exact_div(g2)
        return RatFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, reduce=False)

    def __call__(self, x):
        F = self.field
        xc = x.code if isinstance(x, FieldElement) else x
        d = self.den(xc)
        if d == 0:
            raise ZeroDivisionError("pole of rational function")
        v = F.div(self.num(xc), d)
        return FieldElement(F, v) if isinstance(x, FieldElement) else v

    def compose(self, inner: "RatFunc") -> "RatFunc":
        """self(inner) computed by homogenized Horner evaluation."""
        n, d = self.num, self.den
        deg = max(n.degree, d.degree, 0)
        P, Q = inner.num, inner.den

        def hom(poly: Polynomial) -> Polynomial:
            acc = Polynomial(self.field)
            qpow = [Polynomial(self.field, (1,))]
            for _ in range(deg):
                qpow.append(qpow[-1] * Q)
            ppow = Polynomial(self.field, (1,))
            for i in range(deg + 1):
                c = poly.coeffs[i] if i < len(poly.coeffs) else 0
                if c:
                    acc = acc + ppow * qpow[deg - i] * c
                ppow = ppow * P
            return acc

        return RatFunc(hom(n), hom(d))

    def change_field(self, emb: FieldEmbedding) -> "RatFunc":
        return RatFunc(self.num.change_field(emb), self.den.change_field(emb), reduce=False)


def character_sum(f: Polynomial, chunk: int = 1 << 16) -> int:
    """Sum of the quadratic character of f(x) over every x in the field.

    Evaluated in numpy chunks; the result does not depend on the chunk size.
    """
    import numpy as np

    F = f.field
    total = 0
    for start in range(0, F.q, chunk):
        xs = np.arange(start, min(start + chunk, F.q), dtype=np.int64)
        total += int(F.vchi(F.vpoly_eval(f.coeffs, xs)).sum())
    return total
