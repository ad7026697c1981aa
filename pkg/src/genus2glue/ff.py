"""Exact arithmetic in finite fields F_{p^e}, p odd.

Elements are stored as integer codes: the coefficient vector c_0 + c_1 x + ...
of the residue modulo the field modulus, read as base-p digits.  Fields small
enough for enumeration (q <= TABLE_LIMIT) carry exp/log/Zech tables, which
makes scalar arithmetic a handful of lookups and enables the numpy-vectorized
operations used by the point counters.  Larger fields fall back to plain
polynomial arithmetic on digit vectors.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldMismatch, InternalError, InvalidField

TABLE_LIMIT = 1 << 22
MODULUS_SEARCH_BOUND = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p as int lists (low to high), used for moduli --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _pmulmod(a: list[int], b: list[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], n: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible_mod_p(m: Sequence[int], p: int) -> bool:
    """Ben-Or test: gcd(x^{p^k} - x, m) = 1 for all k <= deg/2."""
    e = len(m) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    xp = [0, 1]
    for _ in range(e // 2):
        xp = _ppowmod(xp, p, m, p)
        g = _pgcd(list(m), _psub(xp, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def _digits(code: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _undigits(digits: Iterable[int], p: int) -> int:
    code = 0
    for d in reversed(list(digits)):
        code = code * p + d
    return code


class FieldDescriptor:
    """The field F_{p^e} = F_p[x]/(modulus).  Obtain instances via field_create."""

    def __init__(self, p: int, e: int, seed: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.seed = seed
        self.modulus = modulus
        self.q = p**e
        self._tabled = self.q <= TABLE_LIMIT
        self._np = None
        self._lists = None
        self._nonresidue = None
        if self._tabled:
            self._build_tables()

    def __repr__(self):
        return f"F_{self.p}^{self.e}" if self.e > 1 else f"F_{self.p}"

    def __reduce__(self):
        return (field_create, (self.p, self.e, self.seed))

    @property
    def has_tables(self) -> bool:
        return self._tabled

    # -- table construction --

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if e == 1:
            return a * b % p
        da = _trim(_digits(a, p, e))
        db = _trim(_digits(b, p, e))
        return _undigits(_pmulmod(da, db, self.modulus, p), p)

    def _slow_pow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            n >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        factors = prime_factors(order)
        for g in range(2 if self.e == 1 else 1, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise InternalError(f"no primitive element found in {self!r}")

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        order = q - 1
        g = self._find_generator()
        powers = p ** np.arange(e, dtype=np.int64)
        exp = np.empty(order, dtype=np.int64)
        exp[0] = 1
        filled = 1
        c = g
        while filled < order:
            # multiplication-by-c as a matrix acting on digit row vectors
            mat = np.array(
                [_digits(self._slow_mul(c, p**j), p, e) for j in range(e)], dtype=np.int64
            )
            take = min(filled, order - filled)
            block = exp[:take]
            digs = (block[:, None] // powers[None, :]) % p
            exp[filled:filled + take] = ((digs @ mat) % p) @ powers
            filled += take
            c = self._slow_mul(c, c)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        if np.any(log[1:] < 0):
            raise InternalError(f"exp table of {self!r} is not a bijection")
        low = exp % p
        plus_one = exp - low + (low + 1) % p
        zech = log[plus_one]
        self.generator = g
        self._np = (exp, log, zech)

    def _scalar_tables(self):
        if self._lists is None:
            exp, log, zech = self._np
            self._lists = (exp.tolist(), log.tolist(), zech.tolist())
        return self._lists

    # -- scalar arithmetic on codes --

    def from_int(self, n: int) -> int:
        return n % self.p

    def digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.e)

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) > self.e:
            raise InvalidField(f"too many coefficients for {self!r}")
        return _undigits([d % self.p for d in digits], self.p)

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        if self._tabled:
            exp, log, zech = self._scalar_tables()
            la = log[a]
            z = zech[(log[b] - la) % (self.q - 1)]
            if z < 0:
                return 0
            return exp[(la + z) % (self.q - 1)]
        p = self.p
        return _undigits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))], p)

    def neg(self, a: int) -> int:
        if a == 0:
            return 0
        if self.e == 1:
            return self.p - a
        if self._tabled:
            exp, log, _ = self._scalar_tables()
            return exp[(log[a] + (self.q - 1) // 2) % (self.q - 1)]
        return _undigits([(-x) % self.p for x in self.digits(a)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        if self._tabled:
            exp, log, _ = self._scalar_tables()
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._tabled:
            exp, log, _ = self._scalar_tables()
            return exp[(-log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(a, n, self.p)
        if self._tabled:
            exp, log, _ = self._scalar_tables()
            return exp[(log[a] * n) % (self.q - 1)]
        return self._slow_pow(a, n)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self._tabled:
            return self._scalar_tables()[1][a] % 2 == 0
        return self.pow(a, (self.q - 1) // 2) == 1

    def chi(self, a: int) -> int:
        """Quadratic character: 0, 1 or -1."""
        if a == 0:
            return 0
        return 1 if self.is_square(a) else -1

    def nonresidue(self) -> int:
        if self._nonresidue is None:
            for c in range(2, self.q):
                if not self.is_square(c):
                    self._nonresidue = c
                    break
        return self._nonresidue

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None.  Exponentiation when q = 3 mod 4,
        Tonelli-Shanks otherwise."""
        if a == 0:
            return 0
        if not self.is_square(a):
            return None
        q = self.q
        if q % 4 == 3:
            return self.pow(a, (q + 1) // 4)
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = self.pow(self.nonresidue(), t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while b != 1:
            i, bb = 0, b
            while bb != 1:
                bb = self.mul(bb, bb)
                i += 1
            c = z
            for _ in range(m - i - 1):
                c = self.mul(c, c)
            x = self.mul(x, c)
            z = self.mul(c, c)
            b = self.mul(b, z)
            m = i
        return x

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^{p^k}; negative k gives p^|k|-th roots (the field is perfect)."""
        k %= self.e
        for _ in range(k):
            a = self.pow(a, self.p)
        return a

    def pth_root(self, a: int) -> int:
        return self.frobenius(a, self.e - 1)

    def in_prime_field(self, a: int) -> bool:
        return a < self.p

    # -- vectorized arithmetic (table fields only) --

    def _need_tables(self):
        if not self._tabled:
            raise InternalError(f"vectorized arithmetic needs q <= {TABLE_LIMIT}")
        return self._np

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log, zech = self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        if self.e == 1:
            return (a + b) % self.p
        order = self.q - 1
        la, lb = log[a], log[b]
        z = zech[(lb - la) % order]
        out = np.where(z < 0, 0, exp[(la + np.maximum(z, 0)) % order])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        exp, log, _ = self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return (-a) % self.p
        order = self.q - 1
        return np.where(a == 0, 0, exp[(log[a] + order // 2) % order])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log, _ = self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a * b) % self.p
        order = self.q - 1
        out = exp[(log[a] + log[b]) % order]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpoly_eval(self, coeffs: Sequence[int], xs: np.ndarray) -> np.ndarray:
        """Horner evaluation of a polynomial (codes, low to high) at many points."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(list(coeffs)):
            acc = self.vadd(self.vmul(acc, xs), np.full_like(xs, c))
        return acc

    def vchi(self, a: np.ndarray) -> np.ndarray:
        _, log, _ = self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, np.where(log[a] % 2 == 0, 1, -1))

    # -- element constructors --

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldMismatch(f"{value.field!r} element used in {self!r}")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        return FieldElement(self, self.from_digits(list(value)))

    def elem(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The class of x, i.e. a root of the modulus (for e = 1, the element 0)."""
        return FieldElement(self, self.p if self.e > 1 else 0)

    def elements(self):
        for code in range(self.q):
            yield FieldElement(self, code)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "seed": self.seed}


def field_create(p: int, e: int = 1, seed: int = 0) -> FieldDescriptor:
    """F_{p^e} with the seed-th monic irreducible modulus in lexicographic order.

    Fields are interned: equal (p, e, seed) give the same object.
    """
    return _field_create(int(p), int(e), int(seed))


@functools.lru_cache(maxsize=None)
def _field_create(p: int, e: int, seed: int) -> FieldDescriptor:
    if p % 2 == 0 or not is_prime(p):
        raise InvalidField(f"p={p} must be an odd prime")
    if e < 1:
        raise InvalidField(f"extension degree e={e} must be >= 1")
    if seed < 0:
        raise InvalidField("seed must be non-negative")
    found = -1
    for code in range(min(p**e, MODULUS_SEARCH_BOUND)):
        cand = tuple(_digits(code, p, e)) + (1,)
        if e == 1 or is_irreducible_mod_p(cand, p):
            found += 1
            if found == seed:
                return FieldDescriptor(p, e, seed, cand)
    raise InternalError(f"no irreducible modulus for p={p}, e={e}, seed={seed} within bound")


class FieldElement:
    """Immutable element of a FieldDescriptor."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldDescriptor, code: int):
        self.field = field
        self.code = code

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.field.seed, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.field.e == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.field.digits(self.code)):
            if c:
                terms.append(str(c) if i == 0 else (f"{c if c != 1 else ''}x" + (f"^{i}" if i > 1 else "")))
        return " + ".join(reversed(terms)) or "0"

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def is_square(self) -> bool:
        return self.field.is_square(self.code)

    def sqrt(self) -> "FieldElement | None":
        r = self.field.sqrt(self.code)
        return None if r is None else FieldElement(self.field, r)

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.code, k))

    def coeffs(self) -> list[int]:
        return self.field.digits(self.code)

    def to_json(self) -> dict:
        f = self.field
        return {"p": f.p, "e": f.e, "seed": f.seed, "coeffs": self.coeffs()}


def sqrt_and_pth_root(a: FieldElement) -> dict:
    """{'sqrt': (r, -r) or None, 'pth_root': r with r^p = a}."""
    r = a.sqrt()
    return {
        "sqrt": None if r is None else (r, -r),
        "pth_root": FieldElement(a.field, a.field.pth_root(a.code)),
    }


def element_from_json(data: dict) -> FieldElement:
    field = field_create(int(data["p"]), int(data["e"]), int(data.get("seed", 0)))
    return FieldElement(field, field.from_digits(data["coeffs"]))


def field_from_json(data: dict) -> FieldDescriptor:
    return field_create(int(data["p"]), int(data["e"]), int(data.get("seed", 0)))


class FieldEmbedding:
    """The embedding F_{p^e} -> F_{p^{ek}} sending x to a fixed root of the small modulus."""

    def __init__(self, small: FieldDescriptor, big: FieldDescriptor, root: int):
        if small.p != big.p or big.e % small.e:
            raise FieldMismatch(f"{small!r} does not embed in {big!r}")
        self.small = small
        self.big = big
        self.root = root
        powers = [1]
        for _ in range(small.e - 1):
            powers.append(big.mul(powers[-1], root))
        image = []
        for code in range(small.q):
            acc = 0
            for d, rp in zip(small.digits(code), powers):
                if d:
                    acc = big.add(acc, big.mul(d, rp))
            image.append(acc)
        self._image = image
        self._pre = {v: i for i, v in enumerate(image)}

    def code(self, a: int) -> int:
        return self._image[a]

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field is not self.small:
            raise FieldMismatch(f"expected an element of {self.small!r}")
        return FieldElement(self.big, self._image[a.code])

    def contains(self, b: FieldElement) -> bool:
        return b.code in self._pre

    def preimage(self, b: FieldElement) -> FieldElement:
        if b.field is not self.big or b.code not in self._pre:
            raise FieldMismatch(f"{b!r} is not in the image of {self.small!r}")
        return FieldElement(self.small, self._pre[b.code])

    def preimage_code(self, b: int) -> int | None:
        return self._pre.get(b)


@functools.lru_cache(maxsize=None)
def extension(field: FieldDescriptor, k: int) -> tuple[FieldDescriptor, FieldEmbedding]:
    """F_{q^k} together with a fixed embedding of F_q."""
    big = field_create(field.p, field.e * k, field.seed if k == 1 else 0)
    if k == 1:
        return big, FieldEmbedding(field, big, field.gen().code if field.e > 1 else 0)
    if field.e == 1:
        return big, FieldEmbedding(field, big, 0)
    mod = field.modulus
    root = None
    if big.has_tables:
        step = (big.q - 1) // (field.q - 1)
        exp = big._scalar_tables()[0]
        for j in range(field.q - 1):
            cand = exp[j * step]
            acc = 0
            for c in reversed(mod):
                acc = big.add(big.mul(acc, cand), c)
            if acc == 0:
                root = cand
                break
    else:
        from .poly import Polynomial

        roots = Polynomial(big, list(mod)).roots()
        root = min(r.code for r in roots) if roots else None
    if root is None:
        raise InternalError(f"modulus of {field!r} has no root in {big!r}")
    return big, FieldEmbedding(field, big, root)
