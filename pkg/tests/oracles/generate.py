"""Brute-force oracles, written without the package, frozen into frozen.json.

Run from the repository root:  python3 tests/oracles/generate.py
"""

import hashlib
import json
import math
from pathlib import Path

OUT = Path(__file__).with_name("frozen.json")


class GF:
    """F_(p^e) with elements coded as base-p digit vectors (low digit first)."""

    def __init__(self, p, e):
        self.p, self.e, self.q = p, e, p**e
        self.modulus = self._least_irreducible()
        self._tables()

    def digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def code(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _least_irreducible(self):
        p, e = self.p, self.e
        if e == 1:
            return [0, 1]
        for c in range(p**e):
            m = self.digits(c) + [1]
            # irreducible iff no root in any F_(p^d) for d <= e/2: test by brute force over
            # all monic polynomials of degree <= e/2 dividing m
            if all(self._rem(m, g) for d in range(1, e // 2 + 1) for g in self._monics(d)):
                return m
        raise RuntimeError

    def _monics(self, d):
        for c in range(self.p**d):
            ds = [(c // self.p**i) % self.p for i in range(d)]
            yield ds + [1]

    def _rem(self, a, b):
        a = list(a)
        p = self.p
        while len(a) >= len(b):
            f = a[-1]
            if f:
                for i in range(len(b)):
                    a[len(a) - len(b) + i] = (a[len(a) - len(b) + i] - f * b[i]) % p
            a.pop()
        return any(a)

    def _mulpoly(self, a, b):
        p, e, m = self.p, self.e, self.modulus
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(len(prod) - 1, e - 1, -1):
            f = prod[k]
            if f:
                for i in range(e + 1):
                    prod[k - e + i] = (prod[k - e + i] - f * m[i]) % p
        return prod[:e]

    def _tables(self):
        q = self.q
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = self.digits(1)
            gd = self.digits(g)
            ok = True
            for _ in range(q - 2):
                x = self._mulpoly(x, gd)
                c = self.code(x)
                if c == 1:
                    ok = False
                    break
                exp.append(c)
            if ok and len(set(exp)) == q - 1:
                self.exp = exp
                self.log = {c: i for i, c in enumerate(exp)}
                return
        raise RuntimeError("no generator")

    def add(self, a, b):
        da, db = self.digits(a), self.digits(b)
        return self.code([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        return self.code([(-x) % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def pow(self, a, n):
        if a == 0:
            return 0 if n else 1
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def is_square(self, a):
        return a == 0 or self.log[a] % 2 == 0

    def chi(self, a):
        return 0 if a == 0 else (1 if self.log[a] % 2 == 0 else -1)


def embed(small, big, a):
    """Image of a in big, via the root of small's modulus of smallest code in big."""
    m = small.modulus
    for r in range(big.q):
        acc = 0
        for c in reversed(m):
            acc = big.add(big.mul(acc, r), c)
        if acc == 0:
            break
    ds = small.digits(a)
    acc = 0
    for d in reversed(ds):
        acc = big.add(big.mul(acc, r), d)
    return acc


def ec_count(F, lam):
    total = 1
    for x in range(F.q):
        fx = F.mul(F.mul(x, F.sub(x, 1)), F.sub(x, lam))
        total += 1 + F.chi(fx)
    return total


def sextic_count(F, lam, lamp):
    one = 1
    c = F.sub(lamp, lam)
    total = 0
    for m in range(F.q):
        m2 = F.mul(m, m)
        v = F.mul(c, F.mul(F.sub(one, m2), F.mul(F.sub(lamp, F.mul(lam, m2)),
                                                  F.sub(F.sub(lamp, one), F.mul(F.sub(lam, one), m2)))))
        total += 1 + F.chi(v)
    lc = F.mul(c, F.mul(F.neg(one), F.mul(F.neg(lam), F.neg(F.sub(lam, one)))))
    return total + 1 + F.chi(lc)


def frob(F, a, k=1):
    return F.pow(a, F.p**k)


def grid(p, e, count):
    F = GF(p, e)
    out = []
    for lam in range(F.q):
        if lam in (0, 1) or F.digits(lam)[1:] == [0] * (e - 1):
            continue
        lamp = frob(F, lam)
        n = ec_count(F, lam)
        if (F.q + 1 - n) % p == 0:
            continue
        out.append((lam, lamp))
        if len(out) == count:
            break
    big = GF(p, 2 * e)
    rows = []
    for lam, lamp in out:
        bl, blp = embed(F, big, lam), embed(F, big, lamp)
        rows.append({
            "lambda": F.digits(lam),
            "lambda_prime": F.digits(lamp),
            "ec_counts": [ec_count(F, lam), ec_count(big, bl)],
            "ec_prime_counts": [ec_count(F, lamp), ec_count(big, blp)],
            "c_counts": [sextic_count(F, lam, lamp), sextic_count(big, bl, blp)],
        })
    return {"p": p, "e": e, "modulus": F.modulus, "curves": rows}


def ec_table(p, e):
    F = GF(p, e)
    return {"p": p, "e": e, "counts": {str(lam): ec_count(F, lam) for lam in range(2, F.q)}}


def tower(p, N, t, r):
    ns = [2 + 8 * N * (i * p) ** 2 for i in range(1, t + 1)]
    order = 2**r
    orders = []
    for n in ns:
        order *= math.factorial(n) // 2
        orders.append(order)
    strs = []
    for o in orders:
        # avoid the int->str digit limit by formatting in chunks
        chunks = []
        while o:
            o, rem = divmod(o, 10**1000)
            chunks.append(rem)
        s = str(chunks[-1]) + "".join(str(c).zfill(1000) for c in reversed(chunks[:-1]))
        strs.append(s)
    return {
        "p": p, "N": N, "t": t, "r": r, "degrees": ns,
        "digits": [len(s) for s in strs],
        "sha256": [hashlib.sha256(s.encode()).hexdigest() for s in strs],
        "head": [s[:30] for s in strs],
    }


def main():
    data = {
        "ec_F81": ec_table(3, 4),
        "split_grid_p3": grid(3, 4, 6),
        "split_grid_p5": grid(5, 4, 5),
        "tower_3_3_5_4": tower(3, 3, 5, 4),
        "tower_5_5_1_0": tower(5, 5, 1, 0),
        # number of subgroups of S_n, n = 1..6 (classical)
        "subgroups_of_Sn": [1, 2, 6, 30, 156, 1455],
    }
    OUT.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
