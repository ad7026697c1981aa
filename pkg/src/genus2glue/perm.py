"""Small permutation groups (degree <= 8) with explicit element sets.

A permutation is a tuple of images of 0..n-1; products apply the left factor
first: (a * b)[i] = b[a[i]].
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

from .errors import SizeBound

MAX_DEGREE = 8
MAX_ORDER = 50_000

Perm = tuple


def pmul(a: Perm, b: Perm) -> Perm:
    return tuple(b[i] for i in a)


def pinv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def identity(n: int) -> Perm:
    return tuple(range(n))


def sign(a: Perm) -> int:
    seen = [False] * len(a)
    s = 1
    for i in range(len(a)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = a[j]
                length += 1
            if length % 2 == 0:
                s = -s
    return s


def cycle(n: int, *cycles: Sequence[int]) -> Perm:
    """Permutation of {0..n-1} from cycles written with 1-based points."""
    img = list(range(n))
    for c in cycles:
        pts = [x - 1 for x in c]
        for k, x in enumerate(pts):
            img[x] = pts[(k + 1) % len(pts)]
    return tuple(img)


def is_transposition(a: Perm) -> bool:
    return sum(1 for i, j in enumerate(a) if i != j) == 2


def cycle_string(a: Perm) -> str:
    seen = set()
    parts = []
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = a[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = a[j]
        parts.append("(" + " ".join(str(x + 1) for x in c) + ")")
    return "".join(parts) or "()"


class PermGroup:
    def __init__(self, degree: int, generators: Iterable[Perm], elements: frozenset | None = None):
        if degree > MAX_DEGREE:
            raise SizeBound(f"degree {degree} exceeds {MAX_DEGREE}")
        self.degree = degree
        self.generators = tuple(tuple(g) for g in generators)
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of {degree} points")
        self.elements = elements if elements is not None else _closure(degree, self.generators)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.degree == other.degree and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.elements

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.elements <= other.elements

    # -- predicates --

    def orbit(self, point: int) -> set[int]:
        orb = {point}
        stack = [point]
        while stack:
            x = stack.pop()
            for g in self.generators:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        return orb

    def orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for i in range(self.degree):
            if i not in seen:
                o = self.orbit(i)
                seen |= o
                out.append(sorted(o))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def minimal_block(self, a: int, b: int) -> list[int]:
        """Smallest block containing a and b for the action of the generators (union-find)."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            parent[max(rx, ry)] = min(rx, ry)
            return True

        union(a, b)
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            for g in self.generators:
                gx, gy = g[x], g[y]
                if find(gx) != find(gy):
                    union(gx, gy)
                    queue.append((gx, gy))
        root = find(a)
        return [i for i in range(self.degree) if find(i) == root]

    def is_primitive(self) -> bool:
        if not self.is_transitive():
            return False
        if self.degree <= 2:
            return True
        return all(len(self.minimal_block(0, b)) == self.degree for b in range(1, self.degree))

    def contains_transposition(self) -> bool:
        return any(is_transposition(g) for g in self.elements)

    def is_symmetric(self) -> bool:
        return self.order == math.factorial(self.degree)

    def is_alternating(self) -> bool:
        n = self.degree
        if n < 2:
            return False
        return self.order == math.factorial(n) // 2 and all(sign(g) == 1 for g in self.elements)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(pmul(a, b) == pmul(b, a) for a in gens for b in gens)

    # -- subgroup machinery --

    def subgroup(self, generators: Iterable[Perm]) -> "PermGroup":
        return PermGroup(self.degree, generators)

    def conjugacy_classes(self) -> list[frozenset]:
        remaining = set(self.elements)
        out = []
        while remaining:
            g = min(remaining)
            cls = {g}
            stack = [g]
            while stack:
                y = stack.pop()
                for x in self.generators:
                    z = pmul(pmul(pinv(x), y), x)
                    if z not in cls:
                        cls.add(z)
                        stack.append(z)
            out.append(frozenset(cls))
            remaining -= cls
        return out

    def normal_closure(self, gens: Iterable[Perm], base: Sequence[Perm] = ()) -> tuple[frozenset, list[Perm]]:
        """Smallest normal subgroup containing gens and base, with a generating list."""
        ngens = list(base)
        current = _closure(self.degree, ngens)
        pending = [tuple(g) for g in gens]
        while pending:
            g = pending.pop()
            if g in current:
                continue
            ngens.append(g)
            current = _closure(self.degree, ngens)
            for x in self.generators:
                pending.append(pmul(pmul(pinv(x), g), x))
            # conjugates of the older generators by x are already in current or queued
        return current, ngens

    def derived_subgroup(self) -> frozenset:
        comms = {pmul(pmul(pinv(a), pinv(b)), pmul(a, b)) for a in self.generators for b in self.generators}
        return self.normal_closure(comms)[0]

    @cached_property
    def normal_subgroups(self) -> list[frozenset]:
        """All normal subgroups, found as joins of normal closures of class representatives."""
        classes = self.conjugacy_classes()
        reps = [min(c) for c in classes if self.identity not in c]
        ncl = {}
        for r in reps:
            N, gens = self.normal_closure([r])
            ncl.setdefault(N, gens)
        trivial = frozenset([self.identity])
        found = {trivial: []}
        queue = [trivial]
        while queue:
            K = queue.pop()
            for N, ngens in ncl.items():
                if N <= K:
                    continue
                gens = found[K] + ngens
                L = self.elements if len(N) == self.order else _closure(self.degree, gens)
                if L not in found:
                    found[L] = gens
                    queue.append(L)
        self._normal_gens = found
        return sorted(found, key=len)

    def maximal_normal_subgroups(self) -> list[frozenset]:
        G = self.elements
        normals = [K for K in self.normal_subgroups if K != G]
        return [K for K in normals if not any(K < L for L in normals)]

    def chief_series(self) -> list[frozenset]:
        """1 = K_0 < K_1 < ... < G with nothing normal strictly between consecutive terms."""
        normals = self.normal_subgroups
        series = [normals[0]]
        while series[-1] != self.elements:
            K = series[-1]
            above = [L for L in normals if K < L]
            series.append(min(above, key=len))
        return series

    def composition_factors(self) -> list[str]:
        """Composition factors (with multiplicity) read off a chief series, sorted by order."""
        out = []
        series = self.chief_series()
        for K, L in zip(series, series[1:]):
            out.extend(_chief_factor_names(K, L, self._normal_gens[L]))
        return sorted(out, key=lambda s: (SIMPLE_ORDER[s] if s in SIMPLE_ORDER else int(s[1:]), s))

    def simple_quotients(self) -> list[str]:
        out = set()
        G = self.elements
        for M in self.maximal_normal_subgroups():
            out.add(_simple_name(len(G) // len(M), _is_abelian_section(M, self.generators)))
        return sorted(out)

    def to_json(self) -> dict:
        return {"degree": self.degree, "order": self.order, "generators": [cycle_string(g) for g in self.generators]}


def _closure(degree: int, generators: Sequence[Perm]) -> frozenset:
    e = identity(degree)
    elements = {e}
    frontier = [e]
    gens = [tuple(g) for g in generators]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = pmul(x, g)
                if y not in elements:
                    elements.add(y)
                    new.append(y)
                    if len(elements) > MAX_ORDER:
                        raise SizeBound(f"group order exceeds {MAX_ORDER}")
        frontier = new
    return frozenset(elements)


def closure(generators: Iterable[Perm], degree: int | None = None) -> PermGroup:
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree needed for the trivial group")
        degree = len(gens[0])
    return PermGroup(degree, gens)


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup(max(n, 1), [])
    gens = [cycle(n, (1, 2)), cycle(n, tuple(range(1, n + 1)))]
    return PermGroup(n, gens)


def alternating_group(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup(max(n, 1), [])
    gens = [cycle(n, (1, 2, k)) for k in range(3, n + 1)]
    return PermGroup(n, gens)


def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, [cycle(n, tuple(range(1, n + 1)))] if n > 1 else [])


# -- simple groups by order, for sections of groups of degree <= 8 --

# Nonabelian simple groups of order <= 50000.  The order 20160 is shared by A8
# and PSL(3,4); only A8 acts faithfully on at most 8 points, and a section of a
# group of degree <= 8 of that order is A8 itself.
SIMPLE_ORDER = {
    "A5": 60, "PSL(2,7)": 168, "A6": 360, "PSL(2,8)": 504, "PSL(2,11)": 660,
    "PSL(2,13)": 1092, "PSL(2,17)": 2448, "A7": 2520, "PSL(2,19)": 3420,
    "PSL(2,16)": 4080, "PSL(3,3)": 5616, "PSU(3,3)": 6048, "PSL(2,23)": 6072,
    "PSL(2,25)": 7800, "M11": 7920, "PSL(2,27)": 9828, "PSL(2,29)": 12180,
    "PSL(2,31)": 14880, "A8": 20160, "PSL(2,37)": 25308, "PSU(4,2)": 25920,
    "Sz(8)": 29120, "PSL(2,32)": 32736, "PSL(2,41)": 34440, "PSL(2,43)": 39732,
    "PSL(2,47)": 51888,
}
_BY_ORDER = {v: k for k, v in SIMPLE_ORDER.items()}


def _simple_name(order: int, abelian: bool) -> str:
    if abelian:
        return f"C{order}"
    if order not in _BY_ORDER:
        raise ValueError(f"no nonabelian simple group of order {order} in the table")
    return _BY_ORDER[order]


def _is_abelian_section(K: frozenset, gens: Sequence[Perm]) -> bool:
    """Whether L/K is abelian, for L generated by gens modulo K."""
    return all(pmul(pmul(pinv(a), pinv(b)), pmul(a, b)) in K for a in gens for b in gens)


def _chief_factor_names(K: frozenset, L: frozenset, gens: Sequence[Perm]) -> list[str]:
    m = len(L) // len(K)
    if _is_abelian_section(K, gens):
        # elementary abelian p^k
        p = min(d for d in range(2, m + 1) if m % d == 0)
        k = round(math.log(m, p))
        return [f"C{p}"] * k
    for k in range(1, 8):
        root = round(m ** (1 / k))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand**k == m and cand in _BY_ORDER:
                return [_BY_ORDER[cand]] * k
    raise ValueError(f"cannot identify a nonabelian chief factor of order {m}")
