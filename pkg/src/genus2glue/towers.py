"""Group-theoretic lemmas behind towers of glued covers, and the tower bookkeeping.

Checks are exhaustive over small permutation groups; the tower descriptor only
tracks degrees and orders, with big integers serialized as decimal strings.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionFailed, RBoundViolated, SizeBound
from .ff import field_create
from .perm import PermGroup, closure, pinv, pmul, is_transposition
from .poly import Polynomial

CRITERION_MAX_DEGREE = 6


# -- transitive + primitive + transposition => symmetric --


class _SymTables:
    """S_n indexed by 0..n!-1 with multiplication and inverse tables."""

    def __init__(self, n: int):
        self.n = n
        self.perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(self.perms)}
        N = len(self.perms)
        self.mul = np.empty((N, N), dtype=np.int32)
        for i, a in enumerate(self.perms):
            self.mul[i] = [index[pmul(a, b)] for b in self.perms]
        self.inv = np.array([index[pinv(a)] for a in self.perms], dtype=np.int32)
        self.identity = index[tuple(range(n))]
        self.image0 = np.array([p[0] for p in self.perms])
        self.transposition = np.array([is_transposition(p) for p in self.perms])

    def close(self, mask: np.ndarray, gens: Sequence[int]) -> np.ndarray:
        # t lies in S*g exactly when t*g^-1 lies in S
        shifts = [self.mul[:, self.inv[g]] for g in gens]
        mask = mask.copy()
        while True:
            new = mask.copy()
            for sh in shifts:
                new |= mask[sh]
            if (new == mask).all():
                return mask
            mask = new

    def double_coset_reps(self, mask: np.ndarray) -> list[int]:
        H = np.flatnonzero(mask)
        seen = np.zeros(len(self.perms), dtype=bool)
        reps = []
        for g in range(len(self.perms)):
            if seen[g] or mask[g]:
                continue
            reps.append(g)
            Hg = self.mul[H, g]
            seen[self.mul[np.ix_(Hg, H)].ravel()] = True
        return reps


def generated_subgroups(n: int, max_gens: int = 3) -> list[tuple[np.ndarray, tuple[int, ...], _SymTables]]:
    """All subgroups of S_n generated by at most max_gens elements, as masks with generators."""
    T = _SymTables(n)
    N = len(T.perms)
    trivial = np.zeros(N, dtype=bool)
    trivial[T.identity] = True
    level = {trivial.tobytes(): (trivial, ())}
    found = dict(level)
    for _ in range(max_gens):
        nxt = {}
        for mask, gens in level.values():
            for g in T.double_coset_reps(mask):
                new_gens = gens + (g,)
                m = T.close(mask, new_gens)
                key = m.tobytes()
                if key not in found and key not in nxt:
                    nxt[key] = (m, new_gens)
        found.update(nxt)
        level = nxt
    return [(m, g, T) for m, g in found.values()]


def symmetric_criterion_check(n: int, max_gens: int = 3) -> dict:
    """Exhaustively confirm: a transitive, primitive subgroup of S_n with a transposition is S_n."""
    if n > CRITERION_MAX_DEGREE:
        raise SizeBound(f"exhaustive check limited to n <= {CRITERION_MAX_DEGREE}")
    subgroups = generated_subgroups(n, max_gens)
    full = math.factorial(n)
    hypothesis = 0
    counterexamples = []
    counts = {"transitive": 0, "primitive": 0, "with_transposition": 0}
    for mask, gens, T in subgroups:
        elems = np.flatnonzero(mask)
        transitive = len(np.unique(T.image0[elems])) == n
        has_t = bool(T.transposition[elems].any())
        counts["transitive"] += transitive
        counts["with_transposition"] += has_t
        if not transitive:
            continue
        G = PermGroup(n, [T.perms[g] for g in gens], elements=frozenset(T.perms[i] for i in elems))
        primitive = G.is_primitive()
        counts["primitive"] += primitive
        if primitive and has_t:
            hypothesis += 1
            if len(elems) != full:
                counterexamples.append(G.to_json())
    return {
        "n": n,
        "max_generators": max_gens,
        "subgroups_examined": len(subgroups),
        "counts": counts,
        "satisfying_hypothesis": hypothesis,
        "counterexamples": counterexamples,
        "pass": not counterexamples,
    }


# -- products of groups --


def restriction(G: PermGroup, points: Sequence[int]) -> tuple[Callable, PermGroup]:
    """Restriction to a G-invariant set of points, with its image group."""
    points = list(points)
    pos = {x: i for i, x in enumerate(points)}

    def f(g):
        if any(g[x] not in pos for x in points):
            raise ValueError("points are not invariant")
        return tuple(pos[g[x]] for x in points)

    return f, closure([f(g) for g in G.generators], degree=len(points))


def _shared(name_lists: Sequence[Sequence[str]]) -> list[tuple[int, int, list[str]]]:
    out = []
    for i, j in itertools.combinations(range(len(name_lists)), 2):
        common = sorted(set(name_lists[i]) & set(name_lists[j]))
        if common:
            out.append((i, j, common))
    return out


def product_surjectivity(G: PermGroup, maps: Sequence[tuple[Callable, PermGroup]]) -> dict:
    """Check G -> prod G_i is onto, given onto factors with no common simple quotient."""
    targets = [t for _, t in maps]
    shared = _shared([t.simple_quotients() for t in targets])
    if shared:
        i, j, common = shared[0]
        raise PreconditionFailed(f"factors {i} and {j} share the simple quotient(s) {common}")
    for k, (f, t) in enumerate(maps):
        image = {f(g) for g in G.elements}
        if image != set(t.elements):
            raise PreconditionFailed(f"map {k} is not onto its target")
    image = {tuple(f(g) for f, _ in maps) for g in G.elements}
    expected = math.prod(t.order for t in targets)
    return {
        "factor_orders": [t.order for t in targets],
        "simple_quotients": [t.simple_quotients() for t in targets],
        "image_order": len(image),
        "product_order": expected,
        "pass": len(image) == expected,
    }


def product_kernel(factors: Sequence[PermGroup], phi: Callable, max_order: int = 50_000) -> dict:
    """Check ker(phi) = prod ker(phi restricted to G_i) on G = prod G_i.

    phi takes a tuple with one permutation per factor.  Factors must pairwise
    have no composition factor in common.
    """
    comp = [G.composition_factors() for G in factors]
    shared = _shared(comp)
    if shared:
        i, j, common = shared[0]
        raise PreconditionFailed(f"factors {i} and {j} share the composition factor(s) {common}")
    total = math.prod(G.order for G in factors)
    if total > max_order:
        raise SizeBound(f"product order {total} exceeds {max_order}")
    ids = [G.identity for G in factors]
    e = phi(tuple(ids))
    kernel = {g for g in itertools.product(*[sorted(G.elements) for G in factors]) if phi(g) == e}
    restricted = []
    for i, G in enumerate(factors):
        def embed(x, i=i):
            return tuple(x if k == i else ids[k] for k in range(len(factors)))
        restricted.append([x for x in G.elements if phi(embed(x)) == e])
    predicted = set(itertools.product(*restricted))
    return {
        "composition_factors": comp,
        "kernel_order": len(kernel),
        "factor_kernel_orders": [len(r) for r in restricted],
        "pass": kernel == predicted,
    }


# -- towers --


def _big_str(n: int) -> str:
    old = sys.get_int_max_str_digits() if hasattr(sys, "get_int_max_str_digits") else None
    if old is None:
        return str(n)
    try:
        sys.set_int_max_str_digits(0)
        return str(n)
    finally:
        sys.set_int_max_str_digits(old)


def tower_degree(i: int, p: int, N: int) -> int:
    return 2 + 8 * N * (i * p) ** 2


@dataclass
class TowerDescriptor:
    p: int
    N: int
    t: int
    r: int
    degrees: list[int] = field(default_factory=list)
    orders: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "t": self.t,
            "r": self.r,
            "degrees": self.degrees,
            "orders": [_big_str(o) for o in self.orders],
            "order_ratios": [_big_str(b // a) for a, b in zip([2**self.r] + self.orders, self.orders)],
            "kummer": kummer_descriptor(self.p).to_json(),
        }


def tower_descriptor(p: int, N: int, t: int, r: int) -> TowerDescriptor:
    """Degrees n_i = 2 + 8N(ip)^2 and group orders 2^r prod_{i<=k} n_i!/2 for k = 1..t."""
    if r > 4:
        raise RBoundViolated(f"r = {r}: the 2-part must have rank at most 4")
    if r < 0 or t < 1 or N < 1:
        raise ValueError("need r >= 0, t >= 1, N >= 1")
    desc = TowerDescriptor(p, N, t, r)
    order = 2**r
    for i in range(1, t + 1):
        n = tower_degree(i, p, N)
        order *= math.factorial(n) // 2
        desc.degrees.append(n)
        desc.orders.append(order)
    return desc


# -- the multiquadratic constant-field-and-Kummer extension --


@dataclass
class KummerDescriptor:
    p: int
    generators: list[str]
    places: list[str]
    matrix: list[list[int]]
    rank: int

    @property
    def degree(self) -> int:
        return 2**self.rank

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "generators": self.generators,
            "places": self.places,
            "parity_matrix": self.matrix,
            "rank": self.rank,
            "degree": self.degree,
        }


def _f2_rank(rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def square_class_vector(f: Polynomial) -> dict:
    """Square class of a nonzero f in F_p(t): constant class and odd-valuation places.

    Keys are "const", "inf" and the monic irreducible factors as coefficient tuples.
    """
    F = f.field
    out = {"const": 0 if F.is_square(f.lead()) else 1, "inf": f.degree % 2}
    for g, e in f.factor():
        if e % 2:
            out[tuple(g.coeffs)] = 1
    return {k: v for k, v in out.items() if v}


def _kummer_generators(p: int) -> list[Polynomial]:
    F = field_create(p)
    c = F.nonresidue()
    gens = [Polynomial(F, (c,))]
    gens += [Polynomial(F, (F.neg(i), 1)) for i in range(p)]
    return gens


def kummer_descriptor(p: int) -> KummerDescriptor:
    """F_(p^2)(t)(sqrt(t - i) : i in F_p) over F_p(t), as square classes."""
    gens = _kummer_generators(p)
    F = gens[0].field
    places = ["const"] + [f"t-{i}" for i in range(p)] + ["inf"]
    keys = ["const"] + [(F.neg(i), 1) for i in range(p)] + ["inf"]
    matrix = []
    for g in gens:
        v = square_class_vector(g)
        if set(v) - set(keys):
            raise ValueError("generator ramified outside {t = i} and infinity")
        matrix.append([v.get(k, 0) for k in keys])
    names = [f"{F.elem(F.nonresidue())!r}"] + [f"t-{i}" for i in range(p)]
    return KummerDescriptor(p, names, places, matrix, _f2_rank(matrix))


def in_kummer_span(p: int, f: Polynomial) -> bool:
    """Whether sqrt(f) lies in the Kummer extension, i.e. f is in the span of the generators."""
    d = kummer_descriptor(p)
    F = f.field
    keys = ["const"] + [(F.neg(i), 1) for i in range(p)] + ["inf"]
    v = square_class_vector(f)
    if set(v) - set(keys):
        return False
    vec = [v.get(k, 0) for k in keys]
    return _f2_rank(d.matrix + [vec]) == d.rank


def ramification_support(f: Polynomial) -> list[str]:
    """Places where sqrt(f) ramifies: odd-valuation places."""
    F = f.field
    v = square_class_vector(f)
    out = []
    for k in v:
        if k == "const":
            continue
        if k == "inf":
            out.append("inf")
        elif len(k) == 2 and k[1] == 1:
            out.append(f"t={F.elem(F.neg(k[0]))!r}")
        else:
            out.append("poly" + str(k))
    return sorted(out)


# -- the documented instances --


def _a5_times(m: int) -> PermGroup:
    """A5 on points 0..4 times the cyclic group of order m on points 5..4+m."""
    from .perm import cycle

    deg = 5 + m
    gens = [cycle(deg, (1, 2, 3, 4, 5)), cycle(deg, (1, 2, 3))]
    if m > 1:
        gens.append(cycle(deg, tuple(range(6, 6 + m))))
    return closure(gens, degree=deg)


def group_lemma_instances() -> list[dict]:
    """Positive and negative instances for the product lemmas; each record says what is expected."""
    from .perm import alternating_group, cycle, cyclic_group, symmetric_group

    out = []

    def record(name, expect, fn):
        try:
            res = fn()
            got = "pass" if res["pass"] else "fail"
            data = res
        except PreconditionFailed as exc:
            got, data = "precondition_failed", {"message": str(exc)}
        out.append({"id": name, "expected": expect, "outcome": got, "ok": got == expect, "data": data})

    for m in (2, 3):
        G = _a5_times(m)
        maps = [restriction(G, range(5)), restriction(G, range(5, 5 + m))]
        record(f"surjectivity.A5xC{m}", "pass", lambda G=G, maps=maps: product_surjectivity(G, maps))

    D = closure([cycle(6, (1, 2), (4, 5)), cycle(6, (1, 2, 3), (4, 5, 6))])
    record("surjectivity.diagonal_S3", "precondition_failed",
           lambda: product_surjectivity(D, [restriction(D, range(3)), restriction(D, range(3, 6))]))

    A5, C2, C3 = alternating_group(5), cyclic_group(2), cyclic_group(3)
    record("kernel.A5xC2_first_projection", "pass", lambda: product_kernel([A5, C2], lambda g: g[0]))
    record("kernel.A5xC3_identity", "pass", lambda: product_kernel([A5, C3], lambda g: g))
    S4 = symmetric_group(4)
    record("kernel.A5xS4_sign", "pass", lambda: product_kernel([A5, S4], lambda g: _sign_pair(g)))
    record("kernel.A5xA5", "precondition_failed", lambda: product_kernel([A5, A5], lambda g: g[0]))
    return out


def _sign_pair(g):
    from .perm import sign

    return tuple(sign(x) for x in g)


def group_lemma_suite(max_n: int = CRITERION_MAX_DEGREE) -> dict:
    criterion = [symmetric_criterion_check(n) for n in range(2, max_n + 1)]
    instances = group_lemma_instances()
    ok = all(c["pass"] for c in criterion) and all(i["ok"] for i in instances)
    return {"criterion": criterion, "instances": instances, "pass": ok}
