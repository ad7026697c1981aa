"""Exact algebra of homomorphisms between E, E' and their products.

Hom(E,E) and Hom(E',E') are modeled as Q (generic endomorphism ring Z, with
rational coefficients allowed in intermediate steps), Hom(E,E') = Q tau and
Hom(E',E) = Q tauhat, subject to tauhat tau = N and tau tauhat = N.
Matrices act on columns: entry (i, j) lies in Hom(sources[j], targets[i]).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ec import EllipticCurve, Isogeny
from .errors import AntiIsometryViolated, KernelCheckFailed, ShapeError

E_, EP = "E", "E'"


def basis_symbol(source: str, target: str) -> str:
    if source == target:
        return "1"
    return "tau" if source == E_ else "tauhat"


@dataclass(frozen=True)
class HomElem:
    source: str
    target: str
    coeff: Fraction
    N: int

    def __post_init__(self):
        if self.source not in (E_, EP) or self.target not in (E_, EP):
            raise ShapeError(f"unknown object in {self.source} -> {self.target}")
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def symbol(self) -> str:
        return basis_symbol(self.source, self.target)

    @property
    def integral(self) -> bool:
        return self.coeff.denominator == 1

    def __repr__(self):
        return f"{self.coeff}" + ("" if self.symbol == "1" else f"*{self.symbol}")

    def compose(self, inner: "HomElem") -> "HomElem":
        """self o inner."""
        if inner.target != self.source:
            raise ShapeError(f"cannot compose {self.source}->{self.target} after {inner.source}->{inner.target}")
        if self.N != inner.N:
            raise ShapeError("different isogeny degrees")
        c = self.coeff * inner.coeff
        if self.source != self.target and inner.source != inner.target:
            c *= self.N
        return HomElem(inner.source, self.target, c, self.N)

    def __add__(self, other: "HomElem") -> "HomElem":
        if (self.source, self.target) != (other.source, other.target):
            raise ShapeError("adding homomorphisms between different objects")
        return HomElem(self.source, self.target, self.coeff + other.coeff, self.N)

    def __neg__(self):
        return HomElem(self.source, self.target, -self.coeff, self.N)

    def scale(self, c) -> "HomElem":
        return HomElem(self.source, self.target, self.coeff * Fraction(c), self.N)

    def dual(self) -> "HomElem":
        return HomElem(self.target, self.source, self.coeff, self.N)

    def to_json(self):
        return {"basis": self.symbol, "coeff": [self.coeff.numerator, self.coeff.denominator]}


class HomMatrix:
    def __init__(self, sources: tuple[str, ...], targets: tuple[str, ...], entries, N: int):
        self.sources = tuple(sources)
        self.targets = tuple(targets)
        self.N = N
        rows = []
        for i, t in enumerate(self.targets):
            row = []
            for j, s in enumerate(self.sources):
                e = entries[i][j]
                if not isinstance(e, HomElem):
                    e = HomElem(s, t, Fraction(e), N)
                if (e.source, e.target) != (s, t):
                    raise ShapeError(f"entry ({i},{j}) is not in Hom({s}, {t})")
                row.append(e)
            rows.append(tuple(row))
        self.rows = tuple(rows)

    @classmethod
    def from_coeffs(cls, coeffs, N: int, sources=(E_, EP), targets=(E_, EP)) -> "HomMatrix":
        """Coefficient grid relative to the basis symbols (1, tau, tauhat)."""
        return cls(sources, targets, coeffs, N)

    @classmethod
    def identity(cls, N: int, objs=(E_, EP)) -> "HomMatrix":
        return cls(objs, objs, [[1 if i == j else 0 for j in range(len(objs))] for i in range(len(objs))], N)

    def coeffs(self) -> list[list[Fraction]]:
        return [[e.coeff for e in row] for row in self.rows]

    def __eq__(self, other):
        if not isinstance(other, HomMatrix):
            return NotImplemented
        return (self.sources, self.targets, self.coeffs(), self.N) == (
            other.sources, other.targets, other.coeffs(), other.N)

    def __repr__(self):
        return "[" + "; ".join(", ".join(repr(e) for e in row) for row in self.rows) + "]"

    def __matmul__(self, other: "HomMatrix") -> "HomMatrix":
        return hom_compose(self, other)

    def __add__(self, other: "HomMatrix") -> "HomMatrix":
        if (self.sources, self.targets) != (other.sources, other.targets):
            raise ShapeError("adding matrices of different shapes")
        return HomMatrix(self.sources, self.targets,
                         [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.N)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HomMatrix":
        return HomMatrix(self.sources, self.targets, [[e.scale(c) for e in row] for row in self.rows], self.N)

    def dual(self) -> "HomMatrix":
        """Entrywise dual (tau <-> tauhat) and transpose."""
        cols = [[self.rows[i][j].dual() for i in range(len(self.targets))] for j in range(len(self.sources))]
        return HomMatrix(self.targets, self.sources, cols, self.N)

    def integral(self) -> bool:
        return all(e.integral for row in self.rows for e in row)

    def inverse(self) -> "HomMatrix":
        """Inverse of a 2x2 matrix on E x E' by the Schur complement of the top-left entry."""
        if self.sources != (E_, EP) or self.targets != (E_, EP):
            raise ShapeError("inverse implemented for endomorphisms of E x E'")
        (A, B), (C, D) = self.rows
        if A.coeff == 0:
            raise ShapeError("top-left entry must be invertible")
        Ainv = HomElem(E_, E_, 1 / A.coeff, self.N)
        S = D + -(C.compose(Ainv).compose(B))
        if S.coeff == 0:
            raise ShapeError("matrix is not invertible")
        Sinv = HomElem(EP, EP, 1 / S.coeff, self.N)
        top_left = Ainv + Ainv.compose(B).compose(Sinv).compose(C).compose(Ainv)
        top_right = -(Ainv.compose(B).compose(Sinv))
        bottom_left = -(Sinv.compose(C).compose(Ainv))
        return HomMatrix((E_, EP), (E_, EP), [[top_left, top_right], [bottom_left, Sinv]], self.N)

    def to_json(self):
        return {
            "sources": list(self.sources),
            "targets": list(self.targets),
            "N": self.N,
            "rows": [[e.to_json() for e in row] for row in self.rows],
        }


def hom_compose(A: HomMatrix, B: HomMatrix) -> HomMatrix:
    """A o B (apply B first)."""
    if A.sources != B.targets:
        raise ShapeError(f"cannot compose: {A.sources} vs {B.targets}")
    if A.N != B.N:
        raise ShapeError("different isogeny degrees")
    out = []
    for i, t in enumerate(A.targets):
        row = []
        for j, s in enumerate(B.sources):
            acc = HomElem(s, t, 0, A.N)
            for k in range(len(A.sources)):
                acc = acc + A.rows[i][k].compose(B.rows[k][j])
            row.append(acc)
        out.append(row)
    return HomMatrix(B.sources, A.targets, out, A.N)


def phi_matrix(n: int, N: int) -> HomMatrix:
    """[[n, 0], [tau, 1]]."""
    return HomMatrix.from_coeffs([[n, 0], [1, 1]], N)


def psi_matrix(n: int, N: int) -> HomMatrix:
    """[[1, 0], [-tau, n]], so that phi psi = psi phi = n."""
    return HomMatrix.from_coeffs([[1, 0], [-1, n]], N)


# -- the bilinear form from the generator relations --

_RELATIONS = {
    ("pi_*", "pi^*"): 2,
    ("pi'_*", "pi'^*"): 2,
    ("pi_*", "pi'^*"): 0,
    ("pi'_*", "pi^*"): 0,
}


def _reduce_words(terms: dict, N: int) -> dict:
    changed = True
    while changed:
        changed = False
        out: dict = {}
        for word, c in terms.items():
            if c == 0:
                continue
            for i in range(len(word) - 1):
                pair = word[i:i + 2]
                factor = _RELATIONS.get(pair)
                if factor is None and pair in (("tauhat", "tau"), ("tau", "tauhat")):
                    factor = N
                if factor is not None:
                    new = word[:i] + word[i + 2:]
                    out[new] = out.get(new, 0) + c * factor
                    changed = True
                    break
            else:
                out[word] = out.get(word, 0) + c
        terms = {w: c for w, c in out.items() if c}
    return terms


def beta_form(a: int, b: int, c: int, d: int, N: int) -> int:
    """(a pi + b tauhat pi')_* (c pi + d tauhat pi')^* as an integer."""
    push = {("pi_*",): a, ("tauhat", "pi'_*"): b}
    # the pullback of tauhat pi' is pi'^* tau
    pull = {("pi^*",): c, ("pi'^*", "tau"): d}
    terms: dict = {}
    for w1, c1 in push.items():
        for w2, c2 in pull.items():
            terms[w1 + w2] = terms.get(w1 + w2, 0) + c1 * c2
    reduced = _reduce_words(terms, N)
    if any(w for w in reduced):
        raise ShapeError(f"words {list(reduced)} did not reduce to scalars")
    value = reduced.get((), 0)
    expected = 2 * a * c + 2 * N * b * d
    if value != expected:
        raise AssertionError(f"beta = {value}, expected {expected}")
    return value


# -- numeric kernel check for n = 2 --


def phi_kernel_check(E: EllipticCurve, Ep: EllipticCurve, iso: Isogeny, psi: dict | None = None) -> dict:
    """Phi(P, Q) = (2P, tau(P) + Q) on E[2] x E'[2] vanishes exactly on the graph of psi."""
    psi = iso.psi if psi is None else psi
    TE, TEp = E.two_torsion(), Ep.two_torsion()
    kernel = []
    for i, P in enumerate(TE):
        for Q in TEp:
            image = (E.mul(2, P), Ep.add(iso(P), Q))
            zero = image == (E.origin, Ep.origin)
            graph = Q == Ep.neg(psi[i])
            if zero != graph:
                raise KernelCheckFailed(f"mismatch at ({P!r}, {Q!r})", pair=(P, Q))
            if zero:
                kernel.append((P, Q))
    if len(kernel) != 4:
        raise KernelCheckFailed(f"kernel has {len(kernel)} elements, expected 4")
    return {"pass": True, "kernel_size": len(kernel), "pairs_checked": len(TE) * len(TEp),
            "kernel": [[P.to_json(), Q.to_json()] for P, Q in kernel]}


# -- polarization and the mod-p / minimality criteria --


def polarization_check(n: int, N: int) -> dict:
    if (N + 1) % n:
        raise AntiIsometryViolated(f"N = {N} is not congruent to -1 modulo n = {n}")
    Phi = phi_matrix(n, N)
    lam = (Phi.dual().inverse() @ Phi.inverse()).scale(n)
    if not lam.integral():
        raise AssertionError(f"polarization matrix {lam!r} is not integral")
    expected = HomMatrix.from_coeffs([[Fraction(1 + N, n), -1], [-1, n]], N)
    if lam != expected:
        raise AssertionError(f"{lam!r} differs from {expected!r}")
    pulled = Phi.dual() @ lam @ Phi
    if pulled != HomMatrix.identity(N).scale(n):
        raise AssertionError(f"pull-back {pulled!r} is not {n} * id")
    return {"pass": True, "lambda_tilde": lam, "pullback": pulled}


def pushforward_row(b: int, N: int, n: int = 2) -> HomMatrix:
    """(pi_* + b tauhat pi'_*) in the coordinates E x E' of the Jacobian: (1, b tauhat) Psi."""
    row = HomMatrix((E_, EP), (E_,), [[1, b]], N)
    return row @ psi_matrix(n, N)


def congruence_and_minimality(b: int, p: int, N: int) -> dict:
    row = pushforward_row(b, N)
    base = pushforward_row(0, N)
    diff = [x - y for x, y in zip(row.coeffs()[0], base.coeffs()[0])]
    congruent = all(d.denominator == 1 and d.numerator % p == 0 for d in diff)
    c0, c1 = row.coeffs()[0]
    if (c0, c1) != (1 - b * N, 2 * b):
        raise AssertionError(f"pushforward row {row!r} differs from (1 - bN, 2b tauhat)")
    pi_pull = HomMatrix((E_,), (E_, EP), [[2], [1]], N)  # first column of Phi
    composite = (row @ pi_pull).coeffs()[0][0]
    iota_scalar = int(c0)
    odd = iota_scalar % 2 == 1
    # an isogeny the cover factors through has degree dividing deg(2) = 4 and (1 - bN)^2
    bound = gcd(4, iota_scalar * iota_scalar)
    return {
        "b": b,
        "p": p,
        "N": N,
        "congruent_mod_p": congruent,
        "row": row.to_json()["rows"][0],
        "pullback_composite": int(composite),
        "iota_scalar": iota_scalar,
        "iota_scalar_odd": odd,
        "factor_degree_bound": bound,
        "minimality_certified": bound == 1 and composite == 2,
    }
