"""The genus-2 curve obtained by gluing two shifted-Legendre curves along 2-torsion.

With lam, lam' the Legendre parameters, C is Y^2 = h(m) where
    h(m) = (lam' - lam)(1 - m^2)(lam' - lam m^2)(lam' - 1 - (lam - 1) m^2),
and the two covers are
    pi : (m, Y) -> (x(m), Y / (1 - m^2)^2)       onto E,
    pi': (m, Y) -> (x(m), m Y / (1 - m^2)^2)     onto E',
with x(m) = (lam' - lam m^2) / (1 - m^2).  The model comes from the conic
u^2 = (x - lam)(x - lam') parametrized through (lam, 0) by u = m (x - lam).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ec import ECPoint, EllipticCurve, Isogeny
from .errors import AssumptionViolated, ChartError, FieldMismatch, InvalidPoint
from .ff import FieldDescriptor, FieldElement, FieldEmbedding, extension
from .poly import Polynomial, RatFunc


@dataclass(frozen=True)
class CPoint:
    """An affine point (m, Y) or one of the two points at infinity.

    At infinity Y / m^3 tends to s, where s^2 is the leading coefficient of h.
    """

    field: FieldDescriptor
    m: int | None
    Y: int | None = None
    s: int | None = None

    @property
    def at_infinity(self) -> bool:
        return self.m is None

    def __repr__(self):
        F = self.field
        if self.m is None:
            return f"CPoint(inf, s={F.elem(self.s)!r})"
        return f"CPoint(m={F.elem(self.m)!r}, Y={F.elem(self.Y)!r})"

    def to_json(self):
        F = self.field
        if self.m is None:
            return {"inf": F.digits(self.s)}
        return {"m": F.digits(self.m), "Y": F.digits(self.Y)}


def normalized_psi(E: EllipticCurve, Ep: EllipticCurve) -> dict:
    """The 2-torsion bijection fixing inf, (0,0), (1,0) and sending (lam,0) to (lam',0)."""
    return {i: T for i, T in enumerate(Ep.two_torsion())}


def _psi_of(E: EllipticCurve, Ep: EllipticCurve, psi) -> dict:
    if isinstance(psi, Isogeny):
        return psi.psi
    if psi is None:
        return normalized_psi(E, Ep)
    return psi


def assumption_check(E: EllipticCurve, Ep: EllipticCurve, psi=None) -> tuple[bool, str]:
    """Whether the images of the two zero sections on the common x-line are disjoint."""
    if E.field is not Ep.field:
        raise FieldMismatch("curves over different fields")
    psi = _psi_of(E, Ep, psi)
    if [psi[i] for i in range(4)] != Ep.two_torsion():
        return False, "psi does not respect the normalization inf, (0,0), (1,0), origin"
    if E.lam == Ep.lam:
        return False, f"zero sections meet: lambda = lambda' = {E.lam_elem!r}"
    return True, f"x = {E.lam_elem!r} and x = {Ep.lam_elem!r} are distinct"


class GluedCurve:
    def __init__(self, E: EllipticCurve, Ep: EllipticCurve):
        F = E.field
        self.field = F
        self.E = E
        self.Ep = Ep
        lam, lamp = E.lam, Ep.lam
        self.c = F.sub(lamp, lam)
        one_minus_m2 = Polynomial(F, (1, 0, F.neg(1)))
        f2 = Polynomial(F, (lamp, 0, F.neg(lam)))
        f3 = Polynomial(F, (F.sub(lamp, 1), 0, F.neg(F.sub(lam, 1))))
        self.factors = (one_minus_m2, f2, f3)
        self.h = one_minus_m2 * f2 * f3 * self.c
        self.lc = self.h.lead()
        self.x_map = RatFunc(f2, one_minus_m2)
        self.deck_denominator = one_minus_m2
        if self.h.degree != 6 or not self.h.is_squarefree():
            raise AssumptionViolated("the sextic is not squarefree of degree 6")

    def __repr__(self):
        return f"GluedCurve(lambda={self.E.lam_elem!r}, lambda'={self.Ep.lam_elem!r})"

    # -- points --

    def contains(self, pt: CPoint) -> bool:
        F = self.field
        if pt.field is not F:
            return False
        if pt.m is None:
            return pt.s is not None and F.mul(pt.s, pt.s) == self.lc
        return F.mul(pt.Y, pt.Y) == self.h(pt.m)

    def point(self, m, Y) -> CPoint:
        F = self.field
        pt = CPoint(F, F(m).code, F(Y).code)
        if not self.contains(pt):
            raise InvalidPoint(f"{pt!r} is not on {self!r}")
        return pt

    def points_at_infinity(self) -> list[CPoint]:
        F = self.field
        s = F.sqrt(self.lc)
        if s is None:
            return []
        return [CPoint(F, None, s=s), CPoint(F, None, s=F.neg(s))]

    def random_point(self, rng: random.Random) -> CPoint:
        F = self.field
        while True:
            m = rng.randrange(F.q)
            Y = F.sqrt(self.h(m))
            if Y is not None:
                if rng.random() < 0.5:
                    Y = F.neg(Y)
                return CPoint(F, m, Y)

    def ramification_points_pi(self) -> list[CPoint]:
        """Fixed points of the deck involution of pi, i.e. the points over m = 0."""
        return self._over_m0()

    def ramification_points_pi_prime(self) -> list[CPoint]:
        """Fixed points of the deck involution of pi': the two points at infinity."""
        return self._infinity_points_split()

    def _over_m0(self) -> list[CPoint]:
        F = self.field
        h0 = self.h(0)
        Y0 = F.sqrt(h0)
        if Y0 is None:
            big, emb = extension(F, 2)
            Cb = self.base_change(emb)
            return Cb._over_m0()
        return [CPoint(F, 0, Y0), CPoint(F, 0, F.neg(Y0))]

    def _infinity_points_split(self) -> list[CPoint]:
        pts = self.points_at_infinity()
        if pts:
            return pts
        big, emb = extension(self.field, 2)
        return self.base_change(emb).points_at_infinity()

    def deck_pi(self, pt: CPoint) -> CPoint:
        F = pt.field
        if pt.m is None:
            return CPoint(F, None, s=F.neg(pt.s))
        return CPoint(F, F.neg(pt.m), pt.Y)

    def deck_pi_prime(self, pt: CPoint) -> CPoint:
        F = pt.field
        if pt.m is None:
            return pt
        return CPoint(F, F.neg(pt.m), F.neg(pt.Y))

    def hyperelliptic_involution(self, pt: CPoint) -> CPoint:
        F = pt.field
        if pt.m is None:
            return CPoint(F, None, s=F.neg(pt.s))
        return CPoint(F, pt.m, F.neg(pt.Y))

    # -- maps --

    def pi(self, pt: CPoint) -> ECPoint:
        return section_maps_eval(self, "pi", pt)

    def pi_prime(self, pt: CPoint) -> ECPoint:
        return section_maps_eval(self, "pi_prime", pt)

    # -- Weierstrass data --

    def weierstrass_roots(self) -> list[tuple[FieldElement, bool]]:
        """The six roots of h in F_(q^2), each tagged with whether it lies in F_q."""
        F = self.field
        big, emb = extension(F, 2)
        lam, lamp = emb.code(self.E.lam), emb.code(self.Ep.lam)
        squares = [1, big.div(lamp, lam), big.div(big.sub(lamp, 1), big.sub(lam, 1))]
        out = []
        for sq in squares:
            r = big.sqrt(sq)
            for root in sorted({r, big.neg(r)}):
                out.append((big.elem(root), emb.preimage_code(root) is not None))
        return out

    def weierstrass_x_images(self) -> list[str]:
        """x(m) at each Weierstrass root, as "inf" or the code of the value in F_q."""
        F = self.field
        big, emb = extension(F, 2)
        xb = self.x_map.change_field(emb)
        out = []
        for root, _ in self.weierstrass_roots():
            if xb.den(root.code) == 0:
                out.append("inf")
            else:
                out.append(str(emb.preimage(xb(root)).code))
        return out

    def riemann_hurwitz(self) -> dict:
        """Ramification bookkeeping for the degree-4 map x(m) from C to the line."""
        F = self.field
        weier = len(self.weierstrass_roots())
        # critical values of m -> x(m): m = 0 and m = inf; two points of C above each,
        # since neither is a root of h and h has even degree
        crit = 0
        crit += 2 if self.h(0) != 0 else 1
        crit += 2 if self.h.degree == 6 else 1
        total = weier + crit
        genus = (4 * -2 + total + 2) // 2
        return {"degree": 4, "hyperelliptic_ramification": weier, "x_line_ramification": crit,
                "total": total, "genus": genus}

    # -- field change and serialization --

    def base_change(self, emb: FieldEmbedding) -> "GluedCurve":
        return GluedCurve(self.E.base_change(emb), self.Ep.base_change(emb))

    def genus2(self):
        from .g2 import Genus2Curve

        return Genus2Curve(self.h)

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.to_json(),
            "lambda": self.E.lam_elem.to_json(),
            "lambda_prime": self.Ep.lam_elem.to_json(),
            "sextic": [F.digits(c) for c in self.h.coeffs],
            "weierstrass": [
                {"root": r.coeffs(), "field": "F_q" if rational else "F_q2"}
                for r, rational in self.weierstrass_roots()
            ],
            "x_map": {
                "num": [F.digits(c) for c in self.x_map.num.coeffs],
                "den": [F.digits(c) for c in self.x_map.den.coeffs],
            },
            "conic_base_point": [self.E.lam_elem.to_json(), F.zero().to_json()],
        }


def glue_construct(E: EllipticCurve, Ep: EllipticCurve, psi=None) -> GluedCurve:
    ok, why = assumption_check(E, Ep, psi)
    if not ok:
        raise AssumptionViolated(f"{why} (lambda = {E.lam_elem!r}, lambda' = {Ep.lam_elem!r})")
    C = GluedCurve(E, Ep)
    rh = C.riemann_hurwitz()
    if rh["total"] != 10 or rh["genus"] != 2:
        raise AssumptionViolated(f"unexpected ramification data {rh}")
    return C


def glue_from_isogeny(iso: Isogeny) -> GluedCurve:
    return glue_construct(iso.source, iso.target, iso)


def section_maps_eval(C: GluedCurve, which: str, pt: CPoint):
    """Evaluate pi, pi' or the hyperelliptic projection at a point of C.

    Points with m = +-1 go to the point at infinity of the target; the points at
    infinity of C go to (lam, 0) under pi and to (lam, s) under pi'.
    """
    if not C.contains(pt):
        raise InvalidPoint(f"{pt!r} is not on {C!r}")
    F = C.field
    if which == "hyperelliptic":
        return None if pt.m is None else F.elem(pt.m)
    if which not in ("pi", "pi_prime"):
        raise ValueError(f"unknown map {which!r}")
    if pt.m is None:
        if which == "pi":
            return ECPoint(F, C.E.lam, 0)
        return ECPoint(F, C.E.lam, pt.s)
    den = C.deck_denominator(pt.m)
    if den == 0:
        return ECPoint(F)
    x = C.x_map(pt.m)
    y = F.div(pt.Y, F.mul(den, den))
    if which == "pi_prime":
        y = F.mul(pt.m, y)
    out = ECPoint(F, x, y)
    target = C.E if which == "pi" else C.Ep
    if not target.contains(out):
        raise ChartError(f"{which} image of {pt!r} left the target curve")
    return out
