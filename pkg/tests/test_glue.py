import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from genus2glue.ec import EllipticCurve, frobenius_isogeny
from genus2glue.errors import AssumptionViolated, InvalidPoint
from genus2glue.ff import extension, field_create
from genus2glue.glue import CPoint, assumption_check, glue_construct, glue_from_isogeny, section_maps_eval

F81 = field_create(3, 4)
F25 = field_create(5, 2)
F49 = field_create(7, 2)


def glue(F, lam, lamp):
    return glue_construct(EllipticCurve(F, F.elem(lam)), EllipticCurve(F, F.elem(lamp)))


def all_points(C):
    F = C.field
    pts = list(C.points_at_infinity())
    for m in range(F.q):
        v = C.h(m)
        r = F.sqrt(v)
        if r is None:
            continue
        pts.append(CPoint(F, m, r))
        if r:
            pts.append(CPoint(F, m, F.neg(r)))
    return pts


CASES = [(F81, 5, 15), (F81, 40, 70), (F25, 7, 11), (F49, 10, 33)]


@pytest.mark.parametrize("F,lam,lamp", CASES)
def test_sextic_shape(F, lam, lamp):
    C = glue(F, lam, lamp)
    assert C.h.degree == 6 and C.h.is_squarefree() and C.h.is_even()
    rh = C.riemann_hurwitz()
    assert rh["total"] == 10 and rh["genus"] == 2
    assert sorted(C.weierstrass_x_images()) == ["0", "0", "1", "1", "inf", "inf"]


@pytest.mark.parametrize("F,lam,lamp", CASES)
def test_covers_land_on_the_curves_and_have_degree_two(F, lam, lamp):
    C = glue(F, lam, lamp)
    pts = all_points(C)
    assert len(pts) == C.genus2().count()
    for cover, target in (("pi", C.E), ("pi_prime", C.Ep)):
        fibers = Counter()
        for P in pts:
            Q = section_maps_eval(C, cover, P)
            assert target.contains(Q)
            fibers[(Q.x, Q.y)] += 1
        assert max(fibers.values()) <= 2


@pytest.mark.parametrize("F,lam,lamp", CASES)
def test_deck_involutions(F, lam, lamp):
    C = glue(F, lam, lamp)
    for P in all_points(C):
        assert C.pi(C.deck_pi(P)) == C.pi(P)
        assert C.pi_prime(C.deck_pi_prime(P)) == C.pi_prime(P)
        iota = C.hyperelliptic_involution(P)
        assert C.pi(iota) == C.E.neg(C.pi(P))
        assert C.pi_prime(iota) == C.Ep.neg(C.pi_prime(P))
        # the three involutions commute and compose to one another
        assert C.deck_pi(C.deck_pi_prime(P)) == iota


def test_fixed_points_of_the_deck_maps():
    C = glue(F81, 5, 15)
    V = C.ramification_points_pi()
    assert len(V) == 2 and all(v.m == 0 for v in V)
    Vp = C.ramification_points_pi_prime()
    assert len(Vp) == 2 and all(v.at_infinity for v in Vp)
    for v in V:
        assert C.deck_pi(v) == v
    # pi' sends V to the origin of E'
    big = V[0].field
    Cb = C if big is C.field else C.base_change(extension(C.field, 2)[1])
    assert all(Cb.pi_prime(v) == Cb.Ep.origin for v in V)
    assert Cb.pi(V[0]) != Cb.pi(V[1])


@given(seed=st.integers(0, 10**6))
def test_random_points_are_on_the_curve(seed):
    C = glue(F81, 40, 70)
    P = C.random_point(random.Random(seed))
    assert C.contains(P)
    assert C.E.contains(C.pi(P)) and C.Ep.contains(C.pi_prime(P))


def test_assumption_violations():
    E = EllipticCurve(F81, F81.elem(5))
    ok, why = assumption_check(E, E)
    assert not ok and "meet" in why
    with pytest.raises(AssumptionViolated):
        glue_construct(E, E)


def test_glue_from_frobenius():
    E = EllipticCurve(F81, F81.elem(5))
    C = glue_from_isogeny(frobenius_isogeny(E))
    assert C.Ep.lam == F81.frobenius(5)


def test_points_off_the_curve_rejected():
    C = glue(F81, 5, 15)
    with pytest.raises(InvalidPoint):
        C.pi(CPoint(F81, 1, 1))


def test_sextic_matches_closed_form():
    F = F81
    C = glue(F, 5, 15)
    lam, lamp = F.elem(5), F.elem(15)
    for m in range(F.q):
        M = F.elem(m)
        val = (lamp - lam) * (1 - M * M) * (lamp - lam * M * M) * (lamp - 1 - (lam - 1) * M * M)
        assert C.h(m) == val.code


def test_json_shape():
    C = glue(F81, 5, 15)
    doc = C.to_json()
    assert len(doc["sextic"]) == 7 and len(doc["weierstrass"]) == 6
