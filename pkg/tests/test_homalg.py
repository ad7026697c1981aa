from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from genus2glue.ec import EllipticCurve, frobenius_isogeny
from genus2glue.errors import AntiIsometryViolated, KernelCheckFailed, ShapeError
from genus2glue.ff import field_create
from genus2glue.homalg import (
    EP,
    E_,
    HomElem,
    HomMatrix,
    beta_form,
    congruence_and_minimality,
    phi_kernel_check,
    phi_matrix,
    polarization_check,
    psi_matrix,
    pushforward_row,
)

N_VALUES = st.sampled_from([3, 5, 7, 9, 27])
small = st.integers(-6, 6)


def mat(N, coeffs):
    return HomMatrix.from_coeffs(coeffs, N)


def as_integer_matrix(M: HomMatrix):
    """Represent E x E' endomorphisms over Z[tau, tauhat] as 2x2 integer matrices acting on
    (E, E') with tau -> 1 and tauhat -> N: composition is then ordinary matrix product."""
    N = M.N
    out = []
    for i, t in enumerate(M.targets):
        row = []
        for j, s in enumerate(M.sources):
            c = M.rows[i][j].coeff
            row.append(c * (N if (s, t) == (EP, E_) else 1))
        out.append(row)
    return out


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


@given(N=N_VALUES, a=st.lists(small, min_size=4, max_size=4), b=st.lists(small, min_size=4, max_size=4),
       c=st.lists(small, min_size=4, max_size=4))
def test_composition_is_associative_and_matches_a_model(N, a, b, c):
    A, B, C = (mat(N, [[x[0], x[1]], [x[2], x[3]]]) for x in (a, b, c))
    assert (A @ B) @ C == A @ (B @ C)
    assert as_integer_matrix(A @ B) == matmul(as_integer_matrix(A), as_integer_matrix(B))
    assert A @ HomMatrix.identity(N) == A == HomMatrix.identity(N) @ A


@given(N=N_VALUES, a=st.lists(small, min_size=4, max_size=4), b=st.lists(small, min_size=4, max_size=4))
def test_dual_reverses_products(N, a, b):
    A, B = mat(N, [[a[0], a[1]], [a[2], a[3]]]), mat(N, [[b[0], b[1]], [b[2], b[3]]])
    assert (A @ B).dual() == B.dual() @ A.dual()
    assert A.dual().dual() == A
    assert (A + B).dual() == A.dual() + B.dual()


@given(N=N_VALUES, a=st.lists(st.integers(1, 6), min_size=4, max_size=4))
def test_inverse(N, a):
    A = mat(N, [[a[0], a[1]], [a[2], a[3]]])
    det = a[0] * a[3] - N * a[1] * a[2]
    if det == 0:
        with pytest.raises(ShapeError):
            A.inverse()
        return
    assert A @ A.inverse() == HomMatrix.identity(N)
    assert A.inverse() @ A == HomMatrix.identity(N)


def test_elementary_relations():
    N = 5
    tau = HomElem(E_, EP, 1, N)
    tauhat = HomElem(EP, E_, 1, N)
    assert tauhat.compose(tau) == HomElem(E_, E_, N, N)
    assert tau.compose(tauhat) == HomElem(EP, EP, N, N)
    with pytest.raises(ShapeError):
        tau.compose(tau)


@pytest.mark.parametrize("n", [2, 4])
@pytest.mark.parametrize("N", [3, 7, 11])
def test_phi_psi_are_inverse_up_to_n(n, N):
    Phi, Psi = phi_matrix(n, N), psi_matrix(n, N)
    assert Phi @ Psi == HomMatrix.identity(N).scale(n)
    assert Psi @ Phi == HomMatrix.identity(N).scale(n)


@pytest.mark.parametrize("n,N", [(2, 3), (2, 5), (2, 9), (4, 3), (4, 7)])
def test_polarization(n, N):
    res = polarization_check(n, N)
    lam = res["lambda_tilde"]
    assert lam.coeffs() == [[Fraction(1 + N, n), -1], [-1, n]]
    assert lam.integral() and lam.dual() == lam


@pytest.mark.parametrize("n,N", [(3, 3), (4, 5), (2, 4)])
def test_polarization_requires_congruence(n, N):
    with pytest.raises(AntiIsometryViolated):
        polarization_check(n, N)


@given(a=st.integers(-10, 10), b=st.integers(-10, 10), c=st.integers(-10, 10), d=st.integers(-10, 10), N=N_VALUES)
def test_beta_form(a, b, c, d, N):
    assert beta_form(a, b, c, d, N) == 2 * a * c + 2 * N * b * d
    assert beta_form(a, b, c, d, N) == beta_form(c, d, a, b, N)


@pytest.mark.parametrize("p,N", [(3, 3), (3, 9), (5, 5)])
def test_congruence_mod_p(p, N):
    for b in range(-30, 31):
        res = congruence_and_minimality(b, p, N)
        assert res["congruent_mod_p"] == (b % p == 0)
        assert res["pullback_composite"] == 2
        if b % 2 == 0:
            assert res["iota_scalar_odd"] and res["minimality_certified"]


def test_pushforward_row_entries():
    row = pushforward_row(4, 3)
    assert row.coeffs() == [[1 - 12, 8]]


def test_phi_kernel_on_a_glue():
    F = field_create(3, 4)
    E = EllipticCurve(F, F.elem(5))
    tau = frobenius_isogeny(E)
    res = phi_kernel_check(E, tau.target, tau)
    assert res["kernel_size"] == 4 and res["pairs_checked"] == 16


def test_phi_kernel_detects_a_wrong_psi():
    F = field_create(3, 4)
    E = EllipticCurve(F, F.elem(5))
    tau = frobenius_isogeny(E)
    T = tau.target.two_torsion()
    wrong = {0: T[0], 1: T[2], 2: T[1], 3: T[3]}
    with pytest.raises(KernelCheckFailed):
        phi_kernel_check(E, tau.target, tau, psi=wrong)
