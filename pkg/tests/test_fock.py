import math
import random

import pytest
from gmpy2 import mpq
from hypothesis import given

from conftest import invertible_matrices, words
from favard.arith import F64, RATIONAL
from favard.catalog import SHIPPED, TRIANGLE, correlated_gaussian
from favard.errors import ConfigError, SingularMatrixError
from favard.fock import (
    build_fock_fields,
    check_basis_covariance,
    jacobi_in_basis,
    jacobi_pipeline,
    pullback_moments,
    reconstruct_moments,
)
from favard.moments import build_moments, inner
from favard.polyalg import canonical_sym_gram, shift_matrix, word_to_index


def jac_of(spec, N, arith=RATIONAL):
    m = build_moments(spec, 2 * N, arith)
    return m, jacobi_pipeline(m, N)[2]


def test_gaussian_jacobi():
    _, jac = jac_of(SHIPPED["gaussian"], 6)
    assert [w[0, 0] for w in jac.omega_form] == [math.factorial(n) for n in range(7)]
    assert all(lam[0][0, 0] == 0 for lam in jac.alpha)
    assert len(jac.alpha) == 6


def test_gaussian2_level_two():
    _, jac = jac_of(SHIPPED["gaussian2"], 2)
    assert jac.omega_form[2].tolist() == [[2, 0, 0], [0, 1, 0], [0, 0, 2]]
    # operator form S^-1 W
    assert jac.omega_op(2).tolist() == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    assert (canonical_sym_gram(jac.basis(2)) @ jac.omega_op(2) == jac.omega_form[2]).all()


def test_two_point_and_exponential():
    _, jac = jac_of(SHIPPED["two_point"], 3)
    assert [w[0, 0] for w in jac.omega_form] == [1, 1, 0, 0]
    assert jac.omega_rank[2] == 0
    _, jac = jac_of(SHIPPED["exponential"], 5)
    assert [lam[0][0, 0] for lam in jac.alpha] == [2 * n + 1 for n in range(5)]


def test_alpha_v_linear():
    _, jac = jac_of(SHIPPED["uniform_exponential_gaussian"], 2)
    v = [mpq(1, 2), 3, -1]
    got = jac.alpha_v(1, v)
    want = jac.alpha[1][0] * v[0] + jac.alpha[1][1] * v[1] + jac.alpha[1][2] * v[2]
    assert (got == want).all()


def test_jacobi_in_basis_examples():
    m = build_moments(SHIPPED["gaussian2"], 4)
    _, jac = jac_of(SHIPPED["gaussian2"], 2)
    same = jacobi_in_basis(m, RATIONAL.eye(2), 2)
    for n in range(3):
        assert (same.omega_form[n] == jac.omega_form[n]).all()
    R = RATIONAL.array([[1, 1], [0, 1]])
    primed = jacobi_in_basis(m, R, 2)
    assert primed.omega_form[1].tolist() == [[1, 1], [1, 2]]
    assert (primed.omega_form[1] == R.T @ R).all()
    for n in range(3):
        assert check_basis_covariance(jac, primed, R, n).passed


@pytest.mark.parametrize("a", [2, mpq(-1, 3)])
def test_scalar_rescaling_d1(a):
    m, jac = jac_of(SHIPPED["gaussian"], 4)
    primed = jacobi_in_basis(m, [[a]], 4)
    for n in range(5):
        assert primed.omega_form[n][0, 0] == a ** (2 * n) * math.factorial(n)
        rep = check_basis_covariance(jac, primed, [[a]], n)
        assert rep.passed and rep.max_residual == 0
    for n in range(4):
        # rescaled coordinates: the alpha of the rescaled direction rescales too
        assert primed.alpha[n][0][0, 0] == a * jac.alpha[n][0][0, 0]


def test_pullback_errors():
    m = build_moments(SHIPPED["gaussian2"], 4)
    with pytest.raises(SingularMatrixError):
        pullback_moments(m, [[1, 2], [2, 4]])
    with pytest.raises(ConfigError):
        pullback_moments(m, [[1]])
    with pytest.raises(ConfigError):
        jacobi_in_basis(m, [[1, 1], [1, 1]], 2)


def test_fock_fields_examples():
    _, jac = jac_of(SHIPPED["gaussian"], 4)
    f = build_fock_fields(jac)
    assert [f.minus[n][0][0, 0] for n in range(1, 5)] == [1, 2, 3, 4]
    assert f.minus[0] == []
    _, jac2 = jac_of(SHIPPED["gaussian2"], 2)
    f2 = build_fock_fields(jac2)
    assert f2.plus[0][0].tolist() == [[1], [0]]
    for n in range(2):
        for j in range(2):
            assert (f2.plus[n][j] == shift_matrix(2, n, j + 1)).all()
    _, jt = jac_of(SHIPPED["two_point"], 3)
    ft = build_fock_fields(jt)
    assert ft.minus[1][0][0, 0] == 1
    assert ft.minus[2][0][0, 0] == 0


def test_fplus_is_structural():
    _, a = jac_of(SHIPPED["gaussian_uniform"], 3)
    _, b = jac_of(TRIANGLE, 3)
    fa, fb = build_fock_fields(a), build_fock_fields(b)
    for n in range(3):
        for j in range(2):
            assert (fa.plus[n][j] == fb.plus[n][j]).all()


def test_reconstruct_examples():
    _, jac = jac_of(SHIPPED["gaussian"], 4)
    assert reconstruct_moments(jac, []) == 1
    assert reconstruct_moments(jac, [1, 1, 1, 1]) == 3
    _, jac2 = jac_of(SHIPPED["gaussian2"], 4)
    assert reconstruct_moments(jac2, [1, 1, 2, 2]) == 1
    with pytest.raises(ConfigError):
        reconstruct_moments(jac, [1] * 5)
    with pytest.raises(ConfigError):
        reconstruct_moments(jac2, [3])


CASES = {
    "gaussian_uniform": (SHIPPED["gaussian_uniform"], 4),
    "uniform_exponential_gaussian": (SHIPPED["uniform_exponential_gaussian"], 3),
    "two_point2": (SHIPPED["two_point2"], 4),
    "correlated_gaussian": (correlated_gaussian(8), 4),
    "triangle": (TRIANGLE, 4),
}


@pytest.fixture(scope="module", params=list(CASES))
def case(request):
    spec, N = CASES[request.param]
    m = build_moments(spec, 2 * N)
    dec, cap, jac = jacobi_pipeline(m, N)
    return m, dec, jac


def test_omega_symmetric_psd(case):
    m, dec, jac = case
    assert jac.omega_form[0].tolist() == [[1]]
    for W in jac.omega_form:
        assert (W == W.T).all()
        assert RATIONAL.psd_violation(W) is None


def test_alpha_form_symmetry(case):
    m, dec, jac = case
    for n, lams in enumerate(jac.alpha):
        for lam in lams:
            assert (jac.omega_form[n] @ lam == lam.T @ jac.omega_form[n]).all()


def test_unitarity_against_oracle(case):
    m, dec, jac = case
    rng = random.Random(11)
    for n in range(jac.N + 1):
        dim = len(jac.basis(n))
        for _ in range(3):
            xi = RATIONAL.array([mpq(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(dim)])
            eta = RATIONAL.array([mpq(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(dim)])
            p = dec.combine(n, jac.Un[n] @ xi)
            q = dec.combine(n, jac.Un[n] @ eta)
            assert xi @ jac.omega_form[n] @ eta == inner(p, q, m)


def test_null_propagation(case):
    m, dec, jac = case
    f = build_fock_fields(jac)
    for n in range(1, jac.N + 1):
        K = RATIONAL.nullspace(jac.omega_form[n - 1])
        for c in range(K.shape[1]):
            for j in range(jac.d):
                lift = f.plus[n - 1][j] @ K[:, c]
                assert lift @ jac.omega_form[n] @ lift == 0


def test_roundtrip(case):
    m, dec, jac = case
    f = build_fock_fields(jac)
    for w in words(jac.d, jac.N):
        assert reconstruct_moments(jac, w, f) == m[word_to_index(w, jac.d)]


def test_fminus_is_omega_adjoint(case):
    m, dec, jac = case
    f = build_fock_fields(jac)
    for n in range(1, jac.N + 1):
        for j in range(jac.d):
            lhs = jac.omega_form[n - 1] @ f.minus[n][j]
            rhs = f.plus[n - 1][j].T @ jac.omega_form[n]
            assert (lhs == rhs).all()


@pytest.mark.parametrize("name", ["gaussian_uniform", "two_point2"])
@given(R=invertible_matrices(2))
def test_basis_covariance_random(name, R):
    N = 3
    m = build_moments(SHIPPED[name], 2 * N)
    jac = jacobi_pipeline(m, N)[2]
    primed = jacobi_in_basis(m, R, N)
    for n in range(N + 1):
        rep = check_basis_covariance(jac, primed, R, n)
        assert rep.passed and rep.details["omega_dev"] == 0


def test_float_mode_roundtrip():
    m, jac = jac_of(SHIPPED["uniform_exponential_gaussian"], 3, F64)
    f = build_fock_fields(jac)
    for w in words(3, 3):
        assert reconstruct_moments(jac, w, f) == pytest.approx(float(m[word_to_index(w, 3)]), abs=1e-9)
