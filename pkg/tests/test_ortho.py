import random

import pytest
import sympy
from gmpy2 import mpq

from favard.arith import F64, RATIONAL
from favard.catalog import SHIPPED, TRIANGLE, correlated_gaussian
from favard.errors import MomentError
from favard.moments import Atomic, MomentTable, build_moments, inner
from favard.ortho import decompose, project_coeffs
from favard.polyalg import Polynomial, graded_monomials

x = sympy.symbols("x")


def _from_sympy(expr):
    poly = sympy.Poly(expr, x)
    out = {}
    for (k,), c in poly.terms():
        c = sympy.Rational(c)
        out[(k,)] = mpq(int(c.p), int(c.q))
    return Polynomial(1, out)


def test_uniform_level_two():
    dec = decompose(build_moments(SHIPPED["uniform"], 4), 2)
    X = Polynomial.variable(1, 1)
    assert dec.monic[0][0] == Polynomial.constant(1, 1)
    assert dec.monic[1][0] == X
    assert dec.monic[2][0] == X * X - Polynomial.constant(mpq(1, 3), 1)
    assert [g[0, 0] for g in dec.grams] == [1, mpq(1, 3), mpq(4, 45)]


@pytest.mark.parametrize("name,family", [("uniform", sympy.legendre), ("gaussian", sympy.hermite_prob)])
def test_monic_families_match_classical(name, family):
    N = 6
    dec = decompose(build_moments(SHIPPED[name], 2 * N), N)
    for n in range(N + 1):
        p = sympy.Poly(family(n, x), x)
        monic = sympy.expand(p.as_expr() / p.LC())
        assert dec.monic[n][0] == _from_sympy(monic)


def test_gaussian2_level_one():
    dec = decompose(build_moments(SHIPPED["gaussian2"], 4), 2)
    assert dec.monic[1] == [Polynomial.variable(1, 2), Polynomial.variable(2, 2)]
    assert (dec.grams[1] == RATIONAL.eye(2)).all()


def test_two_point_degenerate():
    m = build_moments(Atomic((((1,), "1/2"), ((-1,), "1/2"))), 4)
    dec = decompose(m, 2)
    X = Polynomial.variable(1, 1)
    q2 = dec.monic[2][0]
    assert q2 == X * X - Polynomial.constant(1, 1)
    assert inner(q2, q2, m) == 0
    assert dec.ranks == [1, 1, 0]


def test_project_coeffs_examples():
    dec = decompose(build_moments(SHIPPED["uniform"], 4), 2)
    X = Polynomial.variable(1, 1)
    parts = project_coeffs(X * X, dec)
    assert [list(p) for p in parts] == [[mpq(1, 3)], [0], [1]]
    assert [list(p) for p in project_coeffs(Polynomial.constant(1, 1), dec)] == [[1], [0], [0]]
    q = dec.monic[1][0]
    assert [list(p) for p in project_coeffs(q, dec)] == [[0], [1], [0]]
    with pytest.raises(ValueError):
        project_coeffs(X * X * X, dec)


def test_decompose_errors():
    m = build_moments(SHIPPED["gaussian"], 3)
    with pytest.raises(MomentError):
        decompose(m, 2)
    bad = build_moments(MomentTable(1, {(0,): 1, (1,): 0, (2,): -1}, 2), 2)
    with pytest.raises(MomentError):
        decompose(bad, 1)


CASES = {
    "gaussian_uniform": (SHIPPED["gaussian_uniform"], 4),
    "uniform_exponential_gaussian": (SHIPPED["uniform_exponential_gaussian"], 3),
    "two_point2": (SHIPPED["two_point2"], 4),
    "triangle": (TRIANGLE, 4),
    "correlated_gaussian": (correlated_gaussian(8), 4),
}


@pytest.fixture(scope="module", params=list(CASES))
def case(request):
    spec, N = CASES[request.param]
    m = build_moments(spec, 2 * N, RATIONAL)
    return m, decompose(m, N)


def test_monic_property(case):
    m, dec = case
    for n in range(dec.N + 1):
        for mono, q in zip(dec.levels[n], dec.monic[n]):
            assert q.degree == n
            assert q[mono] == 1
            assert all(sum(k) < n or k == mono for k in q.coeffs)


def test_cross_level_orthogonality(case):
    m, dec = case
    for n in range(dec.N + 1):
        for k in range(n):
            for q in dec.monic[n]:
                for r in dec.monic[k]:
                    assert inner(q, r, m) == 0


def test_grams_match_oracle_and_are_psd(case):
    m, dec = case
    for n in range(dec.N + 1):
        G = dec.grams[n]
        assert (G == G.T).all()
        assert RATIONAL.psd_violation(G) is None
        for i, q in enumerate(dec.monic[n]):
            for k, r in enumerate(dec.monic[n]):
                assert G[i, k] == inner(q, r, m)


def test_filtration(case):
    m, dec = case
    for mono in graded_monomials(m.d, dec.N):
        p = Polynomial.monomial(mono)
        parts = project_coeffs(p, dec)
        rebuilt = Polynomial(m.d)
        for n, c in enumerate(parts):
            assert n <= sum(mono) or RATIONAL.max_abs(c) == 0
            rebuilt = rebuilt + dec.combine(n, c)
        assert rebuilt == p


def test_uniqueness_under_permuted_order(case):
    m, dec = case
    rng = random.Random(7)

    def shuffle(entries):
        entries = list(entries)
        rng.shuffle(entries)
        return entries

    other = decompose(m, dec.N, order=shuffle)
    for n in range(dec.N + 1):
        for mono in dec.levels[n]:
            assert other.q(mono) == dec.q(mono)


def test_float_mode_close_to_rational():
    spec, N = CASES["gaussian_uniform"]
    exact = decompose(build_moments(spec, 2 * N, RATIONAL), N)
    approx = decompose(build_moments(spec, 2 * N, F64), N)
    for n in range(N + 1):
        assert F64.allclose(approx.grams[n], exact.grams[n].astype(float), scale=1.0)
        assert approx.ranks[n] == exact.ranks[n]


def test_seeds_agree_on_nondegenerate_states():
    for spec, N in (CASES["gaussian_uniform"], CASES["correlated_gaussian"]):
        m = build_moments(spec, 2 * N)
        a = decompose(m, N)
        b = decompose(m, N, representatives="monomial")
        assert all(p == q for la, lb in zip(a.monic, b.monic) for p, q in zip(la, lb))


def test_seeds_differ_on_degenerate_states():
    m = build_moments(SHIPPED["two_point"], 8)
    X = Polynomial.variable(1, 1)
    one = Polynomial.constant(1, 1)
    rec = decompose(m, 4)
    mono = decompose(m, 4, representatives="monomial")
    assert rec.monic[4][0] == X**4 - X**2
    assert mono.monic[4][0] == X**4 - one
    # both are valid: same Grams, orthogonal to every lower level
    for dec in (rec, mono):
        assert [g[0, 0] for g in dec.grams] == [1, 1, 0, 0, 0]
        for k in range(4):
            assert inner(dec.monic[4][0], dec.monic[k][0], m) == 0
    with pytest.raises(ValueError):
        decompose(m, 2, representatives="other")
