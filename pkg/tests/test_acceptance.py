"""Acceptance criteria, one test each.

Every test records a single ``[PASS]``/``[FAIL]`` line and then asserts.
The lines are printed in the pytest terminal summary (see conftest.py), and
directly when run with ``-s`` or as ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time

import pytest

from favard.arith import F64, RATIONAL
from favard.cap import check_creator_injectivity, check_quantum_decomposition
from favard.catalog import SHIPPED, correlated_gaussian
from favard.favard1d import product_jacobi_closed_form, stieltjes
from favard.fock import build_fock_fields, check_basis_covariance, jacobi_in_basis, jacobi_pipeline, reconstruct_moments
from favard.moments import build_moments, factor_moments
from favard.polyalg import enumerate_monomials, word_to_index
from favard.verify import random_invertible, random_vector

ALL_SPECS = dict(SHIPPED, correlated_gaussian=correlated_gaussian(12))
D1 = ["gaussian", "uniform", "exponential", "two_point"]
PRODUCTS = ["gaussian2", "gaussian_uniform", "uniform_exponential_gaussian"]


LINES = []


def emit(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    LINES.append(line)
    print(line)
    return line


def dim(spec):
    return spec.dimension


def pipeline(name, N, arith=RATIONAL):
    m = build_moments(ALL_SPECS[name], 2 * N, arith)
    dec, cap, jac = jacobi_pipeline(m, N)
    return m, dec, cap, jac


def test_criterion_01_d1_correspondence():
    t0 = time.perf_counter()
    bad = []
    for name in D1:
        N = 7  # Lambda at level 6 needs the level-7 pipeline
        _, _, _, jac = pipeline(name, N)
        rec = stieltjes(factor_moments(ALL_SPECS[name].factors[0], 2 * N), N)
        for n in range(7):
            if jac.omega_form[n][0, 0] != math.prod(rec.beta_sq[:n]):
                bad.append((name, n, "W"))
            if jac.alpha[n][0][0, 0] != rec.alphas[n]:
                bad.append((name, n, "Lambda"))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    emit(1, ok, f"d=1 W/Lambda vs Stieltjes, n<=6, exact; mismatches={bad} runtime={dt:.2f}s (<5s)")
    assert ok


def test_criterion_02_product_diagonality():
    t0 = time.perf_counter()
    bad = []
    for name in PRODUCTS:
        spec = ALL_SPECS[name]
        N = 6  # Lambda at level 5
        _, _, _, jac = pipeline(name, N)
        recs = [stieltjes(factor_moments(f, 2 * N), N) for f in spec.factors]
        for n in range(6):
            W, lams = product_jacobi_closed_form(recs, n)
            if not (jac.omega_form[n] == W).all():
                bad.append((name, n, "W"))
            for j in range(spec.dimension):
                if not (jac.alpha[n][j] == lams[j]).all():
                    bad.append((name, n, f"Lambda_{j + 1}"))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    emit(2, ok, f"product W/Lambda diagonal closed form, n<=5, exact; mismatches={bad} runtime={dt:.2f}s (<30s)")
    assert ok



def test_criterion_03_quantum_decomposition():
    worst, residue, failed = 0, 0, []
    for name, spec in ALL_SPECS.items():
        N = {1: 6, 2: 5, 3: 4}[dim(spec)]
        m, dec, cap, _ = pipeline(name, N)
        rep = check_quantum_decomposition(cap, dec, m)
        worst = max(worst, rep.max_residual)
        residue = max([residue] + [lvl.null_residue for lvl in cap])
        if not rep.passed:
            failed.append(name)
    ok = not failed and worst == 0 and residue == 0
    emit(3, ok, f"X_j = a+ + a0 + a- and Jacobi relation, {len(ALL_SPECS)} specs; max residual {worst}, stray {residue}")
    assert ok


def test_criterion_04_cap_structure():
    worst = 0
    for name, spec in ALL_SPECS.items():
        N = 6  # CAP levels 0..5
        _, dec, cap, _ = pipeline(name, N)
        G = dec.grams
        for n in range(N):
            for j in range(dec.d):
                a0 = cap[n].azero[j]
                worst = max(worst, RATIONAL.max_abs(G[n] @ a0 - a0.T @ G[n]))
                if n + 1 < N:
                    worst = max(worst, RATIONAL.max_abs(G[n] @ cap[n + 1].aminus[j] - cap[n].aplus[j].T @ G[n + 1]))
                    for k in range(dec.d):
                        c = cap[n + 1].aplus[j] @ cap[n].aplus[k] - cap[n + 1].aplus[k] @ cap[n].aplus[j]
                        worst = max(worst, RATIONAL.max_abs(c))
    ok = worst == 0
    emit(4, ok, f"Gram-adjointness, a0 self-adjointness, creator commutation, n<=5; max residual {worst}")
    assert ok


def test_criterion_05_injectivity():
    rng = random.Random(2024)
    failures, tested = 0, 0
    for name, spec in ALL_SPECS.items():
        N = {1: 6, 2: 5, 3: 4}[dim(spec)]
        _, dec, cap, _ = pipeline(name, N)
        for n in range(N):
            for _ in range(100):
                ok, _ = check_creator_injectivity(cap, random_vector(rng, dec.d, RATIONAL), n)
                tested += 1
                failures += not ok
    ok = failures == 0
    emit(5, ok, f"creator injectivity, 100 random v per level per spec ({tested} tests); failures={failures}")
    assert ok


def test_criterion_06_basis_covariance():
    t0 = time.perf_counter()
    rng = random.Random(6)
    worst, failed, count = 0, [], 0
    for name, spec in ALL_SPECS.items():
        if dim(spec) == 1:
            continue
        N = 4
        m, _, _, jac = pipeline(name, N)
        for _ in range(20):
            R = random_invertible(rng, dim(spec), RATIONAL)
            primed = jacobi_in_basis(m, R, N)
            count += 1
            for n in range(N + 1):
                rep = check_basis_covariance(jac, primed, R, n)
                worst = max(worst, rep.max_residual)
                if not rep.passed:
                    failed.append((name, n))
    dt = time.perf_counter() - t0
    ok = not failed and worst == 0 and dt < 120
    emit(6, ok, f"basis covariance, {count} random R (d=2,3), n<=4; max dev {worst} failures={failed[:5]} runtime={dt:.1f}s (<120s)")
    assert ok


def test_criterion_07_roundtrip():
    worst, words = 0, 0
    for name, spec in ALL_SPECS.items():
        d = dim(spec)
        N = {1: 6, 2: 5, 3: 4}[d]
        m, _, _, jac = pipeline(name, N)
        fields = build_fock_fields(jac)
        for k in range(N + 1):
            for w in itertools.product(range(1, d + 1), repeat=k):
                words += 1
                worst = max(worst, abs(reconstruct_moments(jac, w, fields) - m[word_to_index(w, d)]))
    ok = worst == 0
    emit(7, ok, f"moment round-trip, {words} words of length <= N; max deviation {worst}")
    assert ok


def test_criterion_08_null_propagation():
    worst, kernels = 0, {}
    for name, N in (("two_point", 6), ("two_point2", 5)):
        _, _, _, jac = pipeline(name, N)
        fields = build_fock_fields(jac)
        dims = []
        for n in range(1, N + 1):
            K = RATIONAL.nullspace(jac.omega_form[n - 1])
            dims.append(K.shape[1])
            for c in range(K.shape[1]):
                for j in range(jac.d):
                    lift = fields.plus[n - 1][j] @ K[:, c]
                    worst = max(worst, abs(lift @ jac.omega_form[n] @ lift))
        kernels[name] = dims
    nontrivial = all(any(k) for k in kernels.values())
    ok = worst == 0 and nontrivial
    emit(8, ok, f"null propagation; max |quadratic form| {worst}, kernel dims {kernels}")
    assert ok


def test_criterion_09_dimensions():
    bad = [(d, n) for d in range(1, 5) for n in range(9) if len(enumerate_monomials(d, n)) != math.comb(n + d - 1, d - 1)]
    ok = not bad
    emit(9, ok, f"symmetric-power sizes C(n+d-1,d-1), d<=4, n<=8; mismatches={bad}")
    assert ok


def test_criterion_10_cross_mode():
    worst = 0.0
    for name, spec in ALL_SPECS.items():
        N = 5
        _, _, _, exact = pipeline(name, N)
        _, _, _, approx = pipeline(name, N, F64)
        for n in range(N + 1):
            pairs = [(exact.omega_form[n], approx.omega_form[n])]
            if n < N:
                pairs += list(zip(exact.alpha[n], approx.alpha[n]))
            for a, b in pairs:
                ref = a.astype(float)
                scale = max(1.0, float(abs(ref).max()))
                worst = max(worst, float(abs(ref - b).max()) / scale)
    ok = worst <= 1e-8
    emit(10, ok, f"float vs rational W and Lambda, N=5, all specs; max relative dev {worst:.3e} (<=1e-8)")
    assert ok


if __name__ == "__main__":
    sys.exit(1 if pytest.main([__file__, "-q", "-s"]) else 0)
