"""Jacobi sequences (Omega_n, alpha_{.|n}) and the interacting Fock picture.

Representation conventions
--------------------------
* Symmetric-power vectors are coordinate vectors on the multiset basis
  e_{j-bar} of :func:`~favard.polyalg.enumerate_monomials`.
* ``omega_form[n]`` is the bilinear-form matrix W_n with entries
  <e_i, Omega_n e_j>; it equals C_n^T G_n C_n where C_n carries the monic
  coordinates of the creator words (a+_1)^{m_1} ... (a+_d)^{m_d} Phi.
  The operator matrix is S_n^{-1} W_n (see :meth:`JacobiSequences.omega_op`).
* ``alpha[n][j-1]`` is Lambda_{j|n}, the solution of C_n Lambda = A0_j C_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arith import Arith
from .cap import build_cap
from .errors import CheckReport, ConfigError, SingularMatrixError
from .moments import MomentFunctional, MomentTable, build_moments
from .ortho import OrthogonalDecomposition, decompose
from .polyalg import (
    Polynomial,
    canonical_sym_gram,
    enumerate_monomials,
    graded_monomials,
    shift_matrix,
    sym_lift,
)

__all__ = [
    "JacobiSequences",
    "FockFields",
    "build_jacobi",
    "creator_words",
    "jacobi_pipeline",
    "pullback_moments",
    "jacobi_in_basis",
    "check_basis_covariance",
    "build_fock_fields",
    "reconstruct_moments",
]


@dataclass
class JacobiSequences:
    """Per-level Jacobi data of a state.

    ``omega_form`` and ``Un`` cover levels 0..N; ``alpha`` covers 0..N-1
    (the preservation block at level N would need moments beyond 2N).
    ``un_degenerate[n]`` is True when C_n is singular, in which case the
    alpha matrices at that level are least-squares solutions, meaningful
    only modulo ker W_n.
    """

    d: int
    N: int
    arith: Arith
    omega_form: list
    alpha: list
    Un: list
    un_rank: list
    omega_rank: list
    un_degenerate: list
    dec: OrthogonalDecomposition | None = field(default=None, repr=False)
    cap: list | None = field(default=None, repr=False)

    def basis(self, n: int):
        return enumerate_monomials(self.d, n)

    def omega_op(self, n: int) -> np.ndarray:
        """Operator matrix S_n^{-1} W_n of Omega_n on the multiset basis."""
        S = canonical_sym_gram(self.basis(n), self.arith)
        inv_diag = self.arith.zeros(S.shape)
        for i in range(S.shape[0]):
            inv_diag[i, i] = 1 / S[i, i]
        return inv_diag @ self.omega_form[n]

    def alpha_v(self, n: int, v) -> np.ndarray:
        """alpha_{v|n} = sum_j v_j Lambda_{j|n}."""
        out = self.arith.zeros(self.alpha[n][0].shape)
        for j, c in enumerate(v):
            out = out + self.alpha[n][j] * self.arith.scalar(c)
        return out


def creator_words(cap: list, dec: OrthogonalDecomposition, n: int) -> np.ndarray:
    """C_n: monic coordinates of (a+_1)^{m_1}...(a+_d)^{m_d} Phi, one column per class."""
    arith = dec.arith
    basis = dec.levels[n]
    cols = []
    for m in enumerate_monomials(dec.d, n):
        vec = arith.array([1])
        level = 0
        # rightmost creator acts first: a+_d^{m_d}, then ..., then a+_1^{m_1}
        for j in range(dec.d, 0, -1):
            for _ in range(m[j - 1]):
                vec = cap[level].aplus[j - 1] @ vec
                level += 1
        cols.append(vec)
    if not cols:
        return arith.zeros((len(basis), 0))
    return np.column_stack(cols)


def build_jacobi(dec: OrthogonalDecomposition, cap: list, m: MomentFunctional | None = None) -> JacobiSequences:
    arith = dec.arith
    d, N = dec.d, dec.N
    omega, alpha, Un, un_rank, om_rank, degen = [], [], [], [], [], []
    for n in range(N + 1):
        C = creator_words(cap, dec, n)
        G = dec.grams[n]
        W = C.T @ G @ C
        if not arith.exact:
            W = (W + W.T) / 2
        r = arith.rank(C)
        Un.append(C)
        un_rank.append(r)
        degen.append(r < C.shape[1])
        omega.append(W)
        om_rank.append(arith.rank(W))
        if n < N:
            if r == C.shape[1]:
                Cinv = arith.inv(C)
            else:
                Cinv = arith.pinv(C)
            alpha.append([Cinv @ cap[n].azero[j] @ C for j in range(d)])
    return JacobiSequences(d, N, arith, omega, alpha, Un, un_rank, om_rank, degen, dec, cap)


def jacobi_pipeline(m: MomentFunctional, N: int):
    """Run decompose -> build_cap -> build_jacobi; returns (dec, cap, jac)."""
    dec = decompose(m, N)
    cap = build_cap(dec, m)
    return dec, cap, build_jacobi(dec, cap, m)


# -- change of basis ------------------------------------------------------


def pullback_moments(m: MomentFunctional, R, D: int | None = None) -> MomentFunctional:
    """Moments of Y_j = sum_k R[k, j] X_k, i.e. of the coordinates X_{R e_j}."""
    arith = m.arith
    R = arith.convert(R)
    d = m.d
    if R.shape != (d, d):
        raise ConfigError(f"basis change must be {d}x{d}")
    if arith.rank(R) < d:
        raise SingularMatrixError("basis change matrix is singular")
    D = m.max_degree if D is None else D
    forms = [Polynomial.linear_form(R[:, j], d) for j in range(d)]
    table = {}
    for alpha in graded_monomials(d, D):
        p = Polynomial.constant(arith.one(), d)
        for j, a in enumerate(alpha):
            for _ in range(a):
                p = p * forms[j]
        table[alpha] = m(p)
    spec = MomentTable(d, table, D)
    return build_moments(spec, D, arith)


def jacobi_in_basis(m: MomentFunctional, R, N: int) -> JacobiSequences:
    """Jacobi sequences computed in the coordinates Y_j = X_{R e_j}."""
    if isinstance(m, MomentFunctional):
        source = m
    else:
        source = build_moments(m, 2 * N)
    return jacobi_pipeline(pullback_moments(source, R, 2 * N), N)[2]


def check_basis_covariance(jac_e: JacobiSequences, jac_ep: JacobiSequences, R, n: int) -> CheckReport:
    """Compare Jacobi data of the same state in coordinates X and Y = X R.

    With L = sym_lift(R^{-1}, n), i.e. R^{(x)n} written from primed to
    unprimed multiset coordinates:

        W_n       = L^T W'_n L
        Lambda'_j = L (sum_k R[k, j] Lambda_k) L^{-1}

    The alpha identity is tested modulo ker W_n: the deviation D must
    satisfy W'_n D = 0 (exactly D = 0 when W_n is nondegenerate).
    """
    arith = jac_e.arith
    R = arith.convert(R)
    L = sym_lift(arith.inv(R), n, arith)
    Linv = sym_lift(R, n, arith)
    W, Wp = jac_e.omega_form[n], jac_ep.omega_form[n]
    dW = W - L.T @ Wp @ L
    omega_dev = arith.max_abs(dW)
    scale = max(1.0, float(arith.max_abs(W)))
    ok = arith.is_zero(omega_dev, scale)
    alpha_dev = arith.zero()
    alpha_raw = arith.zero()
    if n < min(len(jac_e.alpha), len(jac_ep.alpha)):
        for j in range(jac_e.d):
            comb = jac_e.alpha_v(n, R[:, j])
            D = jac_ep.alpha[n][j] - L @ comb @ Linv
            alpha_raw = max(alpha_raw, arith.max_abs(D))
            dev = arith.max_abs(Wp @ D)
            alpha_dev = max(alpha_dev, dev)
            ok = ok and arith.is_zero(dev, scale * max(1.0, float(arith.max_abs(comb))))
    return CheckReport(
        "basis_covariance",
        ok,
        max(omega_dev, alpha_dev),
        {"level": n, "omega_dev": omega_dev, "alpha_dev_mod_ker": alpha_dev, "alpha_dev_raw": alpha_raw},
    )


# -- Fock space fields and moment reconstruction --------------------------


@dataclass
class FockFields:
    """Creation/annihilation fields on the symmetric interacting Fock space.

    ``plus[n][j-1]`` maps level n to n+1 (xi -> e_j (x)^ xi, independent of
    the state); ``minus[n][j-1]`` maps level n to n-1 and is the adjoint of
    ``plus[n-1][j-1]`` for the Omega forms.  ``minus[0]`` is empty.
    """

    plus: list
    minus: list


def build_fock_fields(jac: JacobiSequences) -> FockFields:
    arith = jac.arith
    plus, minus = [], [[]]
    for n in range(jac.N):
        plus.append([shift_matrix(jac.d, n, j, arith) for j in range(1, jac.d + 1)])
    for n in range(1, jac.N + 1):
        # minimum-norm solution of W_{n-1} F = (F+_{n-1})^T W_n
        Wlow = jac.omega_form[n - 1]
        pinv = arith.pinv(Wlow, scale=max(1.0, float(arith.max_abs(Wlow))))
        minus.append([pinv @ plus[n - 1][j].T @ jac.omega_form[n] for j in range(jac.d)])
    return FockFields(plus, minus)


def reconstruct_moments(jac: JacobiSequences, word, fields: FockFields | None = None):
    """phi(X_{j_1} ... X_{j_k}) from the Jacobi data alone.

    Applies F+_j + Lambda_j + F-_j right to left to the vacuum and returns the
    vacuum coordinate.  Components that cannot return to level 0 within the
    remaining letters are dropped, so words of length <= N only touch the
    data that ``jac`` holds.
    """
    word = list(word)
    k = len(word)
    if k > jac.N:
        raise ConfigError(f"word of length {k} exceeds level {jac.N}")
    for j in word:
        if not 1 <= j <= jac.d:
            raise ConfigError(f"letter {j} outside 1..{jac.d}")
    fields = fields or build_fock_fields(jac)
    arith = jac.arith
    state = {0: arith.array([1])}
    for step, j in enumerate(reversed(word)):
        remaining = k - step - 1
        new = {}

        def add(level, vec):
            if level <= remaining:
                new[level] = new[level] + vec if level in new else vec

        for level, vec in state.items():
            add(level + 1, fields.plus[level][j - 1] @ vec)
            add(level, jac.alpha[level][j - 1] @ vec)
            if level > 0:
                add(level - 1, fields.minus[level][j - 1] @ vec)
        state = new
    return state[0][0] if 0 in state else arith.zero()

