"""Creation, preservation and annihilation (CAP) matrices of the coordinates.

All matrices are in monic coordinates: the columns of ``Aplus[j]`` at level n
are the level-(n+1) coordinates of X_j q_M for the level-n monic basis
elements q_M, and similarly for ``Azero`` (level n) and ``Aminus`` (level
n-1).  Gram matrices are carried separately by the decomposition, so the
adjoint relations read ``G_n Aminus@(n+1) = Aplus@n^T G_{n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CheckReport, ConfigError, InvariantError
from .moments import MomentFunctional, inner
from .ortho import OrthogonalDecomposition
from .polyalg import Polynomial, poly_mul

__all__ = [
    "CapLevel",
    "build_cap",
    "multiply_by_variable",
    "check_quantum_decomposition",
    "check_creator_injectivity",
]


@dataclass
class CapLevel:
    """CAP matrices at one level; lists are indexed by ``j - 1``."""

    level: int
    aplus: list
    azero: list
    aminus: list
    arith: object = None
    null_residue: object = 0

    @property
    def d(self) -> int:
        return len(self.aplus)

    def combine(self, which: str, v) -> np.ndarray:
        """a^eps_v = sum_j v_j a^eps_j for ``which`` in {'+', '0', '-'}."""
        mats = {"+": self.aplus, "0": self.azero, "-": self.aminus}[which]
        out = mats[0] * v[0]
        for j in range(1, len(mats)):
            out = out + mats[j] * v[j]
        return out


def multiply_by_variable(vec, monomials, j: int, arith) -> np.ndarray:
    """Dense coefficient vector of X_j p; ``j`` is 1-based.

    Terms pushed beyond the coordinate range raise ``ValueError``.
    """
    pos = {m: i for i, m in enumerate(monomials)}
    out = arith.zeros(len(monomials))
    for i, mono in enumerate(monomials):
        c = vec[i]
        if c == 0:
            continue
        t = list(mono)
        t[j - 1] += 1
        t = tuple(t)
        if t not in pos:
            raise ValueError(f"X_{j} * {mono} leaves the coordinate range")
        out[pos[t]] = c
    return out


def build_cap(dec: OrthogonalDecomposition, m: MomentFunctional | None = None) -> list:
    """CAP matrices for levels 0..N-1.

    Each product X_j q is projected onto the monic bases and the components
    at levels n+1, n, n-1 are kept.  For a nondegenerate state every other
    component is exactly zero (the symmetric Jacobi relation).  For a
    degenerate state the monic representatives are only fixed modulo null
    vectors, and stray components may appear; they must have zero pre-norm
    (the relation then holds in the pre-Hilbert quotient) and their size is
    recorded in ``CapLevel.null_residue``.  A stray component with nonzero
    pre-norm raises ``InvariantError``.
    """
    arith = dec.arith
    d, N = dec.d, dec.N
    out = []
    for n in range(N):
        blk = dec.block(n)
        dim = blk.shape[1]
        aplus, azero, aminus = [], [], []
        residue = arith.zero()
        for j in range(1, d + 1):
            cols = [[] for _ in range(N + 1)]
            for i in range(dim):
                xq = multiply_by_variable(blk[:, i], dec.monomials, j, arith)
                coords = dec.project_vector(xq)
                scale = max(1.0, float(arith.max_abs(xq)))
                for k in range(N + 1):
                    if k in (n - 1, n, n + 1):
                        cols[k].append(coords[k])
                        continue
                    size = arith.max_abs(coords[k])
                    if arith.is_zero(size, scale):
                        continue
                    if not arith.is_zero(arith.max_abs(dec.grams[k] @ coords[k]), scale):
                        raise InvariantError(
                            f"X_{j} q_{dec.levels[n][i]} has a level-{k} component of "
                            "nonzero pre-norm; the symmetric Jacobi relation fails"
                        )
                    residue = max(residue, size)

            def stack(k, rows):
                if k < 0:
                    return arith.zeros((0, dim))
                return np.column_stack(cols[k]) if dim else arith.zeros((rows, 0))

            aplus.append(stack(n + 1, len(dec.levels[n + 1])))
            azero.append(stack(n, len(dec.levels[n])))
            aminus.append(stack(n - 1, len(dec.levels[n - 1]) if n else 0))
        out.append(CapLevel(n, aplus, azero, aminus, arith, residue))
    return out


def check_quantum_decomposition(
    cap: list, dec: OrthogonalDecomposition, m=None, *, modulo_null: bool = False
) -> CheckReport:
    """X_j q == a+_j q + a0_j q + a-_j q, rebuilt as polynomials, for every
    monic basis element below the top level.

    By default the residual polynomial must vanish coefficient-wise.  With
    ``modulo_null`` it only needs zero pre-norm (computed with the moment
    oracle), which is the form that survives degenerate states.
    """
    arith = dec.arith
    m = m or dec.m
    worst = arith.zero()
    worst_norm = arith.zero()
    failures = []
    for lvl in cap:
        n = lvl.level
        for j in range(1, dec.d + 1):
            xj = Polynomial.variable(j, dec.d, arith.one())
            for i, q in enumerate(dec.monic[n]):
                lhs = poly_mul(xj, q)
                rhs = dec.combine(n + 1, lvl.aplus[j - 1][:, i]) + dec.combine(n, lvl.azero[j - 1][:, i])
                if n > 0:
                    rhs = rhs + dec.combine(n - 1, lvl.aminus[j - 1][:, i])
                resid = lhs - rhs
                diff = resid.max_abs_coeff()
                worst = max(worst, diff)
                scale = max(1.0, float(lhs.max_abs_coeff()))
                if modulo_null:
                    norm = inner(resid, resid, m) if not resid.is_zero() else arith.zero()
                    worst_norm = max(worst_norm, abs(norm))
                    ok = arith.is_zero(norm, scale * scale)
                else:
                    ok = arith.is_zero(diff, scale)
                if not ok:
                    failures.append((j, dec.levels[n][i]))
    details = {"failures": failures[:10]}
    if modulo_null:
        details["max_residual_prenorm"] = worst_norm
    return CheckReport("quantum_decomposition", not failures, worst, details)


def check_creator_injectivity(cap: list, v, n: int, arith=None):
    """Column rank of a+_v at level n; returns ``(injective, rank)``.

    The statement is about coefficient vectors, so the rank is the plain
    (exact or singular-value) rank of the matrix, independent of the Gram.
    """
    lvl = cap[n]
    arith = arith or lvl.arith
    v = [arith.scalar(x) for x in v]
    if len(v) != lvl.d:
        raise ConfigError(f"vector has length {len(v)}, need {lvl.d}")
    if all(arith.is_zero(x) for x in v):
        raise ConfigError("creator injectivity needs v != 0")
    a = lvl.combine("+", v)
    r = arith.rank(a)
    return r == a.shape[1], r

