"""Graded orthogonal decomposition of the polynomial algebra.

For every monomial M of degree n the monic representative is

    q_M = s_M - (projection of s_M onto the monic bases of levels 0..n-1),

computed level by level.  The seed s_M is X_j q_{M - e_j}, with j the first
coordinate where M is nonzero (``representatives="recursive"``, the
default), or the bare monomial M (``"monomial"``).  Both seeds equal M up to
lower-degree terms, so both yield a monic q_M orthogonal to all lower
levels, and for a nondegenerate state they coincide.  When some level Gram
is singular the normal equations have many solutions; the recursive seed
picks the one for which X_j q stays inside levels n-1..n+1 in more cases
(always for d = 1 and for the shipped product measures).

Levels are mutually orthogonal, so the projection splits into one
normal-equation solve per lower level; degenerate level Grams are handled
with the Moore-Penrose pseudo-inverse (exact in rational mode).  Polynomials are handled internally as dense coefficient vectors over
the graded monomial list, and inner products go through the Hankel matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .arith import Arith
from .errors import MomentError
from .moments import MomentFunctional
from .polyalg import Polynomial, SymBasis, enumerate_monomials

__all__ = ["OrthogonalDecomposition", "decompose", "project_coeffs"]


@dataclass
class OrthogonalDecomposition:
    """Monic orthogonal bases q_M for levels 0..N and their Gram matrices.

    Attributes
    ----------
    monomials : list
        Graded monomial list used for the dense coordinate vectors.
    Q : ndarray
        Column ``i`` holds the coefficients of the monic polynomial whose
        leading monomial is ``monomials[i]``.  Unit upper triangular.
    levels : list of SymBasis
        Level bases (the order of the columns of each Gram).
    grams : list of ndarray
        ``grams[n][i, k] = <q_{M_i}, q_{M_k}>`` for level-n monomials.
    ranks : list of int
    """

    m: MomentFunctional
    N: int
    monomials: list
    Q: np.ndarray
    levels: list
    grams: list
    ranks: list

    @property
    def arith(self) -> Arith:
        return self.m.arith

    @property
    def d(self) -> int:
        return self.m.d

    @cached_property
    def _pos(self) -> dict:
        return {mono: i for i, mono in enumerate(self.monomials)}

    def columns(self, n: int) -> list:
        return [self._pos[mono] for mono in self.levels[n]]

    def block(self, n: int) -> np.ndarray:
        """Dense coefficient columns of the level-n monic basis."""
        return self.Q[:, self.columns(n)]

    @cached_property
    def monic(self) -> list:
        """``monic[n][i]`` is the Polynomial q_M for ``levels[n][i]``."""
        out = []
        for n in range(self.N + 1):
            blk = self.block(n)
            out.append(
                [Polynomial.from_vector(blk[:, i], self.monomials, self.d) for i in range(blk.shape[1])]
            )
        return out

    def q(self, mono) -> Polynomial:
        mono = tuple(mono)
        n = sum(mono)
        return self.monic[n][self.levels[n].index(mono)]

    def project_vector(self, vec) -> list:
        """Per-level monic coordinates of a dense coefficient vector.

        Back substitution on the unit triangular ``Q``: the top-degree
        coefficients of the residual are the level-n coordinates.
        """
        r = np.array(vec, dtype=self.Q.dtype, copy=True)
        coords = [None] * (self.N + 1)
        for n in range(self.N, -1, -1):
            cols = self.columns(n)
            c = r[cols].copy()
            coords[n] = c
            r = r - self.Q[:, cols] @ c
        return coords

    def project_coeffs(self, p: Polynomial) -> list:
        return project_coeffs(p, self)

    def to_vector(self, p: Polynomial) -> np.ndarray:
        return p.to_vector(self.monomials, self.arith)

    def combine(self, n: int, coords) -> Polynomial:
        """Polynomial sum_i coords[i] q_{M_i} over the level-n basis."""
        vec = self.block(n) @ np.asarray(coords, dtype=self.Q.dtype)
        return Polynomial.from_vector(vec, self.monomials, self.d)


def _level_scale(m: MomentFunctional, level: SymBasis) -> float:
    # ||q_M||^2 <= phi(M^2), so the raw second moments bound the level Gram
    return max(1.0, max(float(abs(m[tuple(2 * e for e in mono)])) for mono in level))


def decompose(
    m: MomentFunctional, N: int, *, order=None, representatives: str = "recursive"
) -> OrthogonalDecomposition:
    """Monic Gram-Schmidt by total degree up to level ``N``.

    ``order`` optionally permutes the monomials inside each level (a callable
    taking and returning a list); the monic representatives do not depend on
    it.  ``representatives`` selects the seed, see the module docstring.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if representatives not in ("recursive", "monomial"):
        raise ValueError(f"unknown representatives {representatives!r}")
    if m.max_degree < 2 * N:
        raise MomentError(f"level {N} needs moments of degree {2 * N}, have {m.max_degree}")
    arith = m.arith
    m.check_psd(N)

    levels = []
    for n in range(N + 1):
        basis = enumerate_monomials(m.d, n)
        if order is not None:
            basis = SymBasis(m.d, n, tuple(order(list(basis.entries))))
        levels.append(basis)
    monomials = [mono for lvl in levels for mono in lvl]
    pos = {mono: i for i, mono in enumerate(monomials)}
    size = len(monomials)
    H = m.hankel(monomials, monomials)

    Q = arith.zeros((size, size))
    grams, ranks, pinvs, blocks = [], [], [], []
    top = []  # number of monomials of degree <= k
    for n, level in enumerate(levels):
        top.append((top[-1] if top else 0) + len(level))
        cols = [pos[mono] for mono in level]
        s = top[-1]
        R = arith.zeros((s, len(cols)))
        for i, (c, mono) in enumerate(zip(cols, level)):
            if n == 0 or representatives == "monomial":
                R[c, i] = arith.one()
                continue
            j = next(k for k, e in enumerate(mono) if e)
            prev = list(mono)
            prev[j] -= 1
            src = Q[: top[n - 1], pos[tuple(prev)]]
            # X_j q_{M - e_j}; the source has degree n - 1, so nothing leaves the range
            for r in np.nonzero(src != 0)[0]:
                t = list(monomials[r])
                t[j] += 1
                R[pos[tuple(t)], i] = src[r]
        # lower levels are mutually orthogonal, so one classical sweep is
        # exact; float mode re-orthogonalizes once more (modified sweep)
        HR = H[:, :s] @ R
        for k in range(n):
            sk = top[k]
            Qk = blocks[k]
            R[:sk] = R[:sk] - Qk @ (pinvs[k] @ (Qk.T @ HR[:sk]))
        if not arith.exact:
            for k in range(n):
                sk = top[k]
                Qk = blocks[k]
                R[:sk] = R[:sk] - Qk @ (pinvs[k] @ (Qk.T @ (H[:sk, :s] @ R)))
        Q[:s, cols] = R
        G = R.T @ H[:s, :s] @ R
        if not arith.exact:
            G = (G + G.T) / 2
        scale = _level_scale(m, level)
        bad = arith.psd_violation(G, scale=scale)
        if bad is not None:
            raise MomentError(f"level-{n} Gram is not PSD at {level[bad]}")
        blocks.append(R)  # rows beyond degree n are zero and not stored
        grams.append(G)
        ranks.append(arith.rank(G) if arith.exact else arith.rank(G, scale=scale))
        pinvs.append(arith.pinv(G) if arith.exact else arith.pinv(G, scale=scale))
    return OrthogonalDecomposition(m, N, monomials, Q, levels, grams, ranks)


def project_coeffs(p: Polynomial, dec: OrthogonalDecomposition) -> list:
    """Coordinates of ``p`` in the monic bases, one vector per level 0..N."""
    if p.degree > dec.N:
        raise ValueError(f"degree {p.degree} exceeds decomposition level {dec.N}")
    return dec.project_vector(dec.to_vector(p))
