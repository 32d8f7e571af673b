"""Classical one-dimensional recurrences and closed-form product Jacobi data.

Nothing here touches the multivariate pipeline: ``stieltjes`` works on a
plain list of power moments with its own polynomial arithmetic, so it can
serve as an oracle for d = 1 and for product measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import Arith, get_arith
from .errors import MomentError
from .polyalg import enumerate_monomials

__all__ = ["Recurrence1D", "stieltjes", "product_jacobi_closed_form"]


@dataclass(frozen=True)
class Recurrence1D:
    """Monic three-term recurrence data of a measure on R.

    ``beta_sq[n]`` is beta_n^2 = <p_{n+1}, p_{n+1}> / <p_n, p_n>; the squared
    values stay exact in rational mode.  ``termination`` is the first n with
    <p_n, p_n> = 0, or N when no norm vanishes.  Entries of ``alphas`` at
    indices >= termination are set to 0 by convention and listed in
    ``flagged``.
    """

    alphas: tuple
    beta_sq: tuple
    squared_norms: tuple
    termination: int
    flagged: tuple = ()

    @property
    def betas(self) -> tuple:
        """beta_n as floats (square roots are not rational in general)."""
        return tuple(math.sqrt(float(b)) for b in self.beta_sq)

    def __len__(self) -> int:
        return len(self.alphas)


def _pmul_x(p):
    return [0 * p[0]] + list(p)


def _axpy(a, x, y):
    # a*x + y on coefficient lists (lowest degree first)
    n = max(len(x), len(y))
    x = list(x) + [0 * a] * (n - len(x))
    y = list(y) + [0 * a] * (n - len(y))
    return [a * u + v for u, v in zip(x, y)]


def stieltjes(moments, N: int, arith: Arith | None = None) -> Recurrence1D:
    """Recurrence coefficients alpha_0..alpha_{N-1}, beta_0^2..beta_{N-1}^2.

    Runs p_{n+1} = (x - a_n) p_n - b_n p_{n-1} with
    a_n = <x p_n, p_n>/<p_n, p_n> and b_n = <p_n, p_n>/<p_{n-1}, p_{n-1}>,
    evaluating inner products directly against the moment list.
    """
    arith = arith or get_arith()
    mom = [arith.scalar(v) for v in moments]
    if len(mom) < 2 * N + 1:
        raise MomentError(f"need moments up to degree {2 * N}, got {len(mom) - 1}")
    if mom[0] != 1:
        raise MomentError("moments[0] must be 1")
    zero, one = arith.zero(), arith.one()

    def ip(p, q):
        s = zero
        for i, a in enumerate(p):
            if a == 0:
                continue
            for k, b in enumerate(q):
                s = s + a * b * mom[i + k]
        return s

    scale = max(1.0, max(float(abs(v)) for v in mom[: 2 * N + 1]))
    p_prev, p = [zero], [one]
    norms = [ip(p, p)]
    alphas, beta_sq, flagged = [], [], []
    term = None
    for n in range(N):
        nn = norms[n]
        if term is None and arith.is_zero(nn, scale):
            term = n
        if term is not None:
            alphas.append(zero)
            beta_sq.append(zero)
            flagged.append(n)
            norms.append(zero)
            continue
        xp = _pmul_x(p)
        a = ip(xp, p) / nn
        b = nn / norms[n - 1] if n > 0 else zero
        nxt = _axpy(-b, p_prev, _axpy(-a, p + [zero], xp))
        nrm = ip(nxt, nxt)
        if nrm < 0 and not arith.is_zero(nrm, scale):
            raise MomentError(f"negative squared norm at degree {n + 1}: invalid moments")
        if arith.is_zero(nrm, scale):
            nrm = zero
        alphas.append(a)
        beta_sq.append(nrm / nn)
        norms.append(nrm)
        p_prev, p = p, nxt
    if term is None and arith.is_zero(norms[N], scale):
        term = N
    return Recurrence1D(
        tuple(alphas),
        tuple(beta_sq),
        tuple(norms),
        N if term is None else term,
        tuple(flagged),
    )


def product_jacobi_closed_form(recs, n: int, arith: Arith | None = None):
    """Diagonal Jacobi data of a product measure at level ``n``.

    Returns ``(W, [Lambda_1, ..., Lambda_d])`` on the multiset basis: the
    class with multiplicities (m_1, ..., m_d) gets
    W = prod_l prod_{k<m_l} beta_{l,k}^2 and Lambda_l = alpha_{l, m_l}.
    When some recurrence is too short for alpha_{l, n}, the Lambda list is
    ``None``.
    """
    arith = arith or get_arith()
    d = len(recs)
    basis = enumerate_monomials(d, n)
    W = arith.zeros((len(basis), len(basis)))
    have_alpha = all(len(r.alphas) > n for r in recs)
    lams = [arith.zeros((len(basis), len(basis))) for _ in range(d)]
    for i, m in enumerate(basis):
        w = arith.one()
        for l, ml in enumerate(m):
            for k in range(ml):
                w = w * arith.scalar(recs[l].beta_sq[k])
            if have_alpha:
                lams[l][i, i] = arith.scalar(recs[l].alphas[ml])
        W[i, i] = w
    return W, (lams if have_alpha else None)


def is_diagonal(a, arith: Arith) -> bool:
    a = np.asarray(a)
    off = a - np.diag(np.diag(a))
    return arith.is_zero(arith.max_abs(off), max(1.0, float(arith.max_abs(a))))
