"""Measures on R^d given by their mixed moments, and the induced pre-scalar product.

``inner`` is deliberately naive: it multiplies the two polynomials and sums
coefficients against the moment table.  The rest of the package computes
inner products through Hankel matrices; this function is the independent
oracle those paths are tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .arith import Arith, get_arith
from .errors import MomentError
from .polyalg import Polynomial, graded_monomials, poly_mul

__all__ = [
    "MomentError",
    "Gaussian",
    "Uniform",
    "Exponential",
    "TwoPoint",
    "MomentList",
    "Product",
    "MomentTable",
    "Atomic",
    "MeasureSpec",
    "FactorSpec",
    "MomentFunctional",
    "build_moments",
    "factor_moments",
    "inner",
]


# -- one-dimensional factors ----------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    mean: object = 0
    variance: object = 1


@dataclass(frozen=True)
class Uniform:
    a: object = -1
    b: object = 1


@dataclass(frozen=True)
class Exponential:
    rate: object = 1


@dataclass(frozen=True)
class TwoPoint:
    """Mass ``p`` at ``x1`` and ``1 - p`` at ``x2``."""

    x1: object = -1
    x2: object = 1
    p: object = "1/2"


@dataclass(frozen=True)
class MomentList:
    """Explicit 1-D moments ``[1, m_1, m_2, ...]``."""

    moments: tuple = (1,)


FactorSpec = Union[Gaussian, Uniform, Exponential, TwoPoint, MomentList]


def factor_moments(spec: FactorSpec, D: int, arith: Arith | None = None) -> list:
    """Power moments 0..D of a one-dimensional factor, by closed form."""
    arith = arith or get_arith()
    s = arith.scalar
    if isinstance(spec, Gaussian):
        mu, var = s(spec.mean), s(spec.variance)
        if var <= 0:
            raise MomentError("Gaussian variance must be positive")
        # central moments var^m (2m-1)!!, then the binomial shift by the mean
        central = [s(0)] * (D + 1)
        for k in range(0, D + 1, 2):
            central[k] = var ** (k // 2) * s(_double_factorial(k - 1))
        return [
            sum((s(math.comb(k, i)) * mu ** (k - i) * central[i] for i in range(k + 1)), s(0))
            for k in range(D + 1)
        ]
    if isinstance(spec, Uniform):
        a, b = s(spec.a), s(spec.b)
        if not a < b:
            raise MomentError("Uniform needs a < b")
        return [(b ** (m + 1) - a ** (m + 1)) / ((b - a) * (m + 1)) for m in range(D + 1)]
    if isinstance(spec, Exponential):
        lam = s(spec.rate)
        if lam <= 0:
            raise MomentError("Exponential rate must be positive")
        return [s(math.factorial(m)) / lam**m for m in range(D + 1)]
    if isinstance(spec, TwoPoint):
        x1, x2, p = s(spec.x1), s(spec.x2), s(spec.p)
        if not 0 < p < 1:
            raise MomentError("TwoPoint needs 0 < p < 1")
        return [p * x1**m + (1 - p) * x2**m for m in range(D + 1)]
    if isinstance(spec, MomentList):
        ms = [s(v) for v in spec.moments]
        if not ms or ms[0] != 1:
            raise MomentError("MomentList must start with 1")
        if len(ms) < D + 1:
            raise MomentError(f"MomentList has degree {len(ms) - 1}, need {D}")
        return ms[: D + 1]
    raise TypeError(f"unknown factor {spec!r}")


def _double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


# -- measures on R^d ------------------------------------------------------


@dataclass(frozen=True)
class Product:
    factors: tuple

    @property
    def dimension(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class MomentTable:
    """Mixed moments keyed by exponent tuple, complete up to ``max_degree``."""

    dimension: int
    moments: dict = field(hash=False)
    max_degree: int = 0


@dataclass(frozen=True)
class Atomic:
    """Finitely supported measure: ``atoms`` is a sequence of ``(point, weight)``."""

    atoms: tuple

    @property
    def dimension(self) -> int:
        return len(self.atoms[0][0])


MeasureSpec = Union[Product, MomentTable, Atomic]


class MomentFunctional:
    """The state phi on polynomials, given as a table of mixed moments.

    ``m[alpha]`` returns the moment of exponent tuple ``alpha``; every moment
    of total degree <= ``max_degree`` is available.  The table is filled
    eagerly and never mutated.
    """

    def __init__(self, d: int, max_degree: int, table: dict, arith: Arith, spec=None):
        self.d = d
        self.max_degree = max_degree
        self.arith = arith
        self.spec = spec
        self._table = table

    def __getitem__(self, alpha):
        alpha = tuple(alpha)
        if sum(alpha) > self.max_degree:
            raise MomentError(
                f"moment {alpha} has degree {sum(alpha)} > available {self.max_degree}"
            )
        return self._table[alpha]

    def items(self):
        return self._table.items()

    def hankel(self, rows, cols) -> np.ndarray:
        """Matrix of phi(X^r X^c) for exponent lists ``rows`` and ``cols``."""
        out = self.arith.zeros((len(rows), len(cols)))
        for i, r in enumerate(rows):
            for k, c in enumerate(cols):
                out[i, k] = self[tuple(a + b for a, b in zip(r, c))]
        return out

    def __call__(self, p: Polynomial):
        """Apply the state to a polynomial."""
        if p.d != self.d:
            raise ValueError("dimension mismatch")
        return sum((c * self[k] for k, c in p.coeffs.items()), self.arith.zero())

    def check_psd(self, max_level: int):
        """Raise ``MomentError`` naming the offending leading minor when the
        moment matrix on monomials of degree <= max_level is not PSD."""
        mons = graded_monomials(self.d, max_level)
        H = self.hankel(mons, mons)
        scale = max(1.0, float(self.arith.max_abs(H)))
        bad = self.arith.psd_violation(H, scale=scale)
        if bad is not None:
            raise MomentError(
                "moment matrix is not positive semidefinite: "
                f"leading Gram minor of order {bad + 1} (monomial {mons[bad]}) fails"
            )

    def __repr__(self):
        return f"<MomentFunctional d={self.d} D={self.max_degree} {self.arith.name}>"


def build_moments(spec: MeasureSpec, D: int, arith: Arith | None = None) -> MomentFunctional:
    """Tabulate every mixed moment of total degree <= ``D``."""
    arith = arith or get_arith()
    s = arith.scalar
    if isinstance(spec, Product):
        d = spec.dimension
        per = [factor_moments(f, D, arith) for f in spec.factors]
        table = {}
        for alpha in graded_monomials(d, D):
            v = s(1)
            for k, a in enumerate(alpha):
                v = v * per[k][a]
            table[alpha] = v
    elif isinstance(spec, Atomic):
        d = spec.dimension
        atoms = [([s(x) for x in pt], s(w)) for pt, w in spec.atoms]
        if any(len(pt) != d for pt, _ in atoms):
            raise MomentError("atoms of mixed dimension")
        if any(w <= 0 for _, w in atoms):
            raise MomentError("atom weights must be positive")
        total = sum((w for _, w in atoms), s(0))
        if not arith.is_zero(total - 1):
            raise MomentError(f"atom weights sum to {total}, not 1")
        table = {}
        for alpha in graded_monomials(d, D):
            v = s(0)
            for pt, w in atoms:
                term = w
                for x, a in zip(pt, alpha):
                    term = term * x**a
                v = v + term
            table[alpha] = v
    elif isinstance(spec, MomentTable):
        d = spec.dimension
        if spec.max_degree < D:
            raise MomentError(f"moment table covers degree {spec.max_degree}, need {D}")
        table = {}
        for alpha in graded_monomials(d, D):
            if alpha not in spec.moments:
                raise MomentError(f"moment table is missing {alpha}")
            table[alpha] = s(spec.moments[alpha])
        if table[(0,) * d] != 1:
            raise MomentError("moment table must have mu[0] = 1")
    else:
        raise TypeError(f"unknown measure spec {spec!r}")
    return MomentFunctional(d, D, table, arith, spec)


def inner(p: Polynomial, q: Polynomial, m: MomentFunctional):
    """<p, q> = phi(p q), by direct expansion of the product."""
    if p.degree + q.degree > m.max_degree:
        raise MomentError(
            f"need moments of degree {p.degree + q.degree}, have {m.max_degree}"
        )
    return m(poly_mul(p, q))
