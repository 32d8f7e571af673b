"""Named measures used by the test suite, the demos and the CLI."""

from __future__ import annotations

from .moments import (
    Atomic,
    Exponential,
    Gaussian,
    MomentTable,
    Product,
    TwoPoint,
    Uniform,
    build_moments,
)
from .arith import RATIONAL

GAUSSIAN = Gaussian(0, 1)
UNIFORM = Uniform(-1, 1)
EXPONENTIAL = Exponential(1)
TWO_POINT = TwoPoint(-1, 1, "1/2")

SHIPPED = {
    "gaussian": Product((GAUSSIAN,)),
    "uniform": Product((UNIFORM,)),
    "exponential": Product((EXPONENTIAL,)),
    "two_point": Product((TWO_POINT,)),
    "gaussian2": Product((GAUSSIAN, GAUSSIAN)),
    "gaussian_uniform": Product((GAUSSIAN, UNIFORM)),
    "uniform_exponential_gaussian": Product((UNIFORM, EXPONENTIAL, GAUSSIAN)),
    "two_point2": Product((TWO_POINT, TWO_POINT)),
}

# a finitely supported, non-product measure: degenerate from level 2 on
TRIANGLE = Atomic(((("0", "1"), "1/3"), (("2", "-1"), "1/3"), (("1", "1"), "1/3")))


def correlated_gaussian(max_degree: int = 12) -> MomentTable:
    """Moments of (X_1, X_1 + X_2) for independent standard Gaussians."""
    from .fock import pullback_moments

    base = build_moments(SHIPPED["gaussian2"], max_degree, RATIONAL)
    m = pullback_moments(base, [[1, 1], [0, 1]], max_degree)
    return MomentTable(2, dict(m.items()), max_degree)


def shipped_specs(include_non_product: bool = False) -> dict:
    out = dict(SHIPPED)
    if include_non_product:
        out["correlated_gaussian"] = correlated_gaussian()
    return out
