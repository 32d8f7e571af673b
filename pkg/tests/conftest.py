import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from favard.arith import F64, RATIONAL
from favard.polyalg import Polynomial

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

small_rationals = st.builds(
    lambda p, q: RATIONAL.scalar(Fraction(p, q)), st.integers(-6, 6), st.integers(1, 4)
)


@st.composite
def polynomials(draw, d=2, max_degree=2, max_terms=4):
    terms = draw(
        st.lists(
            st.tuples(
                st.tuples(*[st.integers(0, max_degree)] * d).filter(lambda e: sum(e) <= max_degree),
                small_rationals,
            ),
            max_size=max_terms,
        )
    )
    coeffs = {}
    for e, c in terms:
        coeffs[e] = coeffs.get(e, 0) + c
    return Polynomial(d, coeffs)


@st.composite
def invertible_matrices(draw, d):
    entries = st.builds(lambda p, q: Fraction(p, q), st.integers(-3, 3), st.integers(1, 2))
    R = draw(st.lists(st.lists(entries, min_size=d, max_size=d), min_size=d, max_size=d))
    a = RATIONAL.array(R)
    from hypothesis import assume

    assume(RATIONAL.rank(a) == d)
    return a


def words(d, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(range(1, d + 1), repeat=k)


@pytest.fixture(params=["rational", "f64"])
def arith(request):
    return RATIONAL if request.param == "rational" else F64


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
