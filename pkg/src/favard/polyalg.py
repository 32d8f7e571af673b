"""Polynomials in d commuting indeterminates and symmetric tensor powers of R^d.

Monomials are identified with exponent tuples ``(n_1, ..., n_d)``.  The same
tuples label the multiset basis of the symmetric power: the class of an index
word ``(j_1, ..., j_n)`` is its multiplicity vector.  Under the algebra
isomorphism ``e_{j_1} (x) ... (x) e_{j_n}  <->  z_{j_1} ... z_{j_n}`` the
symmetric power of degree n becomes the space of homogeneous polynomials of
degree n, which is how lifts of linear maps are computed here.

Ordering contract: graded by total degree, and within a degree by
lexicographically *decreasing* exponent vector, e.g. for d=3, n=2::

    (2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import Arith, SingularMatrixError, get_arith

MultiIndex = tuple  # tuple[int, ...]

__all__ = [
    "MultiIndex",
    "SymBasis",
    "Polynomial",
    "enumerate_monomials",
    "graded_monomials",
    "sym_dim",
    "poly_mul",
    "canonical_sym_gram",
    "sym_lift",
    "shift_matrix",
    "word_to_index",
]


def sym_dim(d: int, n: int) -> int:
    """Dimension of the n-th symmetric power of R^d."""
    if n < 0:
        return 0
    return math.comb(n + d - 1, d - 1)


@lru_cache(maxsize=None)
def _monomials(d: int, n: int) -> tuple:
    out = []
    for word in itertools.combinations_with_replacement(range(d), n):
        m = [0] * d
        for j in word:
            m[j] += 1
        out.append(tuple(m))
    out.sort(reverse=True)
    return tuple(out)


@dataclass(frozen=True)
class SymBasis:
    """Ordered multiset basis of the n-th symmetric power of R^d."""

    d: int
    level: int
    entries: tuple

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def index(self, m) -> int:
        return self.position[tuple(m)]

    @property
    def position(self) -> dict:
        return _positions(self.entries)


@lru_cache(maxsize=None)
def _positions(entries):
    return {m: i for i, m in enumerate(entries)}


def enumerate_monomials(d: int, n: int) -> SymBasis:
    """All exponent vectors of total degree ``n`` in ``d`` variables.

    >>> enumerate_monomials(3, 2).entries
    ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    """
    if d < 1 or n < 0:
        raise ValueError(f"need d >= 1 and n >= 0, got d={d}, n={n}")
    return SymBasis(d, n, _monomials(d, n))


def graded_monomials(d: int, max_degree: int) -> list:
    """Exponent vectors of degree <= max_degree in the graded order."""
    out = []
    for n in range(max_degree + 1):
        out.extend(_monomials(d, n))
    return out


def word_to_index(word, d: int) -> tuple:
    """Multiplicity vector of an index word with letters in 1..d."""
    m = [0] * d
    for j in word:
        if not 1 <= j <= d:
            raise ValueError(f"letter {j} outside 1..{d}")
        m[j - 1] += 1
    return tuple(m)


class Polynomial:
    """Sparse polynomial: a map from exponent tuples to nonzero coefficients.

    Instances are treated as immutable.  Arithmetic between polynomials of
    different dimension raises ``ValueError``.
    """

    __slots__ = ("d", "coeffs")

    def __init__(self, d: int, coeffs=None):
        self.d = int(d)
        clean = {}
        for k, v in (coeffs or {}).items():
            k = tuple(int(e) for e in k)
            if len(k) != self.d or min(k, default=0) < 0:
                raise ValueError(f"bad exponent {k} for d={self.d}")
            if v != 0:
                clean[k] = v
        self.coeffs = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, d: int) -> "Polynomial":
        return cls(d, {(0,) * d: c})

    @classmethod
    def monomial(cls, exps, coeff=1) -> "Polynomial":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    @classmethod
    def variable(cls, j: int, d: int, coeff=1) -> "Polynomial":
        """The coordinate X_j, with 1-based ``j``."""
        e = [0] * d
        e[j - 1] = 1
        return cls(d, {tuple(e): coeff})

    @classmethod
    def linear_form(cls, v, d: int | None = None) -> "Polynomial":
        """X_v = sum_j v_j X_j."""
        d = len(v) if d is None else d
        out = {}
        for j, c in enumerate(v):
            e = [0] * d
            e[j] = 1
            out[tuple(e)] = c
        return cls(d, out)

    @classmethod
    def from_vector(cls, vec, monomials, d: int) -> "Polynomial":
        return cls(d, {m: c for m, c in zip(monomials, vec)})

    # -- queries ----------------------------------------------------------

    @property
    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(sum(k) for k in self.coeffs)

    def __getitem__(self, exps):
        return self.coeffs.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_part(self) -> "Polynomial":
        deg = self.degree
        return Polynomial(self.d, {k: v for k, v in self.coeffs.items() if sum(k) == deg})

    def to_vector(self, monomials, arith: Arith | None = None) -> np.ndarray:
        arith = arith or get_arith()
        vec = arith.zeros(len(monomials))
        pos = {m: i for i, m in enumerate(monomials)}
        for k, v in self.coeffs.items():
            if k not in pos:
                raise ValueError(f"monomial {k} outside the coordinate range")
            vec[pos[k]] = v
        return vec

    def max_abs_coeff(self):
        return max((abs(v) for v in self.coeffs.values()), default=0)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        return None

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return self + Polynomial.constant(other, self.d)
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Polynomial(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.d, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return Polynomial(self.d, {k: v * other for k, v in self.coeffs.items()})

    def __rmul__(self, other):
        return Polynomial(self.d, {k: other * v for k, v in self.coeffs.items()})

    def __pow__(self, k: int):
        out = Polynomial.constant(1, self.d)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.d == other.d and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.d, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for k in sorted(self.coeffs, key=lambda m: (sum(m), m), reverse=True):
            mono = "*".join(
                f"X{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(k) if e
            )
            terms.append(f"{self.coeffs[k]}" + (f"*{mono}" if mono else ""))
        return "Polynomial(" + " + ".join(terms) + ")"


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Product of two polynomials (convolution over exponent vectors)."""
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} vs {q.d}")
    out: dict = {}
    for a, ca in p.coeffs.items():
        for b, cb in q.coeffs.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0) + ca * cb
    return Polynomial(p.d, out)


def canonical_sym_gram(basis: SymBasis, arith: Arith | None = None) -> np.ndarray:
    """Gram matrix S_n of the symmetrized basis vectors e_{j-bar}.

    With the idempotent symmetrizer (average over permutations) and the
    tensor inner product, distinct classes are orthogonal and the class with
    multiplicities m has squared norm prod(m_l!) / n!.
    """
    arith = arith or get_arith()
    n = basis.level
    out = arith.zeros((len(basis), len(basis)))
    for i, m in enumerate(basis):
        num = math.prod(math.factorial(k) for k in m)
        out[i, i] = arith.scalar(num) / arith.scalar(math.factorial(n))
    return out


def sym_lift(R, n: int, arith: Arith | None = None) -> np.ndarray:
    """Matrix of R^{(x)n} restricted to the symmetric power, on the multiset basis.

    The column of class (j_1, ..., j_n) holds the coefficients of
    prod_t (sum_k R[k, j_t] z_k) in the monomials z^m of degree n.
    """
    arith = arith or get_arith()
    R = arith.convert(R)
    d = R.shape[0]
    if R.shape != (d, d):
        raise ValueError("R must be square")
    if arith.rank(R) < d:
        raise SingularMatrixError("basis change matrix is singular")
    basis = enumerate_monomials(d, n)
    pos = basis.position
    forms = [Polynomial.linear_form(R[:, j], d) for j in range(d)]
    out = arith.zeros((len(basis), len(basis)))
    for c, m in enumerate(basis):
        prod = Polynomial.constant(arith.one(), d)
        for j, mult in enumerate(m):
            for _ in range(mult):
                prod = prod * forms[j]
        for k, v in prod.coeffs.items():
            out[pos[k], c] = v
    return out


def shift_matrix(d: int, n: int, j: int, arith: Arith | None = None) -> np.ndarray:
    """Matrix of xi -> e_j (x)^ xi from level n to level n+1 (``j`` is 1-based).

    On the multiset basis this is multiplication by z_j: class m goes to
    m + e_j with coefficient one.
    """
    arith = arith or get_arith()
    src = enumerate_monomials(d, n)
    dst = enumerate_monomials(d, n + 1)
    out = arith.zeros((len(dst), len(src)))
    for c, m in enumerate(src):
        t = list(m)
        t[j - 1] += 1
        out[dst.index(t), c] = arith.one()
    return out
