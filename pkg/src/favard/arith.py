"""Scalar arithmetic modes and the small dense linear-algebra kernel.

Two modes are supported:

``rational``
    Exact arithmetic on ``gmpy2.mpq`` scalars stored in numpy object arrays.
    Rank, kernels, inverses and Moore-Penrose pseudo-inverses are computed
    by exact Gauss-Jordan elimination.

``f64``
    Binary64 arithmetic on plain float arrays.  Every equality test goes
    through the configured tolerance.

A process-wide default mode is kept in this module (see :func:`set_arith`);
every object built from a :class:`~favard.moments.MomentFunctional` carries
the mode it was built with, so downstream computations never consult the
global again.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np
from gmpy2 import mpq

from .errors import SingularMatrixError

__all__ = [
    "Arith",
    "RationalArith",
    "FloatArith",
    "RATIONAL",
    "F64",
    "get_arith",
    "set_arith",
    "make_arith",
    "parse_scalar",
    "format_scalar",
    "SingularMatrixError",
]


def parse_scalar(value) -> mpq:
    """Convert ``int``, ``Fraction``, ``mpq``, or a ``"p/q"``/decimal string
    to an exact rational.  Floats are converted through their shortest repr,
    so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        text = value.strip()
        try:
            return mpq(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {value!r}") from exc
    if isinstance(value, float):
        if not np.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        return mpq(Fraction(repr(value)))
    if isinstance(value, int) or type(value).__name__ == "mpq":
        return mpq(value)
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, np.integer):
        return mpq(int(value))
    if isinstance(value, np.floating):
        return parse_scalar(float(value))
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def format_scalar(x) -> str:
    """Serialize a scalar: ``"p/q"`` (or ``"p"``) for rationals, ``repr`` for floats."""
    if type(x).__name__ == "mpq":
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


class Arith:
    """Common interface of the two arithmetic modes."""

    name: str = ""
    exact: bool = False
    tol: float = 0.0

    # -- construction -----------------------------------------------------

    def scalar(self, value):
        raise NotImplementedError

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def array(self, rows) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def convert(self, a) -> np.ndarray:
        """Cast an array of any supported scalars into this mode."""
        a = np.asarray(a, dtype=object)
        out = self.zeros(a.shape)
        for idx in np.ndindex(a.shape):
            out[idx] = self.scalar(a[idx])
        return out

    # -- comparisons ------------------------------------------------------

    def is_zero(self, x, scale=1.0) -> bool:
        raise NotImplementedError

    def max_abs(self, a):
        a = np.asarray(a)
        if a.size == 0:
            return self.zero()
        return max(abs(v) for v in a.flat)

    def allclose(self, a, b, scale=None) -> bool:
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape != b.shape:
            return False
        if scale is None:
            scale = max(1.0, float(self.max_abs(a)), float(self.max_abs(b)))
        return self.is_zero(self.max_abs(a - b), scale)

    # -- linear algebra ---------------------------------------------------

    def rank(self, a) -> int:
        raise NotImplementedError

    def inv(self, a) -> np.ndarray:
        raise NotImplementedError

    def pinv(self, a, scale=None) -> np.ndarray:
        raise NotImplementedError

    def nullspace(self, a) -> np.ndarray:
        """Columns spanning the right kernel of ``a``."""
        raise NotImplementedError

    def psd_violation(self, a, scale=None):
        """Return ``None`` when the symmetric matrix ``a`` is positive
        semidefinite, else the index of the first offending pivot."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class RationalArith(Arith):
    name = "rational"
    exact = True
    tol = 0.0

    def scalar(self, value):
        return parse_scalar(value)

    def array(self, rows):
        a = np.array(rows, dtype=object)
        return self.convert(a)

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out

    def is_zero(self, x, scale=1.0) -> bool:
        return x == 0

    def rref(self, a):
        """Reduced row echelon form and the pivot column list."""
        m = np.array(a, dtype=object, copy=True)
        rows, cols = m.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            p = next((i for i in range(r, rows) if m[i, c] != 0), None)
            if p is None:
                continue
            if p != r:
                m[[r, p]] = m[[p, r]]
            piv = m[r, c]
            if piv != 1:
                m[r, :] = [v / piv for v in m[r, :]]
            for i in range(rows):
                if i != r and m[i, c] != 0:
                    f = m[i, c]
                    m[i, :] = m[i, :] - f * m[r, :]
            pivots.append(c)
            r += 1
        return m, pivots

    def rank(self, a) -> int:
        a = np.asarray(a, dtype=object)
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def inv(self, a):
        a = np.asarray(a, dtype=object)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        if n == 0:
            return self.zeros((0, 0))
        aug = np.concatenate([a, self.eye(n)], axis=1)
        red, pivots = self.rref(aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] >= n:
            raise SingularMatrixError("matrix is singular")
        return red[:, n:]

    def pinv(self, a, scale=None):
        # Full-rank factorization a = B C with B = a[:, pivots] and C the
        # nonzero rows of rref(a); then a^+ = C^T (C C^T)^-1 (B^T B)^-1 B^T.
        a = np.asarray(a, dtype=object)
        rows, cols = a.shape
        if a.size == 0:
            return self.zeros((cols, rows))
        red, pivots = self.rref(a)
        r = len(pivots)
        if r == 0:
            return self.zeros((cols, rows))
        b = a[:, pivots]
        c = red[:r, :]
        return c.T @ self.inv(c @ c.T) @ self.inv(b.T @ b) @ b.T

    def nullspace(self, a):
        a = np.asarray(a, dtype=object)
        rows, cols = a.shape
        if rows == 0:
            return self.eye(cols)
        red, pivots = self.rref(a)
        free = [c for c in range(cols) if c not in pivots]
        basis = self.zeros((cols, len(free)))
        for k, f in enumerate(free):
            basis[f, k] = mpq(1)
            for i, p in enumerate(pivots):
                basis[p, k] = -red[i, f]
        return basis

    def psd_violation(self, a, scale=None):
        # Symmetric elimination with diagonal pivots: a PSD matrix never
        # produces a negative pivot, and a zero pivot forces a zero row.
        m = np.array(a, dtype=object, copy=True)
        n = m.shape[0]
        for k in range(n):
            for i in range(k, n):
                if m[i, i] < 0:
                    return i
            piv = m[k, k]
            if piv == 0:
                if any(m[k, j] != 0 for j in range(k, n)):
                    return k
                continue
            for i in range(k + 1, n):
                if m[i, k] != 0:
                    f = m[i, k] / piv
                    m[i, k:] = m[i, k:] - f * m[k, k:]
        return None


class FloatArith(Arith):
    name = "f64"
    exact = False

    def __init__(self, tol: float = 1e-10):
        self.tol = float(tol)

    def scalar(self, value):
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)

    def array(self, rows):
        obj = np.asarray(rows, dtype=object)
        out = np.empty(obj.shape, dtype=float)
        for idx, v in np.ndenumerate(obj):
            out[idx] = self.scalar(v)
        return out

    def convert(self, a):
        return self.array(a)

    def zeros(self, shape):
        return np.zeros(shape, dtype=float)

    def eye(self, n):
        return np.eye(n)

    def is_zero(self, x, scale=1.0) -> bool:
        return abs(float(x)) <= self.tol * max(1.0, float(scale))

    def max_abs(self, a):
        a = np.asarray(a, dtype=float)
        return float(np.max(np.abs(a))) if a.size else 0.0

    def _rank_cutoff(self, s, scale):
        ref = max(float(s[0]) if len(s) else 0.0, float(scale or 0.0))
        return self.tol * ref

    def rank(self, a, scale=None) -> int:
        a = np.asarray(a, dtype=float)
        if a.size == 0:
            return 0
        s = np.linalg.svd(a, compute_uv=False)
        return int(np.sum(s > self._rank_cutoff(s, scale)))

    def inv(self, a):
        a = np.asarray(a, dtype=float)
        if a.size == 0:
            return np.zeros((0, 0))
        if self.rank(a) < a.shape[0]:
            raise SingularMatrixError("matrix is numerically singular")
        return np.linalg.inv(a)

    def pinv(self, a, scale=None):
        a = np.asarray(a, dtype=float)
        rows, cols = a.shape
        if a.size == 0:
            return np.zeros((cols, rows))
        u, s, vt = np.linalg.svd(a, full_matrices=False)
        keep = s > self._rank_cutoff(s, scale)
        if not keep.any():
            return np.zeros((cols, rows))
        return (vt[keep].T / s[keep]) @ u[:, keep].T

    def nullspace(self, a, scale=None):
        a = np.asarray(a, dtype=float)
        rows, cols = a.shape
        if rows == 0:
            return np.eye(cols)
        _, s, vt = np.linalg.svd(a, full_matrices=True)
        r = int(np.sum(s > self._rank_cutoff(s, scale)))
        return vt[r:].T.copy()

    def psd_violation(self, a, scale=None):
        a = np.asarray(a, dtype=float)
        if a.size == 0:
            return None
        w, v = np.linalg.eigh((a + a.T) / 2)
        ref = max(float(np.max(np.abs(w))), float(scale or 0.0), 1.0)
        bad = np.nonzero(w < -self.tol * ref)[0]
        if len(bad) == 0:
            return None
        return int(np.argmax(np.abs(v[:, bad[0]])))


RATIONAL = RationalArith()
F64 = FloatArith()

_default: Arith = RATIONAL


def make_arith(name: str, tol: float | None = None) -> Arith:
    if name == "rational":
        return RATIONAL
    if name in ("f64", "float"):
        return FloatArith(1e-10 if tol is None else tol)
    raise ValueError(f"unknown arithmetic mode {name!r}")


def get_arith() -> Arith:
    return _default


def set_arith(mode: str | Arith, tol: float | None = None) -> Arith:
    """Select the process-wide default mode; returns the previous one."""
    global _default
    previous = _default
    _default = mode if isinstance(mode, Arith) else make_arith(mode, tol)
    return previous
