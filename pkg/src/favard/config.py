"""JSON run configuration and report documents.

Config layout::

    {
      "dimension": 2,
      "max_level": 3,
      "arithmetic": "rational",          # or "f64"
      "tolerance": 1e-10,                # f64 only
      "measure": {"type": "product", "factors": [{"family": "gaussian"}, ...]},
      "basis_change": [["1", "1"], ["0", "1"]]     # optional
    }

Measure variants:

* ``{"type": "product", "factors": [...]}`` with factor families
  ``gaussian`` (mean, variance), ``uniform`` (a, b), ``exponential`` (rate),
  ``two_point`` (x1, x2, p) and ``moment_list`` (moments).
* ``{"type": "moment_table", "max_degree": D, "moments": [{"index": [..], "value": "p/q"}, ...]}``
* ``{"type": "atomic", "atoms": [{"point": [..], "weight": "p/q"}, ...]}``

Scalars may be JSON numbers or strings such as ``"-3/4"`` or ``"0.25"``.
Reports write rationals as ``"p/q"`` strings and floats as ``repr`` strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .arith import Arith, format_scalar, make_arith
from .errors import CheckReport, ConfigError
from .favard1d import stieltjes
from .moments import (
    Atomic,
    Exponential,
    Gaussian,
    MomentList,
    MomentTable,
    Product,
    TwoPoint,
    Uniform,
    build_moments,
    factor_moments,
)
from .polyalg import enumerate_monomials

__all__ = [
    "RunConfig",
    "BASIS_ORDERING",
    "load_config",
    "parse_config",
    "parse_measure",
    "parse_matrix",
    "load_matrix",
    "to_jsonable",
    "matrix_doc",
    "compute_report",
    "dumps",
]

REPORT_FORMAT = "favard-report/1"
BASIS_ORDERING = (
    "level n lists the exponent vectors of total degree n in lexicographically "
    "decreasing order; matrices are row-major with rows/cols giving those vectors"
)

_FAMILIES = {
    "gaussian": (Gaussian, ("mean", "variance")),
    "uniform": (Uniform, ("a", "b")),
    "exponential": (Exponential, ("rate",)),
    "two_point": (TwoPoint, ("x1", "x2", "p")),
}


@dataclass
class RunConfig:
    dimension: int
    max_level: int
    arithmetic: str
    tolerance: float
    measure: object
    basis_change: list | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def arith(self) -> Arith:
        return make_arith(self.arithmetic, self.tolerance)

    def moments(self, degree: int | None = None):
        return build_moments(self.measure, 2 * self.max_level if degree is None else degree, self.arith)


def _scalar_text(v):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise ConfigError(f"expected a scalar, got {v!r}")
    return v


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{what} must be an integer")
    return v


def parse_factor(doc: dict):
    if not isinstance(doc, dict) or "family" not in doc:
        raise ConfigError("each factor needs a 'family'")
    fam = doc["family"]
    if fam == "moment_list":
        ms = doc.get("moments")
        if not isinstance(ms, list):
            raise ConfigError("moment_list needs a 'moments' list")
        return MomentList(tuple(_scalar_text(v) for v in ms))
    if fam not in _FAMILIES:
        raise ConfigError(f"unknown factor family {fam!r}")
    cls, keys = _FAMILIES[fam]
    unknown = set(doc) - set(keys) - {"family"}
    if unknown:
        raise ConfigError(f"unknown keys for {fam}: {sorted(unknown)}")
    return cls(**{k: _scalar_text(doc[k]) for k in keys if k in doc})


def parse_measure(doc: dict, d: int):
    if not isinstance(doc, dict):
        raise ConfigError("'measure' must be an object")
    kind = doc.get("type")
    if kind == "product":
        factors = doc.get("factors")
        if not isinstance(factors, list) or not factors:
            raise ConfigError("product measure needs a non-empty 'factors' list")
        spec = Product(tuple(parse_factor(f) for f in factors))
    elif kind == "moment_table":
        D = _int(doc.get("max_degree"), "max_degree")
        table = {}
        for entry in doc.get("moments", []):
            idx = tuple(_int(i, "moment index entry") for i in entry["index"])
            if len(idx) != d or min(idx, default=0) < 0:
                raise ConfigError(f"bad moment index {list(idx)}")
            table[idx] = _scalar_text(entry["value"])
        spec = MomentTable(d, table, D)
    elif kind == "atomic":
        atoms = []
        for a in doc.get("atoms", []):
            atoms.append((tuple(_scalar_text(x) for x in a["point"]), _scalar_text(a["weight"])))
        if not atoms:
            raise ConfigError("atomic measure needs at least one atom")
        spec = Atomic(tuple(atoms))
    else:
        raise ConfigError(f"unknown measure type {kind!r}")
    if spec.dimension != d:
        raise ConfigError(f"measure has dimension {spec.dimension}, config says {d}")
    return spec


def parse_matrix(doc, d: int) -> list:
    if isinstance(doc, dict):
        doc = doc.get("data", doc.get("matrix"))
    if not isinstance(doc, list) or len(doc) != d or any(not isinstance(r, list) or len(r) != d for r in doc):
        raise ConfigError(f"basis change must be a {d}x{d} matrix")
    return [[_scalar_text(x) for x in row] for row in doc]


def load_matrix(path: str, d: int) -> list:
    return parse_matrix(_read_json(path), d)


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    try:
        d = _int(doc["dimension"], "dimension")
        N = _int(doc["max_level"], "max_level")
        measure_doc = doc["measure"]
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc.args[0]!r}") from None
    if d < 1:
        raise ConfigError("dimension must be >= 1")
    if N < 1:
        raise ConfigError("max_level must be >= 1")
    mode = doc.get("arithmetic", "rational")
    if mode not in ("rational", "f64"):
        raise ConfigError(f"arithmetic must be 'rational' or 'f64', got {mode!r}")
    tol = doc.get("tolerance", 1e-10)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("tolerance must be a positive number")
    try:
        spec = parse_measure(measure_doc, d)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed measure: {exc}") from None
    if isinstance(spec, MomentTable) and spec.max_degree < 2 * N:
        raise ConfigError(f"moment table covers degree {spec.max_degree}; max_level {N} needs {2 * N}")
    R = parse_matrix(doc["basis_change"], d) if doc.get("basis_change") is not None else None
    return RunConfig(d, N, mode, float(tol), spec, R, doc)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def load_config(path: str, *, arithmetic: str | None = None, tolerance: float | None = None) -> RunConfig:
    doc = _read_json(path)
    if isinstance(doc, dict):
        doc = dict(doc)
        if arithmetic is not None:
            doc["arithmetic"] = arithmetic
        if tolerance is not None:
            doc["tolerance"] = tolerance
    return parse_config(doc)


# -- serialization --------------------------------------------------------


def to_jsonable(x):
    """Recursively convert scalars, arrays and tuples into JSON values."""
    if isinstance(x, CheckReport):
        return {
            "name": x.name,
            "passed": bool(x.passed),
            "max_residual": to_jsonable(x.max_residual),
            "details": to_jsonable(x.details),
        }
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return format_scalar(x)


def matrix_doc(a: np.ndarray, rows, cols) -> dict:
    return {
        "rows": [list(r) for r in rows],
        "cols": [list(c) for c in cols],
        "data": [[format_scalar(v) for v in row] for row in np.asarray(a).tolist()],
    }


def recurrence_doc(rec) -> dict:
    return {
        "alpha": [format_scalar(a) for a in rec.alphas],
        "beta_sq": [format_scalar(b) for b in rec.beta_sq],
        "termination": rec.termination,
        "flagged": list(rec.flagged),
    }


def config_doc(cfg: RunConfig) -> dict:
    out = {
        "dimension": cfg.dimension,
        "max_level": cfg.max_level,
        "arithmetic": cfg.arithmetic,
    }
    if cfg.arithmetic == "f64":
        out["tolerance"] = cfg.tolerance
    out["measure"] = cfg.raw.get("measure")
    if cfg.basis_change is not None:
        out["basis_change"] = to_jsonable(cfg.basis_change)
    return out


def levels_doc(jac) -> list:
    levels = []
    for n in range(jac.N + 1):
        basis = jac.basis(n)
        entry = {
            "level": n,
            "basis": [list(b) for b in basis],
            "dimension": len(basis),
            "gram_rank": jac.dec.ranks[n],
            "W": matrix_doc(jac.omega_form[n], basis, basis),
            "W_rank": jac.omega_rank[n],
            "omega_op": matrix_doc(jac.omega_op(n), basis, basis),
            "U_rank": jac.un_rank[n],
        }
        if n < len(jac.alpha):
            entry["Lambda"] = [matrix_doc(lam, basis, basis) for lam in jac.alpha[n]]
        levels.append(entry)
    return levels


def compute_report(cfg: RunConfig, jac, command: str = "compute") -> dict:
    doc = {
        "format": REPORT_FORMAT,
        "command": command,
        "basis_ordering": BASIS_ORDERING,
        "config": config_doc(cfg),
        "levels": levels_doc(jac),
    }
    if isinstance(cfg.measure, Product):
        arith = cfg.arith
        N = cfg.max_level
        doc["recurrences"] = [
            recurrence_doc(stieltjes(factor_moments(f, 2 * N, arith), N, arith)) for f in cfg.measure.factors
        ]
    return doc


def _flat(x) -> bool:
    return isinstance(x, list) and all(not isinstance(v, (list, dict)) or _flat(v) for v in x)


def _dump(x, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict) and x:
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in x.items())
        return "{\n" + body + "\n" + "  " * indent + "}"
    if isinstance(x, list) and x and not _flat(x):
        body = ",\n".join(pad + _dump(v, indent + 1) for v in x)
        return "[\n" + body + "\n" + "  " * indent + "]"
    return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))


def dumps(doc) -> str:
    """Indented JSON that keeps scalar arrays (and arrays of them) on one line."""
    return _dump(doc, 0) + "\n"


def dims_table(max_dim: int, max_level: int) -> list:
    return [
        {"d": d, "dims": [len(enumerate_monomials(d, n)) for n in range(max_level + 1)]}
        for d in range(1, max_dim + 1)
    ]
