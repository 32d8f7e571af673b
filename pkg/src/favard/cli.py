"""Command-line front end: ``favard {compute,verify,reconstruct,basis-change,dims}``.

Exit codes: 0 success, 1 bad config or violated precondition, 2 invalid
moments (including a non-PSD table), 3 an invariant failed.
"""

from __future__ import annotations

import argparse
import sys

from .config import (
    BASIS_ORDERING,
    REPORT_FORMAT,
    RunConfig,
    compute_report,
    config_doc,
    dims_table,
    dumps,
    levels_doc,
    load_config,
    load_matrix,
    to_jsonable,
)
from .errors import ConfigError, FavardError, InvariantError, MomentError
from .fock import build_fock_fields, check_basis_covariance, jacobi_in_basis, jacobi_pipeline, reconstruct_moments
from .polyalg import graded_monomials
from .verify import analyze, parse_checks, run_checks

__all__ = ["main", "build_parser", "cmd_compute", "cmd_verify", "cmd_reconstruct", "cmd_basis_change", "cmd_dims"]


def _emit(doc, path: str | None) -> None:
    text = dumps(doc)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args) -> RunConfig:
    if not args.config:
        raise ConfigError("a config file is required (-c/--config)")
    return load_config(args.config, arithmetic=args.arith, tolerance=args.tol)


def _basis_change(args, cfg: RunConfig):
    if getattr(args, "R", None):
        return load_matrix(args.R, cfg.dimension)
    return cfg.basis_change


def cmd_compute(args) -> int:
    cfg = _load(args)
    _, _, jac = jacobi_pipeline(cfg.moments(), cfg.max_level)
    _emit(compute_report(cfg, jac), args.output)
    return 0


def cmd_verify(args) -> int:
    cfg = _load(args)
    names = parse_checks(args.checks)
    R = _basis_change(args, cfg)
    an = analyze(cfg.moments(), cfg.max_level, basis_changes=[R] if R is not None else [])
    reports = run_checks(an, names)
    ok = all(r.passed for r in reports)
    doc = {
        "format": REPORT_FORMAT,
        "command": "verify",
        "config": config_doc(cfg),
        "passed": ok,
        "checks": [to_jsonable(r) for r in reports],
    }
    _emit(doc, args.output)
    for r in reports:
        print(r.line(), file=sys.stderr)
    return 0 if ok else 3


def cmd_reconstruct(args) -> int:
    cfg = _load(args)
    K = cfg.max_level if args.degree is None else args.degree
    if not 0 <= K <= cfg.max_level:
        raise ConfigError(f"--degree must lie in 0..{cfg.max_level}, got {K}")
    m = cfg.moments()
    _, _, jac = jacobi_pipeline(m, cfg.max_level)
    fields = build_fock_fields(jac)
    arith = cfg.arith
    rows, worst = [], arith.zero()
    for alpha in graded_monomials(cfg.dimension, K):
        word = [j + 1 for j, a in enumerate(alpha) for _ in range(a)]
        got = reconstruct_moments(jac, word, fields)
        dev = abs(got - m[alpha])
        worst = max(worst, dev)
        rows.append({"index": list(alpha), "source": m[alpha], "reconstructed": got, "deviation": dev})
    doc = {
        "format": REPORT_FORMAT,
        "command": "reconstruct",
        "config": config_doc(cfg),
        "degree": K,
        "max_deviation": worst,
        "moments": rows,
    }
    _emit(to_jsonable(doc), args.output)
    scale = max([1.0] + [float(abs(r["source"])) for r in rows])
    return 0 if arith.is_zero(worst, scale) else 3


def cmd_basis_change(args) -> int:
    cfg = _load(args)
    R = _basis_change(args, cfg)
    if R is None:
        raise ConfigError("basis-change needs -R PATH or 'basis_change' in the config")
    arith = cfg.arith
    R = arith.convert(R)
    if arith.rank(R) < cfg.dimension:
        raise ConfigError("basis change matrix is singular")
    m = cfg.moments()
    _, _, jac = jacobi_pipeline(m, cfg.max_level)
    jac_p = jacobi_in_basis(m, R, cfg.max_level)
    checks = [check_basis_covariance(jac, jac_p, R, n) for n in range(cfg.max_level + 1)]
    ok = all(c.passed for c in checks)
    doc = {
        "format": REPORT_FORMAT,
        "command": "basis-change",
        "basis_ordering": BASIS_ORDERING,
        "config": config_doc(cfg),
        "basis_change": to_jsonable(R),
        "levels": levels_doc(jac_p),
        "covariance": [to_jsonable(c) for c in checks],
        "passed": ok,
    }
    _emit(doc, args.output)
    return 0 if ok else 3


def cmd_dims(args) -> int:
    _emit({"format": REPORT_FORMAT, "command": "dims", "table": dims_table(args.max_dim, args.max_level)}, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="JSON run configuration")
    common.add_argument("-o", "--output", help="report path (default: stdout)")
    common.add_argument("--arith", choices=("rational", "f64"), help="override the config arithmetic")
    common.add_argument("--tol", type=float, help="override the float tolerance")

    p = argparse.ArgumentParser(prog="favard", description="Multivariate Jacobi sequences from moments.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("compute", parents=[common], help="write per-level Jacobi data")
    sp.set_defaults(func=cmd_compute)
    sp = sub.add_parser("verify", parents=[common], help="run structural checks")
    sp.add_argument("--checks", default="all", help="comma-separated check names or 'all'")
    sp.add_argument("-R", help="basis-change matrix file for basis_covariance")
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("reconstruct", parents=[common], help="moments back from the Jacobi data")
    sp.add_argument("--degree", type=int, help="largest total degree K (default: max_level)")
    sp.set_defaults(func=cmd_reconstruct)
    sp = sub.add_parser("basis-change", parents=[common], help="Jacobi data in a transformed basis")
    sp.add_argument("-R", help="basis-change matrix file (JSON d x d)")
    sp.set_defaults(func=cmd_basis_change)
    sp = sub.add_parser("dims", help="symmetric-power dimensions")
    sp.add_argument("-o", "--output")
    sp.add_argument("--max-dim", type=int, default=4)
    sp.add_argument("--max-level", type=int, default=8)
    sp.set_defaults(func=cmd_dims)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FavardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
