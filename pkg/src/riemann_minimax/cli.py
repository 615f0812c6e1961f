"""Command-line front end: ``riemann-minimax solve`` and ``riemann-minimax generate``.

Exit status is 0 on success, 1 for bad flags or input, 2 for numeric failure.
The ``RM_LOG`` environment variable (``quiet``, ``info`` or ``debug``) sets
the diagnostic level on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from typing import Optional

import numpy as np

from . import datasets
from .errors import ConfigError, DomainError, NumericError
from .euclidean import Euclidean
from .geometry import GeometryEnvelope, Manifold, PointCloud, TieBreak
from .klein import Klein
from .oracle import OracleResult, reference_solve, welzl_exact
from .solver import (IterationTrace, ScheduleKind, SolverConfig, StepSchedule, coreset_indices,
                     run_geo_alg, run_rie_alg)
from .spd import SPD, as_spd

log = logging.getLogger("riemann_minimax")

MANIFOLDS = ("euclidean", "klein", "spd")
TRACE_COLUMNS = ("k", "radius", "step", "farthest_index", "dist_to_oracle")
LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _fmt(x: float) -> str:
    return "%.17g" % x


def _setup_logging():
    level_name = os.environ.get("RM_LOG", "").strip().lower()
    if level_name and level_name not in LOG_LEVELS:
        raise ConfigError(f"RM_LOG must be one of {', '.join(LOG_LEVELS)}, got {level_name!r}")
    level = LOG_LEVELS.get(level_name, logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)
    log.propagate = False


# ---------------------------------------------------------------- input files

def read_point_csv(path: str) -> np.ndarray:
    """One point per row; lines starting with ``#`` and blank lines are skipped."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                values = [float(v) for v in row]
            except ValueError:
                raise ConfigError(f"{path}: row {lineno}: non-numeric entry in {row!r}") from None
            if not all(math.isfinite(v) for v in values):
                raise ConfigError(f"{path}: row {lineno}: non-finite coordinate")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ConfigError(f"{path}: row {lineno}: expected {width} columns, got {len(values)}")
            rows.append(values)
    if not rows:
        raise ConfigError(f"{path}: no points")
    return np.array(rows, dtype=float)


def read_spd_json(path: str, dim: Optional[int] = None) -> np.ndarray:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, list) or not data:
        raise ConfigError(f"{path}: expected a non-empty list of matrices")
    out = []
    for i, m in enumerate(data):
        try:
            arr = np.array(m, dtype=float)
        except (TypeError, ValueError):
            raise ConfigError(f"{path}: matrix {i}: not a numeric nested list") from None
        if dim is None:
            dim = arr.shape[0] if arr.ndim == 2 else -1
        try:
            out.append(as_spd(arr, dim))
        except DomainError as exc:
            raise ConfigError(f"{path}: matrix {i}: {exc}") from None
    return np.stack(out)


def write_point_csv(path: str, points: np.ndarray, header: str):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {header}\n")
        for p in points:
            fh.write(",".join(_fmt(v) for v in p) + "\n")


def write_spd_json(path: str, mats: np.ndarray):
    with open(path, "w") as fh:
        json.dump(mats.tolist(), fh)
        fh.write("\n")


# ---------------------------------------------------------------- solve

def make_manifold(name: str, dim: Optional[int] = None) -> Manifold:
    if name == "euclidean":
        return Euclidean()
    if name == "klein":
        return Klein()
    if name == "spd":
        return SPD(dim)
    raise ConfigError(f"unknown manifold {name!r}")


def parse_schedule(text: str, delta: Optional[float]) -> StepSchedule:
    if text == "harmonic":
        return StepSchedule.harmonic(delta)
    if text == "clamped":
        if delta is None:
            raise ConfigError("--schedule clamped needs --delta")
        return StepSchedule.clamped(delta)
    if text.startswith("scaled:"):
        try:
            r = float(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad scale in --schedule {text!r}") from None
        return StepSchedule.scaled(r, delta)
    raise ConfigError(f"--schedule must be harmonic, clamped or scaled:<r>, got {text!r}")


def parse_oracle(text: str):
    if text in ("none", "welzl"):
        return text, None
    if text.startswith("reference:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad iteration count in --oracle {text!r}") from None
        if n < 1:
            raise ConfigError("reference oracle needs a positive iteration count")
        return "reference", n
    raise ConfigError(f"--oracle must be welzl, reference:<N> or none, got {text!r}")


def _load_cloud(args, manifold: Manifold) -> PointCloud:
    if args.manifold == "spd":
        points = read_spd_json(args.input, args.dim)
    else:
        points = read_point_csv(args.input)
        if args.dim is not None and points.shape[1] != args.dim:
            raise ConfigError(f"--dim {args.dim} does not match the input dimension {points.shape[1]}")
    try:
        return PointCloud.of(manifold, points)
    except DomainError as exc:
        raise ConfigError(f"{args.input}: {exc}") from None


def _run_oracle(kind, n, manifold, cloud) -> Optional[OracleResult]:
    if kind == "none":
        return None
    if kind == "welzl":
        if not isinstance(manifold, Euclidean):
            raise ConfigError("the welzl oracle is exact only on the euclidean manifold")
        return welzl_exact(cloud.points[cloud.active])
    return reference_solve(manifold, cloud, n)


def _config_echo(args) -> dict:
    return {
        "manifold": args.manifold,
        "input": os.path.abspath(args.input),
        "dim": args.dim,
        "iters": args.iters,
        "schedule": args.schedule,
        "algorithm": args.algorithm,
        "delta": args.delta,
        "alpha": args.alpha,
        "beta": args.beta,
        "R": args.R,
        "force_delta": args.force_delta,
        "start": args.start,
        "seed": args.seed,
        "tie": args.tie,
        "oracle": args.oracle,
        "thin_trace": args.thin_trace,
        "relative": args.relative,
    }


def _apply_replay(args):
    """Fill solve flags from the config echo of a previous summary."""
    with open(args.replay) as fh:
        try:
            echo = json.load(fh)["config"]
        except (json.JSONDecodeError, KeyError, TypeError):
            raise ConfigError(f"{args.replay}: not a run summary with a config echo") from None
    for key, value in echo.items():
        setattr(args, key, value)


def _algorithm(args, schedule: StepSchedule) -> str:
    if args.algorithm != "auto":
        return args.algorithm
    return "geo" if schedule.kind is ScheduleKind.HARMONIC else "rie"


def _write_trace(path, manifold, trace: IterationTrace, oracle: Optional[OracleResult], relative: bool):
    scale = 1.0
    if relative and oracle is not None:
        if oracle.radius == 0.0:
            raise ConfigError("--relative is undefined for a zero oracle radius")
        scale = oracle.radius
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for r in trace.records:
            dist = "" if oracle is None else _fmt(manifold.distance(r.center, oracle.center) / scale)
            fh.write(f"{r.k},{_fmt(r.radius)},{_fmt(r.step)},{r.farthest_index},{dist}\n")


def cmd_solve(args) -> int:
    if args.replay:
        _apply_replay(args)
    if args.input is None or args.manifold is None:
        raise ConfigError("solve needs --manifold and --input (or --replay)")
    if args.iters < 1:
        raise ConfigError("--iters must be at least 1")
    manifold = make_manifold(args.manifold, args.dim)
    cloud = _load_cloud(args, manifold)
    schedule = parse_schedule(args.schedule, args.delta)
    oracle_kind, oracle_iters = parse_oracle(args.oracle)
    config = SolverConfig(schedule=schedule, max_iterations=args.iters, start_index=args.start,
                          tie_break=TieBreak(args.tie), seed=args.seed, thin_trace=args.thin_trace)
    algorithm = _algorithm(args, schedule)

    started = time.perf_counter()
    if algorithm == "geo":
        trace = run_geo_alg(manifold, cloud, config)
    else:
        envelope = None
        if args.alpha is not None and args.beta is not None:
            if args.R is not None:
                envelope = GeometryEnvelope(args.alpha, args.beta, cloud.points[args.start], args.R)
            else:
                envelope = GeometryEnvelope.from_cloud(manifold, cloud, args.alpha, args.beta,
                                                       anchor=args.start)
        elif args.delta is not None:
            log.warning("--delta is not checked without --alpha and --beta")
        trace = run_rie_alg(manifold, cloud, envelope, config, force_delta=args.force_delta)
    oracle = _run_oracle(oracle_kind, oracle_iters, manifold, cloud)
    elapsed = time.perf_counter() - started

    for value in (trace.final_radius,) + ((oracle.radius,) if oracle else ()):
        if not math.isfinite(value):
            raise NumericError("non-finite radius")
    if args.trace:
        _write_trace(args.trace, manifold, trace, oracle, args.relative)
    summary = {
        "manifold": args.manifold,
        "n_points": len(cloud),
        "dimension": int(manifold.tangent_dim(cloud.points[0]) if args.manifold != "spd"
                         else cloud.points.shape[1]),
        "algorithm": algorithm,
        "iterations": trace.iterations,
        "final_radius": trace.final_radius,
        "oracle_method": oracle.method.value if oracle else None,
        "oracle_radius": oracle.radius if oracle else None,
        "oracle_center_distance": (manifold.distance(trace.final_center, oracle.center)
                                   if oracle else None),
        "coreset_size": len(coreset_indices(trace)),
        "wall_clock_seconds": elapsed,
        "config": _config_echo(args),
    }
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    log.info("final radius %.12g after %d iterations", trace.final_radius, trace.iterations)
    if not args.trace and not args.summary:
        print(json.dumps(summary, indent=2))
    return 0


# ---------------------------------------------------------------- generate

def cmd_generate(args) -> int:
    pts = datasets.generate(args.manifold, args.n, args.dim, args.seed)
    if args.manifold == "spd":
        write_spd_json(args.out, pts)
    else:
        write_point_csv(args.out, pts,
                        f"manifold={args.manifold} n={args.n} dim={args.dim} seed={args.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riemann-minimax",
                                     description="Minimax center of a point cloud on a manifold.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the farthest-point iteration")
    s.add_argument("--manifold", choices=MANIFOLDS)
    s.add_argument("--input", help="CSV points (euclidean, klein) or JSON matrices (spd)")
    s.add_argument("--dim", type=int, help="matrix size for spd; checked against the input")
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--schedule", default="harmonic", help="harmonic | clamped | scaled:<r>")
    s.add_argument("--algorithm", choices=("auto", "geo", "rie"), default="auto",
                   help="geo: fraction steps, rie: arclength steps (auto: geo for harmonic)")
    s.add_argument("--delta", type=float, help="step cap")
    s.add_argument("--alpha", type=float, help="curvature upper-bound root, for the step check")
    s.add_argument("--beta", type=float, help="curvature lower-bound root, for the step check")
    s.add_argument("--R", type=float, help="enclosing radius about the start point")
    s.add_argument("--force-delta", action="store_true", help="run even if --delta is too large")
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--seed", type=int)
    s.add_argument("--tie", choices=[t.value for t in TieBreak], default="deterministic")
    s.add_argument("--oracle", default="none", help="welzl | reference:<N> | none")
    s.add_argument("--trace")
    s.add_argument("--summary")
    s.add_argument("--thin-trace", action="store_true")
    s.add_argument("--relative", action="store_true", help="divide dist_to_oracle by the oracle radius")
    s.add_argument("--replay", help="rerun with the config echo of a summary file")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="write a reproducible random cloud")
    g.add_argument("--manifold", choices=MANIFOLDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        _setup_logging()
        return args.func(args)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
