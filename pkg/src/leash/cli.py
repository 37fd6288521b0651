"""``leash`` command line: compute, verify, terrain, bench.

Exit codes: 0 success, 1 verification gap above tolerance, 2 unreadable
input or bad option, 3 dimension mismatch.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import DEFAULT_SIZES, format_table, run_bench
from .engine import frechet_distance, frechet_distance_approx
from .geometry import Metric, MetricKind, PolygonalCurve, curve_eval, pairwise_distances
from .io import CurveFormatError, parse_metric, read_curve
from .oracle import frechet_by_bisection

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_GAP, EXIT_PARSE, EXIT_DIM = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _metric(spec: str) -> Metric:
    try:
        return parse_metric(spec)
    except (ValueError, CurveFormatError) as exc:
        raise _Fail(EXIT_PARSE, f"bad --metric: {exc}") from None


def _curves(args) -> tuple[PolygonalCurve, PolygonalCurve]:
    try:
        P, Q = read_curve(args.curve_a), read_curve(args.curve_b)
    except CurveFormatError as exc:
        raise _Fail(EXIT_PARSE, str(exc)) from None
    if P.dimension != Q.dimension:
        raise _Fail(EXIT_DIM, f"dimension mismatch: {P.dimension} vs {Q.dimension}")
    return P, Q


def _check_metric_dim(metric: Metric, d: int) -> None:
    if metric.kind is MetricKind.POLYTOPE and metric.facets.shape[1] != d:
        raise _Fail(EXIT_DIM, f"facet normals live in R^{metric.facets.shape[1]}, curves in R^{d}")
    if metric.kind is MetricKind.POLYGON_LIFT and d < 2:
        raise _Fail(EXIT_DIM, "the polygon metric needs curves in R^d with d >= 2")


def _fmt(x: float) -> str:
    # shortest repr that round-trips the double exactly
    return repr(float(x))


def cmd_compute(args, out) -> int:
    P, Q = _curves(args)
    if args.epsilon is not None:
        if not args.epsilon > 0:
            raise _Fail(EXIT_PARSE, "--epsilon must be positive")
        if args.metric != "euclidean":
            raise _Fail(EXIT_PARSE, "--epsilon approximates the Euclidean metric; drop --metric")
        _check_metric_dim(Metric.polygon(3), P.dimension)
        res = frechet_distance_approx(P, Q, args.epsilon)
    else:
        metric = _metric(args.metric)
        _check_metric_dim(metric, P.dimension)
        res = frechet_distance(P, Q, metric)
    st = res.stats
    print(f"value: {_fmt(res.value)}", file=out)
    print(f"metric: {res.metric.label()}", file=out)
    print(f"n: {P.segments}", file=out)
    print(f"m: {Q.segments}", file=out)
    print(f"d: {P.dimension}", file=out)
    print(f"elapsed: {res.elapsed:.6f}", file=out)
    for key in ("inserts", "deletes", "queries", "prunes", "deque_pops"):
        print(f"{key}: {st.get(key, 0)}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    P, Q = _curves(args)
    metric = _metric(args.metric)
    _check_metric_dim(metric, P.dimension)
    engine = frechet_distance(P, Q, metric).value
    # bisect well below the tolerance so the oracle's own width does not count
    oracle = frechet_by_bisection(P, Q, metric, rel_tol=min(1e-9, args.tolerance * 1e-3))
    gap = abs(engine - oracle) / max(abs(oracle), 1e-300) if engine != oracle else 0.0
    ok = gap <= args.tolerance
    print(f"engine: {_fmt(engine)}", file=out)
    print(f"oracle: {_fmt(oracle)}", file=out)
    print(f"gap: {gap:.3e}", file=out)
    print(f"status: {'ok' if ok else 'FAIL'} (tolerance {args.tolerance:g})", file=out)
    return EXIT_OK if ok else EXIT_GAP


def cmd_terrain(args, out) -> int:
    P, Q = _curves(args)
    metric = _metric(args.metric)
    _check_metric_dim(metric, P.dimension)
    if not metric.is_point_metric:
        raise _Fail(EXIT_PARSE, "terrain export needs a point metric")
    if args.resolution < 2:
        raise _Fail(EXIT_PARSE, "--resolution must be at least 2")
    s = np.linspace(0.0, P.segments, args.resolution)
    t = np.linspace(0.0, Q.segments, args.resolution)
    A = np.array([curve_eval(P, x) for x in s])
    B = np.array([curve_eval(Q, y) for y in t])
    height = pairwise_distances(metric, A, B)
    print(f"# n={P.segments},m={Q.segments},metric={metric.label()}", file=out)
    print("s,t,height", file=out)
    for a, x in enumerate(s.tolist()):
        for b, y in enumerate(t.tolist()):
            print(f"{_fmt(x)},{_fmt(y)},{_fmt(height[a, b])}", file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    metrics = [_metric(m) for m in args.metrics.split(",")]
    try:
        sizes = tuple(int(x) for x in args.sizes.split(","))
    except ValueError:
        raise _Fail(EXIT_PARSE, f"bad --sizes {args.sizes!r}") from None
    if any(n < 1 for n in sizes):
        raise _Fail(EXIT_PARSE, "--sizes must be positive")
    for metric in metrics:
        _check_metric_dim(metric, args.dimension)
    rows = run_bench(metrics, sizes, seed=args.seed, d=args.dimension, repeat=args.repeat)
    print(format_table(rows), file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leash", description="Fréchet distance between polygonal curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    metric_help = "euclidean | l1 | linf | polygon:<k> | polytope:<facet-file> (default: euclidean)"

    def pair(p):
        p.add_argument("curve_a", help="curve file (.csv or .json)")
        p.add_argument("curve_b", help="curve file (.csv or .json)")
        p.add_argument("--metric", default="euclidean", help=metric_help)

    p = sub.add_parser("compute", help="Fréchet distance of two curves")
    pair(p)
    p.add_argument("--epsilon", type=float, help="(1+eps)-approximate Euclidean value via a polygon metric")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="compare the sweep with the bisection oracle")
    pair(p)
    p.add_argument("--tolerance", type=float, default=1e-6, help="allowed relative gap (default 1e-6)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("terrain", help="distance terrain as CSV rows s,t,height")
    pair(p)
    p.add_argument("--resolution", type=int, default=64, help="grid points per axis (default 64)")
    p.set_defaults(func=cmd_terrain)

    p = sub.add_parser("bench", help="timing table on seeded random curves")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--metric", "--metrics", dest="metrics", default="linf,l1,euclidean",
                   help="comma-separated metrics (default linf,l1,euclidean)")
    p.add_argument("--sizes", default=",".join(map(str, DEFAULT_SIZES)), help="comma-separated segment counts")
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--repeat", type=int, default=1, help="keep the fastest of this many runs")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Fail as exc:
        print(f"leash: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
