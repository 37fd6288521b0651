"""Timing harness: seeded random curves, per-size timings, scaling exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import frechet_distance
from .geometry import Metric

__all__ = ["BenchRow", "random_curve", "run_bench", "scaling_exponents", "format_table"]

DEFAULT_SIZES = (64, 128, 256, 512)


@dataclass(frozen=True)
class BenchRow:
    metric: str
    n: int
    seconds: float
    value: float
    operations: int  # envelope inserts plus deletes
    boundaries: int
    queries: int
    deque_pops: int


def random_curve(rng: np.random.Generator, segments: int, d: int = 2, box: float = 10.0) -> np.ndarray:
    """Vertices drawn uniformly from ``[-box, box]^d``."""
    return rng.uniform(-box, box, size=(segments + 1, d))


def run_bench(metrics, sizes=DEFAULT_SIZES, seed: int = 0, d: int = 2, repeat: int = 1) -> list[BenchRow]:
    """Time every metric on one random curve pair per size.

    Curves depend only on ``(seed, n)``, so every metric sees the same input
    and reruns reproduce values and operation counts exactly.  With
    ``repeat > 1`` the fastest of the repeats is kept.
    """
    rows = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        P, Q = random_curve(rng, n, d), random_curve(rng, n, d)
        for metric in metrics:
            best = None
            for _ in range(max(1, repeat)):
                res = frechet_distance(P, Q, metric)
                if best is None or res.elapsed < best.elapsed:
                    best = res
            st = best.stats
            rows.append(BenchRow(
                metric.label(), n, best.elapsed, best.value,
                st.get("inserts", 0) + st.get("deletes", 0), st["boundaries"],
                st.get("queries", 0), st.get("deque_pops", 0),
            ))
    return rows


def scaling_exponents(rows: list[BenchRow]) -> dict[str, dict]:
    """Per metric: doubling exponents ``log2(t(2n) / t(n))`` and a least-squares log-log slope."""
    out = {}
    for label in dict.fromkeys(r.metric for r in rows):
        pts = sorted((r.n, r.seconds) for r in rows if r.metric == label)
        steps = []
        for (n0, t0), (n1, t1) in zip(pts, pts[1:]):
            if t0 > 0 and t1 > 0:
                steps.append(math.log(t1 / t0) / math.log(n1 / n0))
        fit = float("nan")
        if len(pts) >= 2 and all(t > 0 for _, t in pts):
            x = np.log([n for n, _ in pts])
            y = np.log([t for _, t in pts])
            fit = float(np.polyfit(x, y, 1)[0])
        out[label] = {"steps": steps, "fit": fit}
    return out


def format_table(rows: list[BenchRow]) -> str:
    lines = [f"{'metric':<12} {'n':>5} {'seconds':>9} {'ops':>9} {'ops/bnd':>8} {'queries':>9} {'pops':>9}"]
    for r in rows:
        lines.append(
            f"{r.metric:<12} {r.n:>5} {r.seconds:>9.3f} {r.operations:>9} "
            f"{r.operations / r.boundaries:>8.3f} {r.queries:>9} {r.deque_pops:>9}"
        )
    for label, ex in scaling_exponents(rows).items():
        steps = " ".join(f"{s:.2f}" for s in ex["steps"])
        lines.append(f"exponent {label}: fit {ex['fit']:.2f} (doubling steps: {steps})")
    return "\n".join(lines)
