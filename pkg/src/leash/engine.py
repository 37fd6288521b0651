"""Retractable-leash sweep over the distance terrain.

Cells are visited row by row, left to right.  Visiting cell ``(i, j)``
computes the lowest height needed to reach its right boundary,
``L*[i+1, j]``, from the row structure of row ``j``, and the lowest height
needed to reach its top boundary, ``B*[i, j+1]``, from the column structure
of column ``i``.  Both structures are the same object with the roles of the
curves swapped; see :class:`Track`.
"""

from __future__ import annotations

import math
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .envelope import make_envelope
from .geometry import (
    Metric,
    MetricKind,
    PolygonalCurve,
    horizontal_profiles,
    polygon_sides_for_epsilon,
    vertical_profiles,
)

__all__ = [
    "FrechetResult",
    "QueryEvent",
    "Track",
    "as_curve",
    "frechet_distance",
    "frechet_distance_approx",
    "refine_with_decision",
]

INF = math.inf
CHUNK_BOUNDARIES = 8192


def as_curve(curve) -> PolygonalCurve:
    return curve if isinstance(curve, PolygonalCurve) else PolygonalCurve(curve)


@dataclass
class FrechetResult:
    value: float
    metric: Metric
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def __float__(self):
        return float(self.value)


class QueryEvent(NamedTuple):
    """Snapshot handed to a trace callback after every minimum query."""

    axis: str  # "row" or "col"
    track: int  # row index j (or column index i)
    step: int  # cell index along the track; target boundary is step + 1
    head: int
    queue: tuple  # deque contents, front first
    entry: tuple  # entry optima of the queue indices, same order
    floor_left: float | None
    floor_bottom: float
    lam: float
    value: float
    live: tuple  # column ids stored in the envelope
    profiles: dict  # boundary index -> profile, every boundary inserted so far


class Track:
    """Deque of candidate entry boundaries plus the witness envelope of one row.

    For a row ``j``, index ``k`` names cell ``(k, j)``; ``entry[k]`` is
    ``B*[k, j]`` and the envelope stores vertical boundary profiles
    ``L[x, j]`` under id ``x``.  The deque holds the indices whose entry
    optima are not dominated by a later one, so their entry optima increase
    from front to back.
    """

    __slots__ = ("axis", "index", "env", "queue", "entry", "stats", "floor_mode", "trace", "profiles")

    def __init__(self, axis, index, metric, stats, floor_mode="conditional", trace=None):
        self.axis = axis
        self.index = index
        self.env = make_envelope(metric, stats)
        self.queue = deque()
        self.entry = []
        self.stats = stats
        self.floor_mode = floor_mode
        self.trace = trace
        self.profiles = {} if trace is not None else None

    def advance(self, k: int, entry_opt: float, prev_opt: float, profile) -> float:
        """Optimum of boundary ``k + 1`` given entry and previous-boundary optima of cell ``k``."""
        entry = self.entry
        entry.append(entry_opt)
        queue = self.queue
        env = self.env
        while queue and entry[queue[-1]] >= entry_opt:
            queue.pop()
            self.stats["deque_pops"] += 1
        queue.append(k)
        if self.profiles is not None:
            self.profiles[k + 1] = profile
        if len(queue) == 1 and self.floor_mode == "conditional":
            # the envelope is the new profile alone: its minimum answers the query
            env.restart(k + 1, profile)
            self.stats["queries"] += 1
            lam, eps = profile.minimum
            if entry_opt > eps:
                eps = entry_opt
            if self.trace is not None:
                self._emit(k, None, entry_opt, lam, eps)
            return eps
        if len(queue) == 1:
            env.clear()
        env.insert(k + 1, profile)
        always = self.floor_mode == "always"
        h = queue[0]
        left = prev_opt if (always or h < k) else None
        lam, eps = env.min_query(left, entry[h])
        self._emit(k, left, entry[h], lam, eps)
        while len(queue) >= 2 and entry[queue[1]] <= eps:
            env.remove_up_to(queue[1])
            queue.popleft()
            self.stats["deque_pops"] += 1
            h = queue[0]
            left = prev_opt if (always or h < k) else None
            lam, eps = env.min_query(left, entry[h])
            self._emit(k, left, entry[h], lam, eps)
        env.truncate(k + 1)
        return eps

    def _emit(self, k, left, bottom, lam, eps):
        if self.trace is None:
            return
        q = tuple(self.queue)
        self.trace(QueryEvent(
            self.axis, self.index, k, q[0], q, tuple(self.entry[x] for x in q),
            left, bottom, lam, eps, tuple(self.env.column_ids()), self.profiles,
        ))


def _corner(p_profile, q_profile, lam):
    # a corner lies on a vertical and a horizontal boundary; the polygon
    # lift measures those in different planes, so take the larger reading
    return max(float(p_profile.raw(lam)), float(q_profile.raw(lam)))


def frechet_distance(P, Q, metric: Metric | None = None, *, floor_mode: str = "conditional",
                     trace: Callable[[QueryEvent], None] | None = None) -> FrechetResult:
    """Fréchet distance between two polygonal curves.

    Parameters
    ----------
    P, Q : PolygonalCurve or array_like
        Curves with vertices in ``R^d``; ``P`` indexes columns, ``Q`` rows.
    metric : Metric, optional
        Defaults to squared Euclidean, whose result is reported as the
        Euclidean Fréchet distance (square root taken).
    floor_mode : {"conditional", "always"}
        Whether the previous boundary's optimum is passed to a query only
        when the deque head lies left of the current cell ("conditional"), or on
        every query ("always").  "always" over-constrains queries whose
        witness enters the current cell from below and can only overestimate.
    trace : callable, optional
        Receives a :class:`QueryEvent` after every envelope query.

    Returns
    -------
    FrechetResult
    """
    if floor_mode not in ("conditional", "always"):
        raise ValueError(f"unknown floor_mode {floor_mode!r}")
    metric = Metric.euclidean_squared() if metric is None else metric
    P, Q = as_curve(P), as_curve(Q)
    if P.dimension != Q.dimension:
        raise ValueError(f"dimension mismatch: {P.dimension} vs {Q.dimension}")
    if metric.kind is MetricKind.POLYGON_LIFT and P.dimension < 2:
        raise ValueError("the polygon lift needs points in R^d with d >= 2")
    t0 = time.perf_counter()
    pv, qv = P.vertices, Q.vertices
    m, r = P.segments, Q.segments
    stats = Counter()

    # L*[x][j] for vertical boundaries, B*[i][y] for horizontal ones
    lstar = [[INF] * r for _ in range(m + 1)]
    bstar = [[INF] * (r + 1) for _ in range(m)]
    cols = [Track("col", i, metric, stats, floor_mode, trace) for i in range(m)]

    # profiles are built a block of rows at a time to bound memory
    chunk = max(1, CHUNK_BOUNDARIES // (m + 1))
    bottom_prof = horizontal_profiles(metric, pv, qv[:1])[0]
    row_prof = None
    for j0 in range(0, r, chunk):
        j1 = min(r, j0 + chunk)
        rows = vertical_profiles(metric, pv, qv[j0:j1 + 1])
        tops = horizontal_profiles(metric, pv, qv[j0 + 1:j1 + 1])
        if j0 == 0:
            start = _corner(rows[0][0], bottom_prof[0], 0.0)
            lstar[0][0] = start
            bstar[0][0] = start
        for j in range(j0, j1):
            row_prof, top_prof = rows[j - j0], tops[j - j0]
            advance = Track("row", j, metric, stats, floor_mode, trace).advance
            for i in range(m):
                lstar[i + 1][j] = advance(i, bstar[i][j], lstar[i][j], row_prof[i + 1])
                bstar[i][j + 1] = cols[i].advance(j, lstar[i][j], bstar[i][j], top_prof[i])

    end = _corner(row_prof[m], top_prof[m - 1], 1.0)
    value = max(end, min(lstar[m][r - 1], bstar[m - 1][r]))
    if metric.kind is MetricKind.EUCLIDEAN_SQUARED:
        value = math.sqrt(value)
    stats["cells"] = m * r
    stats["boundaries"] = (m + 1) * r + m * (r + 1)
    return FrechetResult(value, metric, dict(stats), time.perf_counter() - t0)


def frechet_distance_approx(P, Q, eps: float) -> FrechetResult:
    """``(1 + eps)``-approximate Euclidean Fréchet distance via a regular-polygon metric.

    The polygon circumscribes the unit circle, so the returned ``v`` satisfies
    ``v <= d_F <= (1 + eps) * v``.
    """
    k = polygon_sides_for_epsilon(eps)
    return frechet_distance(P, Q, Metric.polygon(k))


def refine_with_decision(P, Q, lo: float, hi: float, eps: float,
                         metric: Metric | None = None) -> float:
    """Shrink a bracket ``lo <= d_F <= hi`` by bisection on the decision procedure.

    Stops once the bracket is narrower than ``eps * lo`` and returns its
    midpoint.  ``metric`` defaults to Euclidean; the bracket is in its native
    (not squared) units.
    """
    from .oracle import FreeSpace

    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    if lo > hi or lo < 0:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    metric = Metric.euclidean_squared() if metric is None else metric
    squared = metric.kind is MetricKind.EUCLIDEAN_SQUARED
    space = FreeSpace(as_curve(P), as_curve(Q), metric)

    def decide(v):
        return space.decide(v * v if squared else v)

    if not decide(hi):
        raise ValueError(f"bracket upper end {hi} is below the Fréchet distance")
    # a zero lower end gives no relative scale, so fall back to the upper one
    width = eps * (lo if lo > 0 else hi)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if decide(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
