"""Witness-envelope structures for one row (or column) of the sweep.

The structure holds the profiles of the vertical boundaries that a witness
entering the row through the current deque head may still have to cross.
The newest profile (the frontier) is kept whole; older ones only matter
through their decreasing part.  A minimum-point query returns the lowest
point of the upper envelope of the stored profiles together with up to two
constant floors supplied by the caller.

Two implementations:

``FacetListEnvelope``
    Polyhedral metrics.  Profiles of one row are maxima of lines with
    row-wide per-facet slopes, so each facet keeps a monotone queue of
    parallel lines and the envelope is the maximum of the queue heads.
    Older profiles are truncated explicitly.

``ParabolaEnvelope``
    Squared Euclidean metric.  Profiles of one row are parabolas with a
    common quadratic coefficient; they cross pairwise at most once, so full
    parabolas are stored (no truncation) and a profile is discarded once the
    query shows it can never reach a witness envelope again.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from typing import NamedTuple

from .geometry import BoundaryProfile, Metric, Parabola, PiecewiseLinear, min_of_split_lines
from .hull import LineEnvelope, active_index, crossing, value_at

__all__ = [
    "EnvelopeEntry",
    "MinPoint",
    "EmptyEnvelopeError",
    "WitnessEnvelope",
    "FacetListEnvelope",
    "ParabolaEnvelope",
    "make_envelope",
]


class EmptyEnvelopeError(LookupError):
    """Minimum query on an envelope without profiles."""


class EnvelopeEntry(NamedTuple):
    column_id: int
    profile: BoundaryProfile


class MinPoint(NamedTuple):
    lam: float
    value: float


def _fold(value: float, floor_left, floor_bottom) -> float:
    if floor_bottom is not None and floor_bottom > value:
        value = floor_bottom
    if floor_left is not None and floor_left > value:
        value = floor_left
    return value


class WitnessEnvelope:
    """Common surface: insert, truncate, remove_up_to, clear, min_query."""

    def __init__(self, stats: Counter | None = None):
        self.stats = Counter() if stats is None else stats

    def insert(self, column_id: int, profile: BoundaryProfile) -> None:
        raise NotImplementedError

    def truncate(self, column_id: int) -> None:
        """Replace a stored profile by its running minimum (no-op if unsupported)."""

    def remove_up_to(self, column_id: int) -> None:
        raise NotImplementedError

    def restart(self, column_id: int, profile: BoundaryProfile) -> None:
        """Same as ``clear``, ``insert`` and ``truncate`` of the one profile."""
        self.clear()
        self.insert(column_id, profile)
        self.truncate(column_id)

    def clear(self) -> None:
        raise NotImplementedError

    def min_query(self, floor_left: float | None = None,
                  floor_bottom: float | None = None) -> MinPoint:
        raise NotImplementedError

    def column_ids(self) -> list[int]:
        raise NotImplementedError

    def __len__(self):
        return len(self.column_ids())

    def _check_order(self, column_id: int, last) -> None:
        if last is not None and column_id <= last:
            raise ValueError(
                f"column ids must increase: got {column_id} after {last}"
            )


class FacetListEnvelope(WitnessEnvelope):
    """Per-facet monotone queues of parallel lines plus a queue of constants.

    Each facet ``l`` keeps the lines ``slope[l] * lam + c`` of the stored
    profiles, newest at the back, sorted from top to bottom: a new line
    evicts every line strictly below it from the back, since it outlives
    them.  Removing old columns pops from the front, so the head of each
    queue is the highest live line of that facet.

    Truncating a profile drops its non-decreasing facet lines and adds its
    minimum to the constant queue; what remains is exactly the running
    minimum of the profile.
    """

    def __init__(self, stats: Counter | None = None):
        super().__init__(stats)
        self._slopes: tuple | None = None
        self._lines: list[deque] = []
        self._consts: deque = deque()
        self._ids: deque = deque()
        self._frontier = None  # (column_id, profile) not yet truncated
        # facet indices by sign of their slope, fixed by the first insert
        self._dec: list = []
        self._inc: list = []
        self._flat: list = []
        self._rising: list = []
        self._dec_index: list = []

    def column_ids(self) -> list[int]:
        return list(self._ids)

    def _set_slopes(self, slopes: tuple) -> None:
        self._slopes = slopes
        self._lines = [deque() for _ in slopes]
        self._dec = [(s, self._lines[l]) for l, s in enumerate(slopes) if s < 0]
        self._dec_index = [l for l, s in enumerate(slopes) if s < 0]
        self._inc = [(s, self._lines[l]) for l, s in enumerate(slopes) if s > 0]
        self._flat = [self._lines[l] for l, s in enumerate(slopes) if s == 0]
        self._rising = [self._lines[l] for l, s in enumerate(slopes) if s >= 0]

    def insert(self, column_id: int, profile: PiecewiseLinear) -> None:
        if not isinstance(profile, PiecewiseLinear):
            raise TypeError("FacetListEnvelope stores piecewise-linear profiles")
        ids = self._ids
        if ids and column_id <= ids[-1]:
            self._check_order(column_id, ids[-1])
        if self._frontier is not None:
            self.truncate(self._frontier[0])
        slopes = profile.slopes
        if self._slopes is None:
            self._set_slopes(slopes)
        elif slopes is not self._slopes and slopes != self._slopes:
            if len(slopes) != len(self._slopes) or any(
                abs(s - t) > 1e-9 * (1.0 + abs(t)) for s, t in zip(slopes, self._slopes)
            ):
                raise ValueError("profiles of one row must share their facet slopes")
        for queue, c in zip(self._lines, profile.intercepts):
            while queue and queue[-1][1] < c:
                queue.pop()
            queue.append((column_id, c))
        ids.append(column_id)
        self._frontier = (column_id, profile)
        self.stats["inserts"] += 1

    def restart(self, column_id: int, profile: PiecewiseLinear) -> None:
        if self._slopes is None or not isinstance(profile, PiecewiseLinear) or (
            profile.slopes is not self._slopes and profile.slopes != self._slopes
        ):
            return super().restart(column_id, profile)
        self.clear()
        # store the truncated profile directly
        c = profile.intercepts
        for l, (_, queue) in zip(self._dec_index, self._dec):
            queue.append((column_id, c[l]))
        self._consts.append((column_id, profile.minimum[1]))
        self._ids.append(column_id)
        self.stats["inserts"] += 1

    def truncate(self, column_id: int) -> None:
        if self._frontier is None or self._frontier[0] != column_id:
            return
        profile = self._frontier[1]
        self._frontier = None
        for queue in self._rising:
            if queue and queue[-1][0] == column_id:
                queue.pop()
        low = profile.minimum[1]
        consts = self._consts
        while consts and consts[-1][1] < low:
            consts.pop()
        consts.append((column_id, low))

    def remove_up_to(self, column_id: int) -> None:
        ids = self._ids
        while ids and ids[0] <= column_id:
            ids.popleft()
            self.stats["deletes"] += 1
        for queue in self._lines:
            while queue and queue[0][0] <= column_id:
                queue.popleft()
        while self._consts and self._consts[0][0] <= column_id:
            self._consts.popleft()
        if self._frontier is not None and self._frontier[0] <= column_id:
            self._frontier = None

    def clear(self) -> None:
        if not self._ids:
            return
        self.stats["deletes"] += len(self._ids)
        self._ids.clear()
        for queue in self._lines:
            queue.clear()
        self._consts.clear()
        self._frontier = None

    def heads(self) -> tuple[list[tuple[float, float]], float]:
        """Head line ``(slope, intercept)`` of every non-empty facet queue and the top constant."""
        lines = [(s, q[0][1]) for s, q in zip(self._slopes or (), self._lines) if q]
        const = self._consts[0][1] if self._consts else -math.inf
        return lines, const

    def min_query(self, floor_left=None, floor_bottom=None) -> MinPoint:
        if not self._ids:
            raise EmptyEnvelopeError("minimum query on an empty envelope")
        self.stats["queries"] += 1
        const = self._consts[0][1] if self._consts else -math.inf
        for q in self._flat:
            if q and q[0][1] > const:
                const = q[0][1]
        dec = [(s, q[0][1]) for s, q in self._dec if q]
        inc = [(s, q[0][1]) for s, q in self._inc if q]
        lam, value = min_of_split_lines(dec, inc, const)
        return MinPoint(lam, _fold(value, floor_left, floor_bottom))


class ParabolaEnvelope(WitnessEnvelope):
    """Upper envelope of parabolas sharing their quadratic coefficient.

    Subtracting ``a * lam**2`` turns every parabola into the line
    ``b * lam + c``; a :class:`~leash.hull.LineEnvelope` keeps their upper
    envelope, which lists the parabolas on the envelope in the same order.

    The minimum is found by binary search over that order, deciding at each
    parabola from where it meets its neighbours on the envelope relative to
    the vertices of the parabolas involved.  With ``prune`` set, a minimum on
    the crossing of an increasing parabola with a decreasing, newer one
    removes the older parabola and repeats the search; only the value
    returned to the sweep is affected, never the stored order.
    """

    def __init__(self, stats: Counter | None = None, prune: bool = True, seed: int = 0x5EED):
        super().__init__(stats)
        self.prune = prune
        self._a: float | None = None
        self._lines = LineEnvelope(seed)
        self._by_id: dict[int, tuple] = {}

    def column_ids(self) -> list[int]:
        return list(self._by_id)

    @property
    def quadratic(self) -> float | None:
        return self._a

    def insert(self, column_id: int, profile: Parabola) -> None:
        if not isinstance(profile, Parabola):
            raise TypeError("ParabolaEnvelope stores parabola profiles")
        last = next(reversed(self._by_id)) if self._by_id else None
        self._check_order(column_id, last)
        if self._a is None:
            self._a = profile.a
        elif abs(profile.a - self._a) > 1e-9 * (1.0 + self._a):
            raise ValueError("parabolas of one row must share the quadratic coefficient")
        line = (profile.b, profile.c, column_id)
        self._lines.insert(line)
        self._by_id[column_id] = line
        self.stats["inserts"] += 1

    def _delete(self, column_id: int) -> None:
        self._lines.delete(self._by_id.pop(column_id))
        self.stats["deletes"] += 1

    def remove_up_to(self, column_id: int) -> None:
        while self._by_id:
            first = next(iter(self._by_id))
            if first > column_id:
                break
            self._delete(first)

    def clear(self) -> None:
        if not self._by_id:
            return
        self.stats["deletes"] += len(self._by_id)
        self._by_id.clear()
        self._lines.clear()

    def hull_minimum(self):
        """Unconstrained minimum of the parabola envelope.

        Returns ``(lam, parabolas)`` where ``parabolas`` is either the single
        parabola at whose vertex the minimum lies, or the pair
        ``(decreasing, increasing)`` meeting there.
        """
        hull = self._lines.hull
        a = self._a
        lo, hi = 0, len(hull) - 1
        while lo <= hi:
            k = (lo + hi) // 2
            p = hull[k]
            p_star = -p[0] / (2 * a)
            if k > 0:
                left = hull[k - 1]
                x = crossing(left, p)
                if x >= p_star:
                    if x <= -left[0] / (2 * a):
                        return x, (left, p)
                    hi = k - 1
                    continue
            if k < len(hull) - 1:
                right = hull[k + 1]
                x = crossing(p, right)
                if x <= p_star:
                    if x >= -right[0] / (2 * a):
                        return x, (p, right)
                    lo = k + 1
                    continue
            return p_star, (p,)
        # only reachable through rounding on near-degenerate input
        return self._scan_minimum(hull, a)

    @staticmethod
    def _scan_minimum(hull, a):
        best = None
        for k, p in enumerate(hull):
            cands = [-p[0] / (2 * a)]
            if k > 0:
                cands.append(crossing(hull[k - 1], p))
            for x in cands:
                v = a * x * x + value_at(hull, x)
                if best is None or v < best[0]:
                    best = (v, x, (p,))
        return best[1], best[2]

    def min_query(self, floor_left=None, floor_bottom=None) -> MinPoint:
        if not self._by_id:
            raise EmptyEnvelopeError("minimum query on an empty envelope")
        self.stats["queries"] += 1
        a = self._a
        while True:
            hull = self._lines.hull
            if a <= 0:
                # zero-length segment: every profile is constant
                lam = 0.0
                break
            lam, parabolas = self.hull_minimum()
            if 0.0 <= lam <= 1.0 and len(parabolas) == 2 and self.prune:
                dec, inc = parabolas
                strict = lam < -dec[0] / (2 * a) and lam > -inc[0] / (2 * a)
                if strict and inc[2] < dec[2]:
                    self._delete(inc[2])
                    self.stats["prunes"] += 1
                    continue
            lam = min(max(lam, 0.0), 1.0)
            break
        line = hull[active_index(hull, lam)]
        value = (a * lam + line[0]) * lam + line[1]
        return MinPoint(lam, _fold(value, floor_left, floor_bottom))


def make_envelope(metric: Metric, stats: Counter | None = None, **kwargs) -> WitnessEnvelope:
    if metric.is_polyhedral:
        return FacetListEnvelope(stats)
    return ParabolaEnvelope(stats, **kwargs)
