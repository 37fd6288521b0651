"""Reference computations that do not share code paths with the sweep.

``decide`` answers "is there a bimonotone path of height at most eps" by
propagating reachable intervals along cell boundaries (free-space
diagram).  ``frechet_by_bisection`` bisects on it.  ``discrete_frechet``
is the vertex-coupling dynamic program on subdivided curves, an upper bound
that converges from above.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import (
    BoundaryProfile,
    Metric,
    MetricKind,
    Parabola,
    PiecewiseLinear,
    PolygonalCurve,
    grid_profiles,
    pairwise_distances,
)

__all__ = [
    "PAD",
    "boundary_feasible_interval",
    "FreeSpace",
    "decide",
    "frechet_by_bisection",
    "discrete_frechet",
]

PAD = 1e-12


def _clip_interval(lo, hi):
    lo = max(lo, 0.0)
    hi = min(hi, 1.0)
    return (lo, hi) if lo <= hi else None


def boundary_feasible_interval(profile: BoundaryProfile, eps: float):
    """``{lam in [0, 1] : profile(lam) <= eps}`` as ``(lo, hi)``, or ``None``.

    >>> boundary_feasible_interval(Parabola(4.0, 0.0, 1.0), 5.0)
    (0.0, 1.0)
    """
    if isinstance(profile, Parabola):
        a, b, c = profile.a, profile.b, profile.c
        if a <= 0:
            if b == 0:
                iv = (0.0, 1.0) if c <= eps else None
            elif b > 0:
                iv = _clip_interval(0.0, (eps - c) / b)
            else:
                iv = _clip_interval((eps - c) / b, 1.0)
        else:
            disc = b * b - 4.0 * a * (c - eps)
            if disc < 0:
                return None
            root = math.sqrt(disc)
            # stable quadratic roots
            q = -0.5 * (b + math.copysign(root, b))
            r1 = q / a
            r2 = (c - eps) / q if q != 0 else r1
            iv = _clip_interval(min(r1, r2), max(r1, r2))
    elif isinstance(profile, PiecewiseLinear):
        lo, hi = 0.0, 1.0
        for s, c in zip(profile.slopes, profile.intercepts):
            if s > 0:
                hi = min(hi, (eps - c) / s)
            elif s < 0:
                lo = max(lo, (eps - c) / s)
            elif c > eps:
                return None
        iv = (lo, hi) if lo <= hi else None
    else:
        raise TypeError(f"unsupported profile {type(profile).__name__}")
    if iv is None or not profile.truncated:
        return iv
    # running minimum stays at or below eps from the first feasible point on
    return (iv[0], 1.0)


def _profile_arrays(profiles):
    """Coefficient arrays of a flat list of same-kind profiles."""
    if isinstance(profiles[0], Parabola):
        abc = np.array([(p.a, p.b, p.c) for p in profiles], dtype=float)
        return "parabola", abc
    slopes = np.array([p.slopes for p in profiles], dtype=float)
    icpt = np.array([p.intercepts for p in profiles], dtype=float)
    return "lines", (slopes, icpt)


def _feasible_arrays(kind, coef, eps: float):
    """Vectorized ``boundary_feasible_interval`` for untruncated profiles: ``(lo, hi, ok)``."""
    if kind == "parabola":
        a, b, c = coef[:, 0], coef[:, 1], coef[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = b * b - 4.0 * a * (c - eps)
            root = np.sqrt(np.maximum(disc, 0.0))
            q = -0.5 * (b + np.where(b >= 0, root, -root))
            r1 = q / a
            r2 = np.where(q != 0, (c - eps) / q, r1)
            lo = np.maximum(np.minimum(r1, r2), 0.0)
            hi = np.minimum(np.maximum(r1, r2), 1.0)
        ok = (a > 0) & (disc >= 0) & (lo <= hi)
        flat = a <= 0  # zero-length segment: constant profile
        lo = np.where(flat, 0.0, lo)
        hi = np.where(flat, 1.0, hi)
        ok = np.where(flat, c <= eps, ok)
        return lo, hi, ok
    slopes, icpt = coef
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (eps - icpt) / slopes
    lo = np.max(np.where(slopes < 0, t, 0.0), axis=1, initial=0.0)
    hi = np.min(np.where(slopes > 0, t, 1.0), axis=1, initial=1.0)
    ok = (lo <= hi) & ~np.any((slopes == 0) & (icpt > eps), axis=1)
    return lo, hi, ok


class FreeSpace:
    """Boundary profiles of a curve pair, prepared once for repeated decisions.

    Vertical boundary ``(x, j)`` pairs vertex ``P[x]`` with segment ``j`` of
    ``Q``; horizontal boundary ``(i, y)`` pairs vertex ``Q[y]`` with segment
    ``i`` of ``P``.
    """

    def __init__(self, P: PolygonalCurve, Q: PolygonalCurve, metric: Metric):
        if P.dimension != Q.dimension:
            raise ValueError(f"dimension mismatch: {P.dimension} vs {Q.dimension}")
        self.metric = metric
        self.m, self.r = m, r = P.segments, Q.segments
        self.vert, self.horiz = grid_profiles(metric, P, Q)
        self.start = max(self.vert[0][0].raw(0.0), self.horiz[0][0].raw(0.0))
        self.end = max(self.vert[r - 1][m].raw(1.0), self.horiz[r][m - 1].raw(1.0))
        self._vkind, self._vcoef = _profile_arrays([p for row in self.vert for p in row])
        self._hkind, self._hcoef = _profile_arrays([p for row in self.horiz for p in row])

    def feasible_intervals(self, eps: float):
        """Free intervals of all boundaries at height ``eps``.

        Returns ``(vertical, horizontal)`` shaped like ``vert`` and ``horiz``,
        with ``None`` for boundaries that are nowhere free.
        """
        m, r = self.m, self.r
        out = []
        for kind, coef, width in ((self._vkind, self._vcoef, m + 1), (self._hkind, self._hcoef, m)):
            lo, hi, ok = _feasible_arrays(kind, coef, eps)
            flat = [(a, b) if f else None for a, b, f in zip(lo.tolist(), hi.tolist(), ok.tolist())]
            out.append([flat[k:k + width] for k in range(0, len(flat), width)])
        return out[0], out[1]

    def corner_heights(self) -> list[float]:
        """Heights at every vertex/segment endpoint pairing."""
        out = [p.raw(0.0) for row in self.vert for p in row]
        out += [p.raw(1.0) for row in self.vert for p in row]
        out += [p.raw(0.0) for row in self.horiz for p in row]
        out += [p.raw(1.0) for row in self.horiz for p in row]
        return [float(v) for v in out]

    def decide(self, eps: float) -> bool:
        if self.start > eps or self.end > eps:
            return False
        m, r = self.m, self.r
        vert_free, horiz_free = self.feasible_intervals(eps)
        # reachable intervals on the current row's vertical boundaries and on
        # the horizontal boundaries below the current row.  The outer edges
        # are entered only through the start corner; moving along them is the
        # limit of paths crossing the interior boundaries near their ends.
        below = [(0.0, 0.0)] + [None] * (m - 1)
        for j in range(r):
            vert = vert_free[j]
            left = (0.0, 0.0) if j == 0 else None
            above = []
            top_row = horiz_free[j + 1]
            for i in range(m):
                bottom = below[i]
                right_free = vert[i + 1]
                top_free = top_row[i]
                # right boundary
                if right_free is None or (bottom is None and left is None):
                    right = None
                elif bottom is not None:
                    right = right_free
                else:
                    lo = max(right_free[0], left[0])
                    right = (lo, right_free[1]) if lo <= right_free[1] + PAD else None
                # top boundary
                if top_free is None or (bottom is None and left is None):
                    top = None
                elif left is not None:
                    top = top_free
                else:
                    lo = max(top_free[0], bottom[0])
                    top = (lo, top_free[1]) if lo <= top_free[1] + PAD else None
                above.append(top)
                left = right
            below = above
        # from either last boundary the path follows the outer edge to the end
        return left is not None or below[m - 1] is not None

    def bracket(self) -> tuple[float, float]:
        return self.start if self.start > self.end else self.end, max(self.corner_heights())


def _prep(P, Q):
    P = P if isinstance(P, PolygonalCurve) else PolygonalCurve(P)
    Q = Q if isinstance(Q, PolygonalCurve) else PolygonalCurve(Q)
    return P, Q


def decide(P, Q, metric: Metric, eps: float) -> bool:
    """Whether a bimonotone path of terrain height at most ``eps`` joins the corners.

    ``eps`` is in the metric's own units (squared for squared Euclidean).
    """
    P, Q = _prep(P, Q)
    return FreeSpace(P, Q, metric).decide(eps)


def frechet_by_bisection(P, Q, metric: Metric, rel_tol: float = 1e-9) -> float:
    """Fréchet distance by bisection on ``decide``.

    The bracket runs from the larger endpoint distance to the largest
    vertex/vertex distance.  Squared Euclidean results are square-rooted
    like the sweep's.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    P, Q = _prep(P, Q)
    space = FreeSpace(P, Q, metric)
    lo, hi = space.bracket()
    if space.decide(lo):
        hi = lo
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if space.decide(mid):
            hi = mid
        else:
            lo = mid
    value = 0.5 * (lo + hi)
    if metric.kind is MetricKind.EUCLIDEAN_SQUARED:
        value = math.sqrt(value)
    return value


def _subdivide(vertices: np.ndarray, refinement: int) -> np.ndarray:
    t = np.arange(refinement) / refinement
    a, b = vertices[:-1], vertices[1:]
    pts = a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]
    return np.vstack([pts.reshape(-1, vertices.shape[1]), vertices[-1:]])


def discrete_frechet(P, Q, metric: Metric, refinement: int = 1) -> float:
    """Discrete Fréchet distance after splitting every segment into ``refinement`` parts.

    Squared Euclidean is reported in Euclidean units.
    """
    if int(refinement) != refinement or refinement < 1:
        raise ValueError("refinement must be a positive integer")
    P, Q = _prep(P, Q)
    if P.dimension != Q.dimension:
        raise ValueError(f"dimension mismatch: {P.dimension} vs {Q.dimension}")
    A = _subdivide(P.vertices, int(refinement))
    B = _subdivide(Q.vertices, int(refinement))
    if not metric.is_point_metric:
        raise ValueError("discrete Fréchet needs a point metric")
    dist = pairwise_distances(metric, A, B)
    ca = np.empty_like(dist)
    ca[0] = np.maximum.accumulate(dist[0])
    for i in range(1, dist.shape[0]):
        prev = ca[i - 1]
        row = dist[i]
        cur = ca[i]
        cur[0] = max(prev[0], row[0])
        # min over (i-1, j), (i-1, j-1) is vectorizable; (i, j-1) is a scan
        diag = np.maximum(np.minimum(prev[1:], prev[:-1]), row[1:])
        for j in range(1, dist.shape[1]):
            v = max(cur[j - 1], row[j])
            cur[j] = diag[j - 1] if diag[j - 1] < v else v
    return float(ca[-1, -1])
