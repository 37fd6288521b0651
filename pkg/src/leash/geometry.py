"""Curves, convex distance functions and per-boundary distance profiles.

A cell boundary of the distance terrain fixes one vertex ``p`` of one curve
and walks along one segment of the other curve.  The height along that
boundary, ``lam -> delta(p, (1 - lam) * start + lam * end)`` for
``lam`` in ``[0, 1]``, is what the sweep consumes.  For the squared
Euclidean distance it is a parabola; for polyhedral distances it is the
maximum of one line per facet of the unit ball.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "MetricKind",
    "Metric",
    "PolygonalCurve",
    "BoundaryProfile",
    "Parabola",
    "PiecewiseLinear",
    "as_point",
    "eval_metric",
    "curve_eval",
    "boundary_profile",
    "lift_to_polygon_metric",
    "polygon_sides_for_epsilon",
    "polygon_normals",
    "track_profiles",
    "grid_profiles",
    "vertical_profiles",
    "horizontal_profiles",
    "point_profiles",
    "pairwise_distances",
    "min_of_lines",
    "min_of_split_lines",
]


def as_point(coords) -> np.ndarray:
    """Validate a coordinate sequence and return it as a float array."""
    p = np.asarray(coords, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError(f"a point needs d >= 1 coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


class PolygonalCurve:
    """Piecewise-linear curve through an explicit vertex list.

    The curve is parameterized over ``[0, m]`` for ``m`` segments, with
    ``curve(i + lam) = (1 - lam) * v[i] + lam * v[i + 1]``.  A single vertex
    is stored as one zero-length segment so every curve has ``m >= 1``.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("a curve needs at least one vertex with d >= 1 coordinates")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve vertices must be finite")
        if v.shape[0] == 1:
            v = np.vstack([v, v])
        v.setflags(write=False)
        self.vertices = v

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def segments(self) -> int:
        return self.vertices.shape[0] - 1

    def __len__(self):
        return self.vertices.shape[0]

    def __call__(self, t: float) -> np.ndarray:
        return curve_eval(self, t)

    def __repr__(self):
        return f"PolygonalCurve(segments={self.segments}, d={self.dimension})"

    def scaled(self, s: float) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices * s)

    def reversed(self) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices[::-1])


def curve_eval(curve: PolygonalCurve, t: float) -> np.ndarray:
    m = curve.segments
    if not (0.0 <= t <= m):
        raise ValueError(f"parameter {t} outside [0, {m}]")
    i = min(int(math.floor(t)), m - 1)
    lam = t - i
    v = curve.vertices
    return (1.0 - lam) * v[i] + lam * v[i + 1]


# --------------------------------------------------------------------------
# metrics


class MetricKind(enum.Enum):
    EUCLIDEAN_SQUARED = "euclidean"
    L1 = "l1"
    LINF = "linf"
    POLYTOPE = "polytope"
    POLYGON_LIFT = "polygon"


@dataclass(frozen=True)
class Metric:
    """A symmetric convex distance function.

    Polyhedral metrics are given by facet normals ``w`` of the unit ball, so
    that ``delta(p, q) = max_w <w, q - p>``.  ``L1`` and ``LINF`` build their
    normals for whatever dimension they are used in.  ``POLYGON_LIFT`` is not
    a point metric: it measures each point/segment pair with a circumscribed
    regular ``k``-gon in the plane spanned by the pair.
    """

    kind: MetricKind
    facets: np.ndarray | None = field(default=None, compare=False)
    sides: int = 0

    @classmethod
    def euclidean_squared(cls) -> "Metric":
        return cls(MetricKind.EUCLIDEAN_SQUARED)

    @classmethod
    def l1(cls) -> "Metric":
        return cls(MetricKind.L1)

    @classmethod
    def linf(cls) -> "Metric":
        return cls(MetricKind.LINF)

    @classmethod
    def polytope(cls, normals) -> "Metric":
        w = np.array(normals, dtype=float)
        if w.ndim != 2 or w.shape[0] < 2:
            raise ValueError("a polytope metric needs a (k, d) array of facet normals")
        if not np.all(np.isfinite(w)):
            raise ValueError("facet normals must be finite")
        for row in w:
            if not np.any(np.all(np.abs(w + row) <= 1e-12 * (1 + np.abs(row)), axis=1)):
                raise ValueError("facet set must be closed under negation (asymmetric metric)")
        # the unit ball is bounded iff the normals positively span R^d
        if np.linalg.matrix_rank(w) < w.shape[1]:
            raise ValueError("facet normals do not span R^d; unit ball is unbounded")
        w.setflags(write=False)
        return cls(MetricKind.POLYTOPE, facets=w)

    @classmethod
    def polygon(cls, k: int) -> "Metric":
        if int(k) != k or k < 3:
            raise ValueError(f"a regular polygon needs k >= 3 sides, got {k}")
        return cls(MetricKind.POLYGON_LIFT, sides=int(k))

    @property
    def is_polyhedral(self) -> bool:
        return self.kind is not MetricKind.EUCLIDEAN_SQUARED

    @property
    def is_point_metric(self) -> bool:
        return self.kind is not MetricKind.POLYGON_LIFT

    def normals(self, d: int) -> np.ndarray:
        """Facet normals of the unit ball in ``R^d``."""
        if self.kind is MetricKind.L1:
            return _l1_normals(d)
        if self.kind is MetricKind.LINF:
            return _linf_normals(d)
        if self.kind is MetricKind.POLYTOPE:
            if self.facets.shape[1] != d:
                raise ValueError(
                    f"polytope metric lives in R^{self.facets.shape[1]}, points in R^{d}"
                )
            return self.facets
        raise ValueError(f"{self.kind.value} metric has no fixed facet normals")

    def label(self) -> str:
        if self.kind is MetricKind.POLYGON_LIFT:
            return f"polygon:{self.sides}"
        if self.kind is MetricKind.POLYTOPE:
            return f"polytope[{self.facets.shape[0]}]"
        return self.kind.value

    def __repr__(self):
        return f"Metric({self.label()})"


_NORMAL_CACHE: dict = {}


def _l1_normals(d: int) -> np.ndarray:
    key = ("l1", d)
    if key not in _NORMAL_CACHE:
        w = np.array(list(itertools.product((-1.0, 1.0), repeat=d)))
        w.setflags(write=False)
        _NORMAL_CACHE[key] = w
    return _NORMAL_CACHE[key]


def _linf_normals(d: int) -> np.ndarray:
    key = ("linf", d)
    if key not in _NORMAL_CACHE:
        eye = np.eye(d)
        w = np.vstack([eye, -eye])
        w.setflags(write=False)
        _NORMAL_CACHE[key] = w
    return _NORMAL_CACHE[key]


def polygon_normals(k: int) -> np.ndarray:
    """Unit facet normals of the regular k-gon circumscribing the unit circle.

    Column 0 is the component along the segment direction, column 1 the
    component orthogonal to it.  One normal points along ``+v`` so the
    corresponding side is parallel to the segment.
    """
    key = ("polygon", k)
    if key not in _NORMAL_CACHE:
        theta = math.pi / 2 + 2 * math.pi * np.arange(k) / k
        w = np.column_stack([np.cos(theta), np.sin(theta)])
        # exact zeros keep slopes of the side parallel to the segment at 0
        w[np.abs(w) < 1e-15] = 0.0
        w.setflags(write=False)
        _NORMAL_CACHE[key] = w
    return _NORMAL_CACHE[key]


def polygon_sides_for_epsilon(eps: float) -> int:
    """Fewest sides k >= 3 with ``1 / cos(pi / k) <= 1 + eps``."""
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    bound = 1.0 + eps
    k = max(3, math.ceil(math.pi / math.acos(1.0 / bound)))
    # guard the closed form against rounding at exact integers
    while k > 3 and 1.0 / math.cos(math.pi / (k - 1)) <= bound:
        k -= 1
    while 1.0 / math.cos(math.pi / k) > bound:
        k += 1
    return k


def eval_metric(metric: Metric, p, q) -> float:
    """``delta(p, q)`` for a point metric."""
    p = as_point(p)
    q = as_point(q)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.size} vs {q.size}")
    z = q - p
    kind = metric.kind
    if kind is MetricKind.EUCLIDEAN_SQUARED:
        return float(z @ z)
    if kind is MetricKind.L1:
        return float(np.abs(z).sum())
    if kind is MetricKind.LINF:
        return float(np.abs(z).max())
    if kind is MetricKind.POLYTOPE:
        return float((metric.normals(z.size) @ z).max())
    raise ValueError("the polygon metric is defined per point/segment pair; use boundary_profile")


def pairwise_distances(metric: Metric, A, B) -> np.ndarray:
    """Matrix of ``delta(A[i], B[j])`` in native units (Euclidean, not squared)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    z = B[None, :, :] - A[:, None, :]
    kind = metric.kind
    if kind is MetricKind.EUCLIDEAN_SQUARED:
        return np.sqrt(np.einsum("ijk,ijk->ij", z, z))
    if kind is MetricKind.L1:
        return np.abs(z).sum(axis=2)
    if kind is MetricKind.LINF:
        return np.abs(z).max(axis=2)
    if kind is MetricKind.POLYTOPE:
        return (z @ metric.normals(A.shape[1]).T).max(axis=2)
    raise ValueError("the polygon metric is defined per point/segment pair, not between points")


# --------------------------------------------------------------------------
# profiles


def min_of_lines(slopes, intercepts, floor: float = -math.inf) -> tuple[float, float]:
    """Minimize ``max(floor, max_l slopes[l] * lam + intercepts[l])`` on [0, 1].

    Returns ``(lam, value)``.  Decreasing and increasing lines meet where the
    running maximum bottoms out; its height is the largest pairwise crossing.
    """
    const = floor
    dec = []
    inc = []
    for s, c in zip(slopes, intercepts):
        if s < 0:
            dec.append((s, c))
        elif s > 0:
            inc.append((s, c))
        elif c > const:
            const = c
    return min_of_split_lines(dec, inc, const)


def min_of_split_lines(dec, inc, const: float) -> tuple[float, float]:
    """``min_of_lines`` for lines already split into decreasing and increasing ``(s, c)`` pairs."""
    if not dec:
        top = max([c for _, c in inc], default=-math.inf)
        return 0.0, (top if top > const else const)
    if not inc:
        top = max([s + c for s, c in dec])
        return 1.0, (top if top > const else const)
    d0 = max([c for _, c in dec])
    i0 = max([c for _, c in inc])
    if d0 <= i0:
        return 0.0, (i0 if i0 > const else const)
    d1 = max([s + c for s, c in dec])
    i1 = max([s + c for s, c in inc])
    if d1 >= i1:
        return 1.0, (d1 if d1 > const else const)
    v = -math.inf
    for sn, cn in dec:
        for sp, cp in inc:
            y = sp * (cn - cp) / (sp - sn) + cp
            if y > v:
                v = y
    lam = max([(v - cn) / sn for sn, cn in dec])
    lam = 0.0 if lam < 0.0 else (1.0 if lam > 1.0 else lam)
    return lam, (v if v > const else const)


class BoundaryProfile:
    """Height of the terrain along one cell boundary, ``lam`` in [0, 1]."""

    __slots__ = ()

    def raw(self, lam):
        raise NotImplementedError

    @property
    def minimum(self) -> tuple[float, float]:
        """``(argmin, min)`` of the raw profile on [0, 1]."""
        raise NotImplementedError

    def __call__(self, lam):
        if not self.truncated:
            return self.raw(lam)
        lam_star, low = self.minimum
        lam_arr = np.asarray(lam, dtype=float)
        out = np.where(lam_arr <= lam_star, self.raw(np.minimum(lam_arr, lam_star)), low)
        return float(out) if out.ndim == 0 else out

    def truncate(self):
        return self._replace(truncated=True)


class _ParabolaFields(NamedTuple):
    a: float
    b: float
    c: float
    truncated: bool = False


class Parabola(_ParabolaFields, BoundaryProfile):
    """``a * lam**2 + b * lam + c`` with ``a >= 0``."""

    __slots__ = ()

    def raw(self, lam):
        lam = np.asarray(lam, dtype=float) if not isinstance(lam, float) else lam
        out = (self.a * lam + self.b) * lam + self.c
        return float(out) if np.ndim(out) == 0 else out

    @property
    def minimum(self) -> tuple[float, float]:
        if self.a > 0:
            lam = -self.b / (2 * self.a)
            lam = 0.0 if lam <= 0.0 else (1.0 if lam > 1.0 else lam)
        else:
            lam = 0.0 if self.b >= 0 else 1.0
        return lam, (self.a * lam + self.b) * lam + self.c


class _PiecewiseLinearFields(NamedTuple):
    slopes: tuple
    intercepts: tuple
    truncated: bool = False
    min_point: tuple | None = None


class PiecewiseLinear(_PiecewiseLinearFields, BoundaryProfile):
    """Upper envelope of one line per facet: ``max_l slopes[l] * lam + intercepts[l]``.

    ``min_point`` caches ``(argmin, min)`` when the producer already knows it.
    Profiles are immutable tuples, cheap to build in bulk.
    """

    __slots__ = ()

    def raw(self, lam):
        s = np.asarray(self.slopes)
        c = np.asarray(self.intercepts)
        lam_arr = np.asarray(lam, dtype=float)
        out = np.max(np.multiply.outer(lam_arr, s) + c, axis=-1)
        return float(out) if out.ndim == 0 else out

    @property
    def minimum(self) -> tuple[float, float]:
        if self.min_point is not None:
            return self.min_point
        return min_of_lines(self.slopes, self.intercepts)

    def pieces(self) -> tuple[list[float], list[int]]:
        """Breakpoints in [0, 1] and the facet active on each piece, left to right."""
        s, c = self.slopes, self.intercepts
        active = max(range(len(s)), key=lambda l: (c[l], s[l]))
        breaks, order = [0.0], [active]
        while True:
            nxt, at = None, 1.0
            for l in range(len(s)):
                if s[l] <= s[active]:
                    continue
                x = (c[active] - c[l]) / (s[l] - s[active])
                if x < at or (x == at and nxt is not None and s[l] > s[nxt]):
                    nxt, at = l, x
            if nxt is None:
                break
            active = nxt
            breaks.append(max(at, breaks[-1]))
            order.append(active)
        breaks.append(1.0)
        return breaks, order


def _check_dims(*pts):
    d = pts[0].size
    for p in pts[1:]:
        if p.size != d:
            raise ValueError(f"dimension mismatch: {d} vs {p.size}")
    return d


def boundary_profile(metric: Metric, p, seg_start, seg_end) -> BoundaryProfile:
    """Profile of ``lam -> delta(p, (1 - lam) * seg_start + lam * seg_end)``."""
    p, s0, s1 = as_point(p), as_point(seg_start), as_point(seg_end)
    _check_dims(p, s0, s1)
    if metric.kind is MetricKind.POLYGON_LIFT:
        return lift_to_polygon_metric(p, s0, s1, metric.sides)
    return track_profiles(metric, p[None, :], s0, s1)[0]


def _plane_coordinates(points: np.ndarray, s0: np.ndarray, s1: np.ndarray):
    """Along-segment offset, orthogonal distance and segment length, row-wise.

    For a zero-length segment the reference direction is the first standard
    basis vector; any direction gives a valid in-plane measurement.
    """
    ell = s1 - s0
    length = np.sqrt(np.einsum("ij,ij->i", ell, ell))
    axis = np.zeros_like(ell)
    nz = length > 0
    axis[nz] = ell[nz] / length[nz, None]
    axis[~nz, 0] = 1.0
    rel = s0 - points
    u0 = np.einsum("ij,ij->i", rel, axis)
    perp = rel - u0[:, None] * axis
    h = np.sqrt(np.einsum("ij,ij->i", perp, perp))
    return u0, h, length


def lift_to_polygon_metric(p, seg_start, seg_end, k: int) -> PiecewiseLinear:
    """Profile of a point against a segment under a circumscribed regular k-gon.

    The pair spans a plane (when collinear, the segment direction together
    with the first basis vector not parallel to it).  In that plane the
    point/segment offset is ``(u0 + lam * |l|, h)`` with ``h >= 0``; the
    k-gon has a side parallel to the segment, so every facet contributes a
    line whose slope depends only on the segment.
    """
    if int(k) != k or k < 3:
        raise ValueError(f"a regular polygon needs k >= 3 sides, got {k}")
    p, s0, s1 = as_point(p), as_point(seg_start), as_point(seg_end)
    d = _check_dims(p, s0, s1)
    if d < 2:
        raise ValueError("the polygon lift needs points in R^d with d >= 2")
    return track_profiles(Metric.polygon(int(k)), p[None, :], s0, s1)[0]


def _line_minima(slopes: np.ndarray, icpt: np.ndarray):
    """Exact min over [0, 1] of ``max_l slopes[:, l] * lam + icpt[:, l]`` per row.

    Candidates are the endpoints and every pairwise crossing of lines.
    """
    n, k = icpt.shape
    cands = [np.zeros(n), np.ones(n)]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for a in range(k):
            for b in range(a + 1, k):
                ds = slopes[:, b] - slopes[:, a]
                x = np.where(ds != 0, (icpt[:, a] - icpt[:, b]) / ds, 0.0)
                cands.append(np.clip(np.nan_to_num(x), 0.0, 1.0))
    lam = np.stack(cands, axis=1)  # (n, C)
    vals = np.max(lam[:, :, None] * slopes[:, None, :] + icpt[:, None, :], axis=2)
    best = np.argmin(vals, axis=1)
    rows = np.arange(n)
    return lam[rows, best], vals[rows, best]


def _bulk_profiles(metric: Metric, pts: np.ndarray, s0: np.ndarray, s1: np.ndarray,
                   group: int | None = None):
    """Row-wise profiles of ``pts[r]`` against segment ``s0[r] -> s1[r]``.

    ``group`` promises that consecutive blocks of that many rows share their
    segment, so polyhedral profiles in a block can share one slope tuple.
    """
    if pts.shape != s0.shape or s0.shape != s1.shape:
        raise ValueError("dimension mismatch between points and segments")
    ell = s1 - s0
    kind = metric.kind
    if kind is MetricKind.EUCLIDEAN_SQUARED:
        rel = s0 - pts
        a = np.einsum("ij,ij->i", ell, ell)
        b = 2.0 * np.einsum("ij,ij->i", rel, ell)
        c = np.einsum("ij,ij->i", rel, rel)
        return [Parabola(*abc) for abc in zip(a.tolist(), b.tolist(), c.tolist())]
    if kind is MetricKind.POLYGON_LIFT:
        if pts.shape[1] < 2:
            raise ValueError("the polygon lift needs points in R^d with d >= 2")
        w = polygon_normals(metric.sides)
        u0, h, length = _plane_coordinates(pts, s0, s1)
        slopes = np.outer(length, w[:, 0])
        icpt = np.outer(u0, w[:, 0]) + np.outer(h, w[:, 1])
    elif kind in (MetricKind.L1, MetricKind.LINF, MetricKind.POLYTOPE):
        w = metric.normals(pts.shape[1])
        slopes = ell @ w.T
        icpt = (s0 - pts) @ w.T
    else:  # pragma: no cover
        raise ValueError(f"unsupported metric kind {kind}")
    lam, low = _line_minima(slopes, icpt)
    if group:
        rows = []
        for start, shared in zip(range(0, len(slopes), group), map(tuple, slopes[::group].tolist())):
            rows += [shared] * min(group, len(slopes) - start)
    else:
        rows = list(map(tuple, slopes.tolist()))
    return [
        PiecewiseLinear(s, c, False, mp)
        for s, c, mp in zip(rows, map(tuple, icpt.tolist()), zip(lam.tolist(), low.tolist()))
    ]


def track_profiles(metric: Metric, points, seg_start, seg_end) -> list[BoundaryProfile]:
    """Profiles of many points against one segment.

    All profiles of one row (or column) of the terrain share the segment, so
    parabolas share their quadratic coefficient and polyhedral profiles share
    their per-facet slopes.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    s0 = np.broadcast_to(np.asarray(seg_start, dtype=float), pts.shape)
    s1 = np.broadcast_to(np.asarray(seg_end, dtype=float), pts.shape)
    return _bulk_profiles(metric, pts, s0, s1, group=len(pts))


def point_profiles(metric: Metric, point, seg_starts, seg_ends) -> list[BoundaryProfile]:
    """Profiles of one point against many segments."""
    s0 = np.atleast_2d(np.asarray(seg_starts, dtype=float))
    s1 = np.atleast_2d(np.asarray(seg_ends, dtype=float))
    pts = np.broadcast_to(np.asarray(point, dtype=float), s0.shape)
    return _bulk_profiles(metric, pts, s0, s1)


def vertical_profiles(metric: Metric, vertices: np.ndarray, seg_vertices: np.ndarray):
    """``out[j][x]``: vertex ``x`` of one curve along segment ``j`` of the other."""
    m1, d = vertices.shape
    r = len(seg_vertices) - 1
    pts = np.broadcast_to(vertices, (r, m1, d)).reshape(-1, d)
    s0 = np.repeat(seg_vertices[:-1], m1, axis=0)
    s1 = np.repeat(seg_vertices[1:], m1, axis=0)
    flat = _bulk_profiles(metric, pts, s0, s1, group=m1)
    return [flat[j * m1:(j + 1) * m1] for j in range(r)]


def horizontal_profiles(metric: Metric, seg_vertices: np.ndarray, vertices: np.ndarray):
    """``out[y][i]``: vertex ``y`` of one curve along segment ``i`` of the other."""
    n1, d = vertices.shape
    m = len(seg_vertices) - 1
    # segment-major, so each block of rows shares its segment
    pts = np.broadcast_to(vertices, (m, n1, d)).reshape(-1, d)
    s0 = np.repeat(seg_vertices[:-1], n1, axis=0)
    s1 = np.repeat(seg_vertices[1:], n1, axis=0)
    flat = _bulk_profiles(metric, pts, s0, s1, group=n1)
    return [flat[y::n1] for y in range(n1)]


def grid_profiles(metric: Metric, P: PolygonalCurve, Q: PolygonalCurve):
    """Profiles of every cell boundary of the terrain of ``P`` (columns) and ``Q`` (rows).

    Returns ``(vertical, horizontal)`` with ``vertical[j][x]`` the profile of
    vertex ``P[x]`` along segment ``j`` of ``Q`` and ``horizontal[y][i]`` the
    profile of vertex ``Q[y]`` along segment ``i`` of ``P``.
    """
    pv, qv = P.vertices, Q.vertices
    if pv.shape[1] != qv.shape[1]:
        raise ValueError(f"dimension mismatch: {pv.shape[1]} vs {qv.shape[1]}")
    return vertical_profiles(metric, pv, qv), horizontal_profiles(metric, pv, qv)
