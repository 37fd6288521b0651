"""Shared instances and generators for the test suite."""

import numpy as np
import pytest

from leash import EmptyEnvelopeError, Metric, ParabolaEnvelope, make_envelope
from leash.geometry import track_profiles

POINT_METRICS = {
    "euclidean": Metric.euclidean_squared(),
    "l1": Metric.l1(),
    "linf": Metric.linf(),
}
ALL_METRICS = dict(POINT_METRICS, **{"polygon:16": Metric.polygon(16)})

PARALLEL = ([(0.0, 0.0), (2.0, 0.0)], [(0.0, 1.0), (2.0, 1.0)])
PEAK = ([(0.0, 0.0), (2.0, 0.0)], [(0.0, 1.0), (1.0, 2.0), (2.0, 1.0)])


def random_pair(rng, max_segments=12, dims=(2, 3), box=10.0, min_segments=1):
    """Two curves with independent segment counts in ``[min_segments, max_segments]``."""
    n, m = rng.integers(min_segments, max_segments + 1, size=2)
    d = int(rng.choice(dims))
    P = rng.uniform(-box, box, size=(n + 1, d))
    Q = rng.uniform(-box, box, size=(m + 1, d))
    return P, Q


def random_curve(rng, segments, d, box=10.0):
    return rng.uniform(-box, box, size=(segments + 1, d))


# ------------------------------------------------------------------ envelope reference


def _pieces(profile, truncated):
    """Quadratic pieces ``(a, b, c)`` whose crossings contain every kink of the profile."""
    from leash import Parabola

    if isinstance(profile, Parabola):
        out = [(profile.a, profile.b, profile.c)]
    else:
        out = [(0.0, s, c) for s, c in zip(profile.slopes, profile.intercepts)]
    if truncated:
        out.append((0.0, 0.0, profile.minimum[1]))
    return out


def _pair_roots(pieces):
    """Every real root of ``p_i - p_j`` over all piece pairs, plus vertices of the differences."""
    P = np.asarray(pieces, dtype=float).reshape(-1, 3)
    iu, ju = np.triu_indices(len(P), k=1)
    a, b, c = (P[iu] - P[ju]).T
    out = []
    lin = (a == 0) & (b != 0)
    out.append(-c[lin] / b[lin])
    q = a != 0
    a, b, c = a[q], b[q], c[q]
    disc = b * b - 4 * a * c
    r = np.sqrt(np.maximum(disc, 0.0))
    out += [(-b - r) / (2 * a), (-b + r) / (2 * a), -b / (2 * a)]
    return np.concatenate(out)


def _evaluate(entries, floors, lam):
    """``max(profiles, floors)`` on an array of ``lam``, stacking what can be stacked."""
    from leash import Parabola

    stack = [(0.0, 0.0, f) for f in floors]
    vals = np.full(lam.shape, -np.inf)
    for prof, trunc in entries:
        if isinstance(prof, Parabola):
            if trunc:
                vals = np.maximum(vals, prof.truncate()(lam))
            else:
                stack.append((prof.a, prof.b, prof.c))
        elif trunc:
            # running minimum of a convex polyline: its falling lines and its minimum
            stack += [(0.0, s, c) for s, c in zip(prof.slopes, prof.intercepts) if s < 0]
            stack.append((0.0, 0.0, prof.minimum[1]))
        else:
            stack += [(0.0, s, c) for s, c in zip(prof.slopes, prof.intercepts)]
    if stack:
        a, b, c = np.asarray(stack, dtype=float).T
        col = lam[:, None]
        M = col * b
        M += c
        if a.any():
            M += col * col * a
        np.maximum(vals, M.max(axis=1), out=vals)
    return vals


def reference_minimum(entries, floors=(), grid=10_000):
    """Minimum of ``max(profiles, floors)`` over [0, 1], by dense scan plus critical points.

    ``entries`` holds ``(profile, truncated)`` pairs.  Returns ``(lam, value)``.
    """
    pieces = [p for prof, trunc in entries for p in _pieces(prof, trunc)]
    pieces += [(0.0, 0.0, f) for f in floors]
    verts = [-b / (2 * a) for a, b, _ in pieces if a > 0]
    extra = np.concatenate([_pair_roots(pieces), verts])
    extra = np.unique(extra[(extra > 0.0) & (extra < 1.0)])
    lam = np.concatenate([np.linspace(0.0, 1.0, grid), extra])
    vals = _evaluate(entries, floors, lam)
    k = int(np.argmin(vals))
    return float(lam[k]), float(vals[k])


def envelope_value(entries, floors, lam):
    """``max(profiles, floors)`` at a single ``lam``."""
    v = max(floors) if floors else -np.inf
    for prof, trunc in entries:
        v = max(v, float(prof.truncate()(lam) if trunc else prof.raw(lam)))
    return v


# ------------------------------------------------------------------ random operation sequences


def random_track_profiles(rng, metric, count, d):
    s0, s1 = rng.uniform(-5, 5, size=(2, d))
    return track_profiles(metric, rng.uniform(-5, 5, size=(count, d)), s0, s1)


def run_operation_sequence(rng, metric, steps, d=2, check=None):
    """Drive one envelope with random operations, checking every query.

    The reference keeps the live profiles: for the facet list the newest is
    full and older ones are truncated, mirroring what the sweep stores.
    Parabolas are all kept full with pruning off.  Returns the number of
    operations performed.
    """
    facets = metric.is_polyhedral
    env = make_envelope(metric) if facets else ParabolaEnvelope(prune=False)
    pool = iter(random_track_profiles(rng, metric, steps + 1, d))
    live = []  # [column_id, profile, truncated]
    next_id = 0
    ops = 0
    for _ in range(steps):
        u = rng.uniform()
        if u < 0.5 or not live:
            prof = next(pool)
            if facets:
                for e in live:
                    e[2] = True
            env.insert(next_id, prof)
            live.append([next_id, prof, False])
            next_id += 1
        elif u < 0.6:
            cid = live[-1][0]
            env.truncate(cid)
            if facets:
                live[-1][2] = True
        elif u < 0.7:
            cut = live[int(rng.integers(len(live)))][0]
            env.remove_up_to(cut)
            live = [e for e in live if e[0] > cut]
        elif u < 0.72:
            env.clear()
            live = []
        elif u < 0.75:
            prof = next(pool)
            env.restart(next_id, prof)
            live = [[next_id, prof, facets]]
            next_id += 1
        else:
            if not live:
                with pytest.raises(EmptyEnvelopeError):
                    env.min_query()
                continue
            floors = tuple(float(x) for x in rng.uniform(0, 12, size=int(rng.integers(0, 3))))
            args = floors + (None,) * (2 - len(floors))
            lam, value = env.min_query(*args)
            entries = [(p, t) for _, p, t in live]
            _, ref = reference_minimum(entries, floors)
            tol = 1e-9 * max(1.0, abs(ref))
            ok = abs(value - ref) <= tol and abs(envelope_value(entries, floors, lam) - value) <= tol
            if check is not None:
                check(ok, value, ref)
            else:
                assert ok, (value, ref)
        ops += 1
        assert env.column_ids() == [e[0] for e in live]
    return ops


# ------------------------------------------------------------------ instrumented sweeps


def trace_violations(P, Q, metric, witness=True):
    """Run the sweep with a trace and check every query against its invariants.

    Checks that deque entries strictly increase, the head never moves
    backwards within a track, and stored ids lie between the head and the
    current boundary.  With ``witness`` set, the returned value must also
    equal the minimum of a directly built witness envelope: the current
    boundary's profile in full, every older boundary past the head
    truncated, floors folded in.  Returns ``(events, problems)``.
    """
    from leash import frechet_distance

    events = []
    frechet_distance(P, Q, metric, trace=events.append)
    heads = {}
    problems = []
    for ev in events:
        where = f"{ev.axis} {ev.track} step {ev.step}"
        if any(a >= b for a, b in zip(ev.entry, ev.entry[1:])):
            problems.append(f"{where}: deque entries not increasing {ev.entry}")
        key = (ev.axis, ev.track)
        if ev.head < heads.get(key, -1):
            problems.append(f"{where}: head moved back to {ev.head}")
        heads[key] = ev.head
        if ev.head != ev.queue[0] or ev.queue[-1] != ev.step:
            problems.append(f"{where}: queue {ev.queue} does not run from head to step")
        ids = range(ev.head + 1, ev.step + 2)
        if not set(ev.live) <= set(ids) or ev.step + 1 not in ev.live:
            problems.append(f"{where}: stored ids {ev.live} outside {list(ids)}")
        if witness:
            entries = [(ev.profiles[b], b != ev.step + 1) for b in ids]
            floors = tuple(f for f in (ev.floor_left, ev.floor_bottom) if f is not None)
            _, ref = reference_minimum(entries, floors)
            if abs(ev.value - ref) > 1e-9 * max(1.0, abs(ref)):
                problems.append(f"{where}: value {ev.value} vs witness envelope {ref}")
    return len(events), problems
