from collections import Counter

import numpy as np
import pytest
from helpers import random_track_profiles, envelope_value, reference_minimum, run_operation_sequence

from leash import (
    EmptyEnvelopeError,
    FacetListEnvelope,
    Metric,
    Parabola,
    ParabolaEnvelope,
    PiecewiseLinear,
    make_envelope,
)
from leash.geometry import track_profiles


def lines(slopes, intercepts):
    return PiecewiseLinear(tuple(float(s) for s in slopes), tuple(float(c) for c in intercepts))


# ------------------------------------------------------------------ parabolas


def test_single_parabola_minimum():
    env = ParabolaEnvelope()
    env.insert(1, Parabola(4.0, 0.0, 1.0))
    assert env.min_query() == (0.0, 1.0)


def test_floor_lifts_the_value():
    env = ParabolaEnvelope()
    env.insert(1, Parabola(4.0, 0.0, 1.0))
    lam, value = env.min_query(floor_bottom=2.0)
    assert value == 2.0
    assert 4 * lam * lam + 1 <= 2.0
    assert env.min_query(floor_left=3.0, floor_bottom=2.0).value == 3.0


def test_crossing_of_two_parabolas():
    env = ParabolaEnvelope(prune=False)
    env.insert(1, Parabola(4.0, 0.0, 1.0))
    env.insert(2, Parabola(4.0, -8.0, 4.0))  # 4 (lam - 1)^2
    lam, value = env.min_query()
    assert lam == pytest.approx(3 / 8, abs=1e-12)
    assert value == pytest.approx(4 * (3 / 8) ** 2 + 1, abs=1e-12)


def test_older_decreasing_newer_increasing_is_kept_by_pruning():
    env = ParabolaEnvelope(prune=True)
    env.insert(1, Parabola(4.0, -8.0, 4.0))
    env.insert(2, Parabola(4.0, 0.0, 1.0))
    assert env.min_query().lam == pytest.approx(3 / 8, abs=1e-12)
    assert env.stats["prunes"] == 0


def test_pruning_drops_an_older_increasing_parabola():
    # the newer decreasing parabola outlives it, so the sweep never needs it again
    stats = Counter()
    env = ParabolaEnvelope(stats, prune=True)
    env.insert(1, Parabola(4.0, 0.0, 1.0))
    env.insert(2, Parabola(4.0, -8.0, 4.0))
    lam, value = env.min_query()
    assert (lam, value) == (1.0, 0.0)
    assert stats["prunes"] == 1 and env.column_ids() == [2]


def test_ten_random_parabolas_with_floors(rng):
    for _ in range(50):
        a = float(rng.uniform(0.1, 20))
        env = ParabolaEnvelope(prune=False)
        profs = []
        for k in range(10):
            p = Parabola(a, float(rng.uniform(-3 * a, a)), float(rng.uniform(0, 5)))
            env.insert(k, p)
            profs.append((p, False))
        floors = tuple(float(x) for x in rng.uniform(0, 6, size=2))
        lam, value = env.min_query(*floors)
        _, ref = reference_minimum(profs, floors)
        assert value == pytest.approx(ref, abs=1e-6)
        assert envelope_value(profs, floors, lam) == pytest.approx(value, abs=1e-9)


def test_zero_length_segment_gives_constant_profiles():
    env = ParabolaEnvelope()
    env.insert(0, Parabola(0.0, 0.0, 2.0))
    env.insert(1, Parabola(0.0, 0.0, 3.0))
    assert env.min_query() == (0.0, 3.0)


def test_mismatched_quadratic_rejected():
    env = ParabolaEnvelope()
    env.insert(0, Parabola(1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        env.insert(1, Parabola(2.0, 0.0, 0.0))


# ------------------------------------------------------------------ facet lists


def test_negative_parallel_line_queues_behind_a_higher_head():
    env = FacetListEnvelope()
    env.insert(1, lines([-1.0], [2.0]))
    env.insert(2, lines([-1.0], [1.0]))
    assert env.heads()[0] == [(-1.0, 2.0)]
    env.remove_up_to(1)
    assert env.heads()[0] == [(-1.0, 1.0)]


def test_higher_newer_line_evicts_lower_older_ones():
    env = FacetListEnvelope()
    env.insert(1, lines([-1.0], [1.0]))
    env.insert(2, lines([-1.0], [2.0]))
    assert env.heads()[0] == [(-1.0, 2.0)]
    env.remove_up_to(1)
    assert env.heads()[0] == [(-1.0, 2.0)]


def test_rising_line_is_replaced_once_its_profile_is_truncated():
    env = FacetListEnvelope()
    env.insert(1, lines([1.0], [2.0]))
    env.insert(2, lines([1.0], [1.0]))
    heads, const = env.heads()
    assert heads == [(1.0, 1.0)]
    assert const == 2.0
    assert env.min_query().value == 2.0


def test_remove_up_to_and_empty_queries():
    env = FacetListEnvelope()
    for k in range(1, 5):
        env.insert(k, lines([-1.0, 1.0], [k, -k]))
    env.remove_up_to(2)
    assert env.column_ids() == [3, 4]
    env.remove_up_to(10)
    assert len(env) == 0
    with pytest.raises(EmptyEnvelopeError):
        env.min_query()


def test_mismatched_slopes_rejected():
    env = FacetListEnvelope()
    env.insert(0, lines([-1.0, 1.0], [0.0, 0.0]))
    with pytest.raises(ValueError):
        env.insert(1, lines([-2.0, 1.0], [0.0, 0.0]))


@pytest.mark.parametrize("make", [FacetListEnvelope, lambda: ParabolaEnvelope(prune=False)])
def test_clear_and_order(make):
    env = make()
    prof = lines([-1.0, 1.0], [1.0, 0.0]) if isinstance(env, FacetListEnvelope) else Parabola(1.0, -1.0, 1.0)
    env.clear()  # clearing an empty envelope is harmless
    env.insert(3, prof)
    with pytest.raises(ValueError):
        env.insert(3, prof)
    env.clear()
    env.clear()
    with pytest.raises(EmptyEnvelopeError):
        env.min_query()
    env.insert(1, prof)  # ids restart after a clear
    assert len(env) == 1


def test_type_checks():
    with pytest.raises(TypeError):
        FacetListEnvelope().insert(0, Parabola(1.0, 0.0, 0.0))
    with pytest.raises(TypeError):
        ParabolaEnvelope().insert(0, lines([1.0], [0.0]))


def test_make_envelope_picks_by_metric():
    assert isinstance(make_envelope(Metric.linf()), FacetListEnvelope)
    assert isinstance(make_envelope(Metric.polygon(8)), FacetListEnvelope)
    assert isinstance(make_envelope(Metric.euclidean_squared()), ParabolaEnvelope)


# ------------------------------------------------------------------ random operation sequences


@pytest.mark.parametrize("spec", ["euclidean", "l1", "linf", "polygon:8"])
def test_random_operation_sequences(rng, spec):
    from leash.io import parse_metric

    metric = parse_metric(spec)
    for d in (2, 3):
        for _ in range(4):
            run_operation_sequence(rng, metric, 150, d)


def test_restart_matches_clear_insert_truncate(rng):
    metric = Metric.l1()
    for _ in range(30):
        profs = random_track_profiles(rng, metric, 4, 2)
        a, b = FacetListEnvelope(), FacetListEnvelope()
        for env in (a, b):
            env.insert(0, profs[0])
            env.insert(1, profs[1])
        a.restart(5, profs[2])
        b.clear()
        b.insert(5, profs[2])
        b.truncate(5)
        assert a.heads() == b.heads() and a.column_ids() == b.column_ids()
        a.insert(6, profs[3])
        b.insert(6, profs[3])
        assert a.min_query() == b.min_query()


@pytest.mark.parametrize("make", [FacetListEnvelope, ParabolaEnvelope])
def test_remove_up_to_examples(make):
    env = make()
    prof = (lambda k: lines([-1.0, 1.0], [k, 0.0])) if make is FacetListEnvelope else (lambda k: Parabola(1.0, -1.0, k))
    for k in (1, 2, 3):
        env.insert(k, prof(float(k)))
    env.remove_up_to(0)
    assert env.column_ids() == [1, 2, 3]
    env.remove_up_to(2)
    assert env.column_ids() == [3]
