import numpy as np
import pytest

from leash.hull import LineEnvelope, active_index, crossing, value_at


def brute_max(lines, x):
    return max(s * x + c for s, c, _ in lines)


def test_crossing_and_value_at():
    env = ((-1.0, 0.0, "a"), (1.0, 0.0, "b"))
    assert crossing(*env) == 0.0
    assert value_at(env, -2.0) == 2.0
    assert active_index(env, 3.0) == 1


def test_parallel_lines_keep_the_higher():
    env = LineEnvelope()
    env.insert((1.0, 0.0, 1))
    env.insert((1.0, 2.0, 2))
    env.insert((1.0, 1.0, 3))
    assert [line[2] for line in env.hull] == [2]


def test_random_insert_delete_against_brute_force(rng):
    env = LineEnvelope(seed=3)
    live = []
    xs = np.linspace(-20, 20, 81)
    for step in range(600):
        if live and rng.uniform() < 0.4:
            line = live.pop(int(rng.integers(len(live))))
            env.delete(line)
        else:
            # integer coefficients provoke ties, parallels and concurrent lines
            line = (float(rng.integers(-4, 5)), float(rng.integers(-6, 7)), step)
            live.append(line)
            env.insert(line)
        assert len(env) == len(live)
        if not live:
            assert env.hull == ()
            continue
        hull = env.hull
        slopes = [line[0] for line in hull]
        assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
        for x in xs:
            assert value_at(hull, x) == pytest.approx(brute_max(live, x), abs=1e-9)


def test_every_hull_line_appears_on_the_envelope(rng):
    env = LineEnvelope()
    for k in range(50):
        env.insert((float(rng.normal()), float(rng.normal()), k))
    hull = env.hull
    for k in range(1, len(hull) - 1):
        # strictly above the crossing of its neighbours
        x = crossing(hull[k - 1], hull[k + 1])
        assert hull[k][0] * x + hull[k][1] > hull[k - 1][0] * x + hull[k - 1][1]


def test_delete_missing_line_raises():
    env = LineEnvelope()
    env.insert((1.0, 1.0, 0))
    with pytest.raises(KeyError):
        env.delete((2.0, 2.0, 1))


def test_clear():
    env = LineEnvelope()
    env.insert((1.0, 1.0, 0))
    env.clear()
    assert env.hull == () and len(env) == 0
