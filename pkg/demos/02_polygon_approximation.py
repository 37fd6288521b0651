"""Approximating the Euclidean distance with regular-polygon metrics.

A regular k-gon circumscribing the unit circle defines a polyhedral norm
that never exceeds the Euclidean one and is at most a factor
1/cos(pi/k) smaller.  Picking k from the target accuracy turns the
polyhedral sweep into a (1 + eps)-approximation.

Each polygon is anchored to a side parallel to the segment it measures
against, so neighbouring side counts can pin the same critical event and
report the same value.
"""

import time

import numpy as np

from leash import frechet_distance, frechet_distance_approx, polygon_sides_for_epsilon

# a random walk and a jittered copy, so the value comes from the interior
# of the walk rather than from the endpoints
rng = np.random.default_rng(7)
P = np.cumsum(rng.normal(size=(200, 2)), axis=0)
Q = P + np.cumsum(rng.normal(scale=0.3, size=(200, 2)), axis=0) * np.hanning(200)[:, None]

t0 = time.perf_counter()
exact = frechet_distance(P, Q).value
print(f"exact euclidean: {exact:.6f}  ({time.perf_counter() - t0:.2f} s)")

print(f"{'eps':>6} {'sides':>5} {'value':>10} {'exact/value - 1':>16} {'seconds':>8}")
for eps in (1.0, 0.5, 0.1, 0.05, 0.01):
    res = frechet_distance_approx(P, Q, eps)
    print(f"{eps:>6} {polygon_sides_for_epsilon(eps):>5} {res.value:>10.6f} "
          f"{exact / res.value - 1:>16.2e} {res.elapsed:>8.2f}")
