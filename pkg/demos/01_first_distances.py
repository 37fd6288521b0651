"""Fréchet distances of two tiny curve pairs under every built-in metric.

A man walks along one curve, his dog along the other, both only forward.
The Fréchet distance is the shortest leash that lets them finish.  For two
parallel unit-spaced segments that leash is 1; when the dog's path bumps up
to a peak, the leash must reach over it.
"""

from leash import Metric, frechet_by_bisection, frechet_distance

parallel = ([(0, 0), (2, 0)], [(0, 1), (2, 1)])
peak = ([(0, 0), (2, 0)], [(0, 1), (1, 2), (2, 1)])

metrics = {
    "euclidean": Metric.euclidean_squared(),
    "l1": Metric.l1(),
    "linf": Metric.linf(),
    "polygon:16": Metric.polygon(16),
}

print(f"{'metric':<12} {'parallel':>10} {'peak':>10}")
for name, metric in metrics.items():
    a = frechet_distance(*parallel, metric).value
    b = frechet_distance(*peak, metric).value
    print(f"{name:<12} {a:>10.6f} {b:>10.6f}")

# the sweep is exact; an independent bisection on the free-space decision agrees
for name in ("euclidean", "l1", "linf"):
    sweep = frechet_distance(*peak, metrics[name]).value
    bisect = frechet_by_bisection(*peak, metrics[name])
    print(f"{name}: sweep {sweep!r}, bisection {bisect!r}")
