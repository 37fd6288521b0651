"""The distance terrain, drawn in the terminal.

Every point (s, t) of the parameter square pairs P(s) with Q(t); its height
is their distance.  A walk is a path from the lower-left to the upper-right
corner moving only up and right, and the Fréchet distance is the lowest
possible maximum height along such a path.  Cells at or below that height
are drawn solid.
"""

import numpy as np

from leash import Metric, PolygonalCurve, frechet_distance
from leash.geometry import pairwise_distances

P = PolygonalCurve([(0, 0), (2, 1), (4, 0), (6, 1)])
Q = PolygonalCurve([(0, 1), (3, 2), (6, 0)])
metric = Metric.euclidean_squared()
leash = frechet_distance(P, Q, metric).value

res = 48
s = np.linspace(0, P.segments, res)
t = np.linspace(0, Q.segments, res // 2)
height = pairwise_distances(metric, np.array([P(x) for x in s]), np.array([Q(y) for y in t]))

shades = " .:-=+*%"
top = height.max()
print(f"Fréchet distance {leash:.4f}; '#' marks heights at or below it")
for row in range(len(t) - 1, -1, -1):
    line = ""
    for col in range(res):
        h = height[col, row]
        line += "#" if h <= leash else shades[min(len(shades) - 1, int(h / top * len(shades)))]
    print(line)
