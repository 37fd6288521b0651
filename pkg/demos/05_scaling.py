"""Quadratic running time in practice.

Doubling the number of segments of both curves should roughly quadruple the
running time: the sweep touches every cell once and the envelope work per
cell is amortized constant for polyhedral metrics.
"""

from leash import Metric
from leash.bench import format_table, run_bench

rows = run_bench([Metric.linf(), Metric.l1(), Metric.euclidean_squared()], sizes=(32, 64, 128, 256), seed=1)
print(format_table(rows))
