"""Watching the sweep's deque and witness envelope at work.

Each row of the terrain keeps a deque of cells whose entry heights still
matter and an envelope of boundary profiles.  A trace callback receives a
snapshot after every envelope query; here we print the ones for the row
whose deque grew longest, so the head advancing and the deque shrinking
become visible.
"""

import numpy as np

from leash import Metric, frechet_distance

rng = np.random.default_rng(3)
P = np.cumsum(rng.normal(size=(13, 2)), axis=0)
Q = np.cumsum(rng.normal(size=(9, 2)), axis=0)

events = []
res = frechet_distance(P, Q, Metric.linf(), trace=events.append)
print(f"L-infinity Fréchet distance {res.value:.4f}")
print({k: v for k, v in res.stats.items()})

rows = [ev for ev in events if ev.axis == "row"]
row = max(rows, key=lambda ev: len(ev.queue)).track
print(f"\nrow {row} of the sweep:")
print(f"{'cell':>4} {'head':>4} {'deque':<18} {'stored':<18} {'floor':>8} {'value':>8}")
for ev in events:
    if ev.axis == "row" and ev.track == row:
        floor = max(f for f in (ev.floor_left, ev.floor_bottom) if f is not None)
        print(f"{ev.step:>4} {ev.head:>4} {str(list(ev.queue)):<18} {str(list(ev.live)):<18} "
              f"{floor:>8.3f} {ev.value:>8.3f}")
