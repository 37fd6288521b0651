"""Fully dynamic upper envelope of lines.

Lines are ``(slope, intercept, key)`` tuples.  They live in a treap ordered
by slope; every treap node caches the upper envelope of its subtree as an
immutable tuple of lines in left-to-right order.  A node's envelope is the
prefix of its left child's envelope up to the bridge followed by a suffix of
the right child's, so updates rebuild only the nodes on one root path and
never need to recover lines that were hidden below a deleted one.

Immutable tuples play the part of concatenable queues: split and
concatenate are slices.  Bridges are found by nested binary search.
"""

from __future__ import annotations

import random

__all__ = ["LineEnvelope", "crossing", "value_at", "active_index"]


def crossing(left, right) -> float:
    """Abscissa where two lines meet; ``right`` must have the larger slope."""
    return (left[1] - right[1]) / (right[0] - left[0])


def active_index(env, x: float) -> int:
    """Index of the envelope line attaining the maximum at ``x``."""
    lo, hi = 0, len(env) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if crossing(env[mid], env[mid + 1]) >= x:
            hi = mid
        else:
            lo = mid + 1
    return lo


def value_at(env, x: float) -> float:
    line = env[active_index(env, x)]
    return line[0] * x + line[1]


def _redundant(l, m, r) -> bool:
    # m contributes nothing if it is not strictly above where l and r meet
    x = crossing(l, r)
    return m[0] * x + m[1] <= l[0] * x + l[1]


def _bridge(A: tuple, B: tuple) -> tuple:
    """Upper envelope of two envelopes where every line of A sorts before B.

    With ``D = A - B`` non-increasing, A keeps the lines where ``D > 0`` and
    B the lines where ``D <= 0``; identical lines therefore resolve to B.
    """
    if not A:
        return B
    if not B:
        return A
    if not A[0][0] < B[0][0]:
        # equal slopes throughout and A is not higher
        return B
    lo, hi = 1, len(A)
    while lo < hi:
        mid = (lo + hi) // 2
        x = crossing(A[mid - 1], A[mid])
        if A[mid][0] * x + A[mid][1] > value_at(B, x):
            lo = mid + 1
        else:
            hi = mid
    keep_a = lo
    lo, hi = 0, len(B) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        x = crossing(B[mid], B[mid + 1])
        if value_at(A, x) <= B[mid][0] * x + B[mid][1]:
            hi = mid
        else:
            lo = mid + 1
    left = list(A[:keep_a])
    right = list(B[lo:])
    # rounding can leave a non-convex junction; repair it locally
    while True:
        if len(left) >= 2 and _redundant(left[-2], left[-1], right[0]):
            left.pop()
        elif len(right) >= 2 and _redundant(left[-1], right[0], right[1]):
            right.pop(0)
        else:
            break
    return tuple(left) + tuple(right)


class _Node:
    __slots__ = ("line", "prio", "left", "right", "env")

    def __init__(self, line, prio, left, right):
        self.line = line
        self.prio = prio
        self.left = left
        self.right = right
        env = (line,)
        if left is not None:
            env = _bridge(left.env, env)
        if right is not None:
            env = _bridge(env, right.env)
        self.env = env


def _split(t, key):
    """Split into lines ``< key`` and lines ``>= key``."""
    if t is None:
        return None, None
    if t.line < key:
        lo, hi = _split(t.right, key)
        return _Node(t.line, t.prio, t.left, lo), hi
    lo, hi = _split(t.left, key)
    return lo, _Node(t.line, t.prio, hi, t.right)


def _merge(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.prio > b.prio:
        return _Node(a.line, a.prio, a.left, _merge(a.right, b))
    return _Node(b.line, b.prio, _merge(a, b.left), b.right)


def _insert(t, line, prio):
    if t is None:
        return _Node(line, prio, None, None)
    if prio > t.prio:
        lo, hi = _split(t, line)
        return _Node(line, prio, lo, hi)
    if line < t.line:
        return _Node(t.line, t.prio, _insert(t.left, line, prio), t.right)
    return _Node(t.line, t.prio, t.left, _insert(t.right, line, prio))


def _delete(t, line):
    if t is None:
        raise KeyError(line)
    if t.line == line:
        return _merge(t.left, t.right)
    if line < t.line:
        return _Node(t.line, t.prio, _delete(t.left, line), t.right)
    return _Node(t.line, t.prio, t.left, _delete(t.right, line))


class LineEnvelope:
    """Upper envelope of a dynamic set of lines.

    ``insert`` and ``delete`` take ``O(log n)`` treap nodes, each rebuilt with
    two bridge searches of ``O(log^2 n)``; ``hull`` is available in ``O(1)``.

    >>> env = LineEnvelope()
    >>> env.insert((-1.0, 0.0, "a")); env.insert((1.0, 0.0, "b")); env.insert((0.0, -1.0, "c"))
    >>> [line[2] for line in env.hull]
    ['a', 'b']
    """

    def __init__(self, seed: int = 0x5EED):
        self._root = None
        self._size = 0
        self._rng = random.Random(seed)

    def __len__(self):
        return self._size

    @property
    def hull(self) -> tuple:
        """Envelope lines, ordered by slope (left to right along the axis)."""
        return () if self._root is None else self._root.env

    def insert(self, line) -> None:
        self._root = _insert(self._root, tuple(line), self._rng.random())
        self._size += 1

    def delete(self, line) -> None:
        self._root = _delete(self._root, tuple(line))
        self._size -= 1

    def clear(self) -> None:
        self._root = None
        self._size = 0
