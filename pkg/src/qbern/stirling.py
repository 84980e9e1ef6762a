"""Stirling numbers and the step-lambda falling factorial."""
from __future__ import annotations

import threading

from .exactcore import RatFunc, one

__all__ = ["StirlingTable", "s1", "s2", "falling_step", "bell"]


class StirlingTable:
    """Memoized triangles of signed first-kind and second-kind Stirling numbers.

    Rows are appended under a lock, so readers only ever see complete rows.
    Asking for ``(n, k)`` fills every row up to ``n``.
    """

    def __init__(self):
        self._s1 = [[1]]
        self._s2 = [[1]]
        self._lock = threading.Lock()

    def _grow(self, n: int) -> None:
        with self._lock:
            while len(self._s1) <= n:
                m = len(self._s1) - 1
                prev1, prev2 = self._s1[m], self._s2[m]
                row1 = [0] * (m + 2)
                row2 = [0] * (m + 2)
                for k in range(1, m + 2):
                    up = prev1[k - 1]
                    same = prev1[k] if k <= m else 0
                    row1[k] = up - m * same
                    up = prev2[k - 1]
                    same = prev2[k] if k <= m else 0
                    row2[k] = k * same + up
                self._s1.append(row1)
                self._s2.append(row2)

    def s1(self, n: int, k: int) -> int:
        if n < 0 or k < 0:
            raise ValueError("Stirling indices must be nonnegative")
        if k > n:
            return 0
        if n >= len(self._s1):
            self._grow(n)
        return self._s1[n][k]

    def s2(self, n: int, k: int) -> int:
        if n < 0 or k < 0:
            raise ValueError("Stirling indices must be nonnegative")
        if k > n:
            return 0
        if n >= len(self._s2):
            self._grow(n)
        return self._s2[n][k]

    def rows(self) -> int:
        return len(self._s1)


_TABLE = StirlingTable()


def s1(n: int, k: int) -> int:
    """Signed Stirling number of the first kind: ``(x)_n = sum_k s1(n, k) x**k``."""
    return _TABLE.s1(n, k)


def s2(n: int, k: int) -> int:
    """Stirling number of the second kind."""
    return _TABLE.s2(n, k)


def bell(n: int) -> int:
    """Bell number via the Bell triangle (independent of :func:`s2`)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def falling_step(z: RatFunc, n: int, step: RatFunc) -> RatFunc:
    """``z (z - step) (z - 2 step) ... (z - (n-1) step)``; 1 when ``n == 0``."""
    if n < 0:
        raise ValueError("falling_step needs n >= 0")
    result = one
    for k in range(n):
        result = result * (z - step * k)
    return result
