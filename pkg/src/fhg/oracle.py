"""Brute-force ground truth over all coalition structures.

The search itself is the ``best_partition`` kernel; this module scales the
graph to integers, splits the enumeration into restricted-growth prefixes when
several workers are requested, and converts the winner back to exact
rationals. Ties always resolve to the partition that comes first in
restricted-growth order, whatever the number of workers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import kernels
from ._jit import pure
from .core import (
    CoalitionStructure,
    DomainError,
    SizeCapError,
    WeightedGraph,
    WelfareReport,
    integer_weights,
    lcm_range,
)

DEFAULT_CAP = 12
_INT64_SAFE = 2 ** 62


class PartitionIterator:
    """Restricted growth strings of length ``n`` in lexicographic order.

    Each yielded tuple labels vertex ``v`` with the index of its block, blocks
    numbered by first appearance, so every set partition appears exactly once.
    """

    def __init__(self, n: int):
        if n < 0:
            raise DomainError("n must be nonnegative")
        self.n = n

    def __iter__(self):
        n = self.n
        if n == 0:
            yield ()
            return
        a = [0] * n
        mx = [0] * n  # mx[i] = max(a[:i]) for i >= 1
        while True:
            yield tuple(a)
            i = n - 1
            while i > 0 and a[i] > mx[i]:
                i -= 1
            if i == 0:
                return
            a[i] += 1
            for j in range(i + 1, n):
                a[j] = 0
                mx[j] = max(mx[j - 1], a[j - 1])


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("FHG_JOBS", "1") or 1)
    return max(1, int(jobs))


def _prefixes(length: int):
    return list(PartitionIterator(length))


class _Scaled:
    """Integer view of a graph for the enumeration kernel."""

    def __init__(self, g: WeightedGraph):
        n = g.n
        self.denom, iw = integer_weights(g)
        self.L = lcm_range(n)
        wmax = max((abs(w) for w in iw.values()), default=0)
        bound = 2 * n * n * max(wmax, 1) * self.L
        self.dtype = np.int64 if bound < _INT64_SAFE else object
        self.W = kernels.empty_like_values((n, n), self.dtype)
        self.A = np.zeros((n, n), dtype=np.uint8)
        for (u, v), w in iw.items():
            self.W[u, v] = self.W[v, u] = w
            self.A[u, v] = self.A[v, u] = 1
        self.sc = kernels.empty_like_values(n + 1, self.dtype)
        for k in range(1, n + 1):
            self.sc[k] = self.L // k
        self.n = n

    def run(self, objective, restrict_cs, max_blocks, tie, prefix):
        n = self.n
        fn = kernels.best_partition
        if self.dtype == object:
            fn = pure(fn)
        a = np.full(n, -1, dtype=np.int64)
        mx = np.zeros(n + 1, dtype=np.int64)
        bs = np.zeros(n, dtype=np.int64)
        be = np.zeros(n, dtype=np.int64)
        deg = np.zeros(n, dtype=np.int64)
        bw = kernels.empty_like_values(n, self.dtype)
        s = kernels.empty_like_values(n, self.dtype)
        best = np.zeros(n, dtype=np.int64)
        found, val = fn(self.W, self.A, self.sc, objective, restrict_cs, max_blocks,
                        tie[0], tie[1], np.asarray(prefix, dtype=np.int64),
                        a, mx, bw, bs, be, s, deg, best)
        if not found:
            return None
        return int(val), tuple(int(x) for x in best)


def search(
    g: WeightedGraph,
    objective: str = "utilitarian",
    *,
    clique_star_only: bool = False,
    max_blocks: int | None = None,
    together: tuple[int, int] | None = None,
    cap: int = DEFAULT_CAP,
    jobs: int | None = None,
) -> tuple[Fraction, CoalitionStructure] | None:
    """Best coalition structure under optional restrictions, or ``None`` if none qualifies.

    ``together`` forces two vertices into the same coalition; ``max_blocks``
    bounds the number of coalitions; ``clique_star_only`` keeps partitions in
    which every coalition induces a complete graph or a star.
    """
    if objective not in ("utilitarian", "egalitarian"):
        raise DomainError(f"unknown objective {objective!r}")
    n = g.n
    if n > cap:
        raise SizeCapError(f"brute force refuses n={n} above cap {cap}")
    if n == 0:
        return Fraction(0), CoalitionStructure([], 0)
    tie = (-1, -1)
    if together is not None:
        x, y = sorted(together)
        if x == y:
            together = None
        else:
            tie = (x, y)
    mb = 0 if max_blocks is None else int(max_blocks)
    if max_blocks is not None and mb < 1:
        return None
    obj = 0 if objective == "utilitarian" else 1
    scaled = _Scaled(g)
    workers = _jobs(jobs)
    if workers == 1:
        prefixes = [()]
    else:
        prefixes = _prefixes(min(n, 4))
        prefixes = [p for p in prefixes if not mb or max(p) < mb]
        if tie[1] >= 0 and tie[1] < len(prefixes[0]):
            prefixes = [p for p in prefixes if p[tie[0]] == p[tie[1]]]
    run = lambda p: scaled.run(obj, clique_star_only, mb, tie, p)  # noqa: E731
    if workers == 1 or len(prefixes) == 1:
        results = [run(p) for p in prefixes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, prefixes))
    best = None
    for res in results:  # prefixes are in restricted-growth order
        if res is not None and (best is None or res[0] > best[0]):
            best = res
    if best is None:
        return None
    value = Fraction(best[0], scaled.L * scaled.denom)
    return value, CoalitionStructure.from_labels(best[1])


def brute_force_max_utilitarian(g: WeightedGraph, cap: int = DEFAULT_CAP, jobs: int | None = None) -> WelfareReport:
    value, part = search(g, "utilitarian", cap=cap, jobs=jobs)
    return WelfareReport("utilitarian", value, part, "brute")


def brute_force_max_egalitarian(g: WeightedGraph, cap: int = DEFAULT_CAP, jobs: int | None = None) -> WelfareReport:
    value, part = search(g, "egalitarian", cap=cap, jobs=jobs)
    return WelfareReport("egalitarian", value, part, "brute")


def brute_force_clique_star_only(g: WeightedGraph, cap: int = DEFAULT_CAP, jobs: int | None = None) -> Fraction:
    # all-singletons always qualifies, so a result exists
    value, _ = search(g, "utilitarian", clique_star_only=True, cap=cap, jobs=jobs)
    return value
