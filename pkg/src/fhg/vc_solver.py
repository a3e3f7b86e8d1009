"""Utilitarian welfare for graphs with a small vertex cover.

Some optimal structure has at most ``tau + 1`` coalitions. For each coalition
count ``b``, each size vector and each assignment of the cover ``S``, the
vertices outside ``S`` (an independent set) only interact with cover vertices,
so placing them is a max k-bin packing with unit items.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

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

DEFAULT_TAU_CAP = 12
_INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class VertexCover:
    cover: tuple[int, ...]

    @property
    def tau(self) -> int:
        return len(self.cover)


def _covers(adj: dict[int, set[int]], k: int, taken: frozenset, out: list) -> None:
    """Collect covers of size <= k reachable by take-v / take-N(v) branching."""
    live = [v for v in adj if v not in taken and any(u not in taken for u in adj[v])]
    if not live:
        out.append(tuple(sorted(taken)))
        return
    if k <= 0:
        return
    v = max(live, key=lambda x: (sum(1 for u in adj[x] if u not in taken), -x))
    nb = frozenset(u for u in adj[v] if u not in taken)
    _covers(adj, k - 1, taken | {v}, out)
    if len(nb) <= k:
        _covers(adj, k - len(nb), taken | nb, out)


def min_vertex_cover(g: WeightedGraph, cap: int = DEFAULT_TAU_CAP) -> VertexCover:
    """Minimum vertex cover; lexicographically smallest among those the branching finds."""
    adj = {v: set(g.neighbors(v)) for v in range(g.n) if g.degree(v)}
    for k in range(cap + 1):
        found: list = []
        _covers(adj, k, frozenset(), found)
        if found:
            best = min(c for c in found if len(c) == min(len(x) for x in found))
            return VertexCover(best)
    raise SizeCapError(f"vertex cover number exceeds the cap {cap}")


def is_vertex_cover(g: WeightedGraph, cover: Sequence[int]) -> bool:
    s = set(cover)
    return all(u in s or v in s for u, v in g.edges)


@dataclass(frozen=True)
class BinPackingInstance:
    """Unit items; ``values[i][j]`` is the gain of item ``i`` in bin ``j``."""

    values: tuple[tuple[Fraction, ...], ...]
    capacities: tuple[int, ...]

    def __init__(self, values, capacities):
        object.__setattr__(self, "values", tuple(tuple(Fraction(x) for x in row) for row in values))
        object.__setattr__(self, "capacities", tuple(int(c) for c in capacities))
        k = len(self.capacities)
        if any(len(row) != k for row in self.values):
            raise DomainError("every item needs one value per bin")
        if any(c < 0 for c in self.capacities):
            raise DomainError("capacities must be nonnegative")

    @property
    def n_items(self) -> int:
        return len(self.values)

    @property
    def k(self) -> int:
        return len(self.capacities)


def _pack(vals, caps):
    """Run the packing kernel on an integer value matrix; ``(best, assignment)``."""
    n_items, k = vals.shape
    strides = np.ones(k, dtype=np.int64)
    for j in range(1, k):
        strides[j] = strides[j - 1] * (caps[j - 1] + 1)
    n_states = int(strides[-1] * (caps[-1] + 1)) if k else 1
    obj = vals.dtype == object
    dp = kernels.empty_like_values((n_items + 1, n_states), vals.dtype)
    choice = np.zeros((n_items + 1, n_states), dtype=np.int64)
    if obj:
        bound = sum(abs(x) for x in vals.flat) + 1
        neg = -bound
        fn = pure(kernels.bin_packing_table)
    else:
        neg = -_INT64_SAFE
        fn = kernels.bin_packing_table
    best = fn(vals, np.asarray(caps, dtype=np.int64), strides, dp, choice, neg)
    assign = [0] * n_items
    st = n_states - 1
    for i in range(n_items, 0, -1):
        j = int(choice[i, st])
        assign[i - 1] = j
        st -= int(strides[j])
    return best, assign


def max_k_bin_packing(inst: BinPackingInstance) -> tuple[Fraction, tuple[int, ...]]:
    """Best total value with bin ``j`` holding exactly ``capacities[j]`` items."""
    if sum(inst.capacities) != inst.n_items:
        raise DomainError("capacities must add up to the number of items")
    if inst.n_items == 0:
        return Fraction(0), ()
    den = 1
    for row in inst.values:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in inst.values]
    big = max(abs(x) for row in ints for x in row) * inst.n_items
    dtype = np.int64 if big < _INT64_SAFE // 4 else object
    vals = kernels.empty_like_values((inst.n_items, inst.k), dtype)
    for i, row in enumerate(ints):
        for j, x in enumerate(row):
            vals[i, j] = x
    best, assign = _pack(vals, inst.capacities)
    return Fraction(int(best), den), tuple(assign)


def _size_vectors(n: int, b: int, reduced: bool):
    if not reduced:
        for cut in itertools.combinations(range(1, n), b - 1):
            edges = (0,) + cut + (n,)
            yield tuple(edges[i + 1] - edges[i] for i in range(b))
        return

    def rec(left, parts, lo):
        if parts == 1:
            if left >= lo:
                yield (left,)
            return
        for x in range(lo, left // parts + 1):
            for rest in rec(left - x, parts - 1, x):
                yield (x,) + rest

    yield from rec(n, b, 1)


def _cover_assignments(sizes, tau: int, reduced: bool):
    """Assignments of the cover to bins that respect the sizes.

    With ``reduced`` set, bins of equal size are interchangeable, so a bin is
    opened only after the previous bin of the same size.
    """
    b = len(sizes)
    same_as_prev = [j > 0 and reduced and sizes[j] == sizes[j - 1] for j in range(b)]
    load = [0] * b
    assign = [0] * tau

    def rec(x):
        if x == tau:
            yield tuple(assign), tuple(load)
            return
        for j in range(b):
            if load[j] == sizes[j] or (same_as_prev[j] and load[j - 1] == 0):
                continue
            assign[x] = j
            load[j] += 1
            yield from rec(x + 1)
            load[j] -= 1

    yield from rec(0)


def solve_vc_utilitarian(
    g: WeightedGraph,
    tau_cap: int = DEFAULT_TAU_CAP,
    *,
    symmetry_reduction: bool = True,
    cover: Sequence[int] | None = None,
) -> WelfareReport:
    """Exact maximum utilitarian welfare in time polynomial for fixed ``tau``."""
    n = g.n
    if n == 0:
        return WelfareReport("utilitarian", Fraction(0), CoalitionStructure([], 0), "vertexcover")
    if cover is None:
        cover = min_vertex_cover(g, tau_cap).cover
    elif not is_vertex_cover(g, cover):
        raise DomainError("supplied set is not a vertex cover")
    S = list(cover)
    tau = len(S)
    in_s = set(S)
    rest = [v for v in range(n) if v not in in_s]
    D, iw = integer_weights(g)
    w = {}
    for (u, v), x in iw.items():
        w[u, v] = w[v, u] = x
    L = lcm_range(n)
    wmax = max((abs(x) for x in iw.values()), default=0)
    dtype = np.int64 if 2 * n * n * max(wmax, 1) * L < _INT64_SAFE // 4 else object
    # edges from each independent vertex into the cover
    links = {v: [(S.index(u), w[v, u]) for u in g.neighbors(v)] for v in rest}

    best = None
    for b in range(1, min(tau + 1, n) + 1):
        for sizes in _size_vectors(n, b, symmetry_reduction):
            sc = [L // s for s in sizes]
            for assign, load in _cover_assignments(sizes, tau, symmetry_reduction):
                caps = [sizes[j] - load[j] for j in range(b)]
                inner = 0
                for x in range(tau):
                    for y in range(x + 1, tau):
                        if assign[x] == assign[y]:
                            inner += 2 * w.get((S[x], S[y]), 0) * sc[assign[x]]
                vals = kernels.empty_like_values((len(rest), b), dtype)
                for i, v in enumerate(rest):
                    for si, x in links[v]:
                        j = assign[si]
                        vals[i, j] += 2 * x * sc[j]
                if rest:
                    packed, place = _pack(vals, caps)
                else:
                    packed, place = 0, []
                total = inner + int(packed)
                if best is None or total > best[0]:
                    best = (total, assign, place)
    total, assign, place = best
    labels = [0] * n
    for x, v in enumerate(S):
        labels[v] = assign[x]
    for i, v in enumerate(rest):
        labels[v] = place[i]
    return WelfareReport("utilitarian", Fraction(total, L * D), CoalitionStructure.from_labels(labels), "vertexcover")
