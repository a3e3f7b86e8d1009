"""Maximum utilitarian welfare by dynamic programming over a nice tree decomposition.

State: the partition of the bag into live coalitions plus, per block, the
coalition size ``n_i`` and internal weight ``m_i`` accumulated so far. The
value of a state is the welfare of the coalitions already closed. Weights are
scaled by their common denominator ``D`` and values by ``L = lcm(1..n)`` so
that the closing term ``2 m / n`` is an integer; the result is exact.
"""
from __future__ import annotations

from fractions import Fraction

from ._tw import TableDP, canonical_labels
from .core import WeightedGraph, WelfareReport
from .treedecomp import NiceTreeDecomposition, nice_decomposition


class TwUtilDP(TableDP):
    """States are ``(labels, ((n_1, m_1), ...))`` with ``m_i`` in units of ``1/D``."""

    empty_state = ((), ())

    def leaf_value(self):
        return 0

    def combine(self, value, contribution):
        return value if contribution is None else value + contribution

    def better(self, a, b):
        return a > b

    def introduce(self, state, bag_old, bag_new, v):
        labels, cnt = state
        nb = len(cnt)
        w = self.w
        gain = [0] * nb
        for j, u in enumerate(bag_old):
            gain[labels[j]] += w.get((u, v), 0)
        where = dict(zip(bag_old, labels))
        for i in range(nb + 1):
            raw = [where[u] if u != v else i for u in bag_new]
            new_labels, old_ids = canonical_labels(raw)
            counts = []
            for b in old_ids:
                if b == nb:
                    counts.append((1, 0))
                elif b == i:
                    counts.append((cnt[b][0] + 1, cnt[b][1] + gain[b]))
                else:
                    counts.append(cnt[b])
            yield (new_labels, tuple(counts)), None

    def forget(self, state, bag_old, bag_new, v):
        labels, cnt = state
        j = bag_old.index(v)
        i = labels[j]
        raw = labels[:j] + labels[j + 1:]
        new_labels, old_ids = canonical_labels(raw)
        counts = tuple(cnt[b] for b in old_ids)
        if i in raw:
            yield (new_labels, counts), None
        else:
            n_i, m_i = cnt[i]
            yield (new_labels, counts), 2 * m_i * (self.L // n_i)

    def join(self, s1, s2, bag):
        labels = s1[0]
        members: list[list[int]] = [[] for _ in s1[1]]
        for j, u in enumerate(bag):
            members[labels[j]].append(u)
        counts = []
        for i, ((n1, m1), (n2, m2)) in enumerate(zip(s1[1], s2[1])):
            counts.append((n1 + n2 - len(members[i]), m1 + m2 - self.bag_weight(members[i])))
        return labels, tuple(counts)

    def check_state(self, state, bag):
        n = self.g.n
        limit = n * n * self.Wmax
        labels, cnt = state
        sizes = [labels.count(i) for i in range(len(cnt))]
        for (n_i, m_i), c in zip(cnt, sizes):
            assert c >= 1 and c <= n_i <= n, f"coalition size {n_i} outside [{c}, {n}]"
            assert abs(m_i) <= limit, f"internal weight {m_i} exceeds n^2 W = {limit}"

    def decode(self, state):
        """Bag blocks with ``(n_i, m_i)`` as exact rationals."""
        labels, cnt = state
        return labels, [(n_i, Fraction(m_i, self.D)) for n_i, m_i in cnt]

    def to_value(self, x) -> Fraction:
        return Fraction(x, self.L * self.D)


def solve_tw_utilitarian(
    g: WeightedGraph,
    ntd: NiceTreeDecomposition | None = None,
    *,
    strategy: str = "min_fill",
    check_bounds: bool = False,
) -> WelfareReport:
    """Exact maximum utilitarian welfare; builds a heuristic decomposition when none is given."""
    if ntd is None:
        ntd = nice_decomposition(g, strategy)
    dp = TwUtilDP(g)
    best = dp.run(ntd, check_bounds=check_bounds)
    return WelfareReport("utilitarian", dp.to_value(best), dp.reconstruct(), "treewidth")
