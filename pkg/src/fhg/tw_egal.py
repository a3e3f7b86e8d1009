"""Maximum egalitarian welfare by dynamic programming over a nice tree decomposition.

State: bag partition, per block the coalition size ``n_i`` and ``b_i`` (the
smallest final weight sum among the block's already forgotten vertices,
``None`` for +inf), and per bag vertex its running weight sum ``u_j``. The
value of a state is the smallest utility over closed coalitions (``None`` for
+inf while nothing is closed).

When a non-last vertex ``v`` of a block is forgotten its sum is final. The
default rule folds it in with ``b_i = min(b_i, u_v)``. ``strict_guard=True``
instead keeps ``b_i`` and only allows the step when ``u_v >= b_i`` (a block
with ``b_i = +inf`` takes ``u_v``); it is kept for comparison.
"""
from __future__ import annotations

from fractions import Fraction

from ._tw import TableDP, canonical_labels
from .core import WeightedGraph, WelfareReport
from .treedecomp import NiceTreeDecomposition, nice_decomposition


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


class TwEgalDP(TableDP):
    """States are ``(labels, ((n_1, b_1), ...), (u_1, ...))``; sums in units of ``1/D``."""

    empty_state = ((), (), ())

    def __init__(self, g: WeightedGraph, strict_guard: bool = False):
        super().__init__(g)
        self.strict_guard = strict_guard

    def leaf_value(self):
        return None

    def combine(self, value, contribution):
        return _min(value, contribution)

    def better(self, a, b):
        if a is None:
            return b is not None
        return b is not None and a > b

    def introduce(self, state, bag_old, bag_new, v):
        labels, blocks, us = state
        nb = len(blocks)
        w = self.w
        where = dict(zip(bag_old, labels))
        u_of = dict(zip(bag_old, us))
        for i in range(nb + 1):
            raw = [where[u] if u != v else i for u in bag_new]
            new_labels, old_ids = canonical_labels(raw)
            new_us = []
            for u in bag_new:
                if u == v:
                    new_us.append(sum(w.get((v, x), 0) for x in bag_old if where[x] == i))
                elif where[u] == i:
                    new_us.append(u_of[u] + w.get((u, v), 0))
                else:
                    new_us.append(u_of[u])
            new_blocks = []
            for b in old_ids:
                if b == nb:
                    new_blocks.append((1, None))
                elif b == i:
                    new_blocks.append((blocks[b][0] + 1, blocks[b][1]))
                else:
                    new_blocks.append(blocks[b])
            yield (new_labels, tuple(new_blocks), tuple(new_us)), None

    def forget(self, state, bag_old, bag_new, v):
        labels, blocks, us = state
        j = bag_old.index(v)
        i = labels[j]
        u_v = us[j]
        raw = labels[:j] + labels[j + 1:]
        new_us = us[:j] + us[j + 1:]
        new_labels, old_ids = canonical_labels(raw)
        n_i, b_i = blocks[i]
        if i not in raw:
            new_blocks = tuple(blocks[b] for b in old_ids)
            worst = _min(b_i, u_v)
            yield (new_labels, new_blocks, new_us), worst * (self.L // n_i)
            return
        if self.strict_guard:
            if b_i is not None and u_v < b_i:
                return
            nb_i = u_v if b_i is None else b_i
        else:
            nb_i = _min(b_i, u_v)
        new_blocks = tuple((n_i, nb_i) if b == i else blocks[b] for b in old_ids)
        yield (new_labels, new_blocks, new_us), None

    def join(self, s1, s2, bag):
        labels = s1[0]
        members: list[list[int]] = [[] for _ in s1[1]]
        for j, u in enumerate(bag):
            members[labels[j]].append(u)
        blocks = tuple(
            (n1 + n2 - len(members[i]), _min(b1, b2))
            for i, ((n1, b1), (n2, b2)) in enumerate(zip(s1[1], s2[1]))
        )
        w = self.w
        us = []
        for j, u in enumerate(bag):
            inside = sum(w.get((u, x), 0) for x in members[labels[j]])
            us.append(s1[2][j] + s2[2][j] - inside)
        return labels, blocks, tuple(us)

    def check_state(self, state, bag):
        n = self.g.n
        limit = n * self.Wmax
        labels, blocks, us = state
        for i, (n_i, b_i) in enumerate(blocks):
            c = labels.count(i)
            assert c >= 1 and c <= n_i <= n, f"coalition size {n_i} outside [{c}, {n}]"
            assert (b_i is None) == (n_i == c), "b_i must be +inf exactly when nothing was forgotten"
            assert b_i is None or abs(b_i) <= limit, f"b_i = {b_i} exceeds nW = {limit}"
        for u in us:
            assert abs(u) <= limit, f"u_j = {u} exceeds nW = {limit}"

    def decode(self, state):
        labels, blocks, us = state
        return (labels,
                [(n_i, None if b is None else Fraction(b, self.D)) for n_i, b in blocks],
                [Fraction(u, self.D) for u in us])

    def to_value(self, x) -> Fraction:
        return Fraction(0) if x is None else Fraction(x, self.L * self.D)


def solve_tw_egalitarian(
    g: WeightedGraph,
    ntd: NiceTreeDecomposition | None = None,
    *,
    strategy: str = "min_fill",
    check_bounds: bool = False,
    strict_guard: bool = False,
) -> WelfareReport:
    """Exact maximum egalitarian welfare (0 for the empty graph)."""
    if ntd is None:
        ntd = nice_decomposition(g, strategy)
    dp = TwEgalDP(g, strict_guard=strict_guard)
    best = dp.run(ntd, check_bounds=check_bounds)
    return WelfareReport("egalitarian", dp.to_value(best), dp.reconstruct(), "treewidth")
