"""Sparse-table engine shared by the two tree-decomposition DPs.

A state always starts with ``labels``: the restricted-growth labelling of the
current (sorted) bag, so ``labels[j]`` is the block of the ``j``-th bag vertex.
Objective modules supply the transitions; this module drives them over a nice
decomposition, keeps the best value per state, and replays backpointers into a
coalition structure.
"""
from __future__ import annotations

from typing import Iterator

from .core import CoalitionStructure, DomainError, WeightedGraph, integer_weights, lcm_range
from .treedecomp import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, validate_nice


def canonical_labels(raw) -> tuple[tuple[int, ...], list]:
    """Relabel ``raw`` block ids by first appearance; also return old ids in new order."""
    seen: dict = {}
    out = []
    for x in raw:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out), list(seen)


class TableDP:
    """Base class; subclasses define the state payload and transitions.

    Transition generators yield ``(state, contribution)`` pairs. The new value
    is ``combine(old, contribution)``, with ``contribution=None`` leaving it
    unchanged. Values are compared with ``better``.
    """

    empty_state: tuple = ((),)

    def __init__(self, g: WeightedGraph):
        self.g = g
        self.D, iw = integer_weights(g)
        self.w = {}
        for (u, v), x in iw.items():
            self.w[u, v] = self.w[v, u] = x
        self.L = lcm_range(max(g.n, 1))
        self.Wmax = max((abs(x) for x in iw.values()), default=0)

    # objective hooks
    def leaf_value(self):
        raise NotImplementedError

    def combine(self, value, contribution):
        raise NotImplementedError

    def better(self, a, b) -> bool:
        raise NotImplementedError

    def introduce(self, state, bag_old, bag_new, v) -> Iterator:
        raise NotImplementedError

    def forget(self, state, bag_old, bag_new, v) -> Iterator:
        raise NotImplementedError

    def join(self, s1, s2, bag):
        """Merged state or ``None`` when the bag partitions differ."""
        raise NotImplementedError

    def check_state(self, state, bag) -> None:
        pass

    # shared pieces
    def bag_weight(self, members) -> int:
        w = self.w
        return sum(w.get((a, b), 0) for i, a in enumerate(members) for b in members[i + 1:])

    def _put(self, table, state, value, bp):
        cur = table.get(state)
        if cur is None or self.better(value, cur[0]):
            table[state] = (value, bp)

    def run(self, ntd: NiceTreeDecomposition, check_bounds: bool = False, validate: bool = True):
        if validate:
            bad = validate_nice(self.g, ntd)
            if bad is not None:
                raise DomainError(f"invalid nice decomposition: {bad.message}")
        tables: list[dict] = [None] * len(ntd.nodes)
        for t in ntd.postorder():
            nd = ntd.nodes[t]
            table: dict = {}
            if nd.kind == LEAF:
                table[self.empty_state] = (self.leaf_value(), None)
            elif nd.kind in (INTRODUCE, FORGET):
                child = ntd.nodes[nd.children[0]]
                step = self.introduce if nd.kind == INTRODUCE else self.forget
                for s, (val, _) in tables[nd.children[0]].items():
                    for s2, contrib in step(s, child.bag, nd.bag, nd.vertex):
                        self._put(table, s2, self.combine(val, contrib), (s,))
            elif nd.kind == JOIN:
                left, right = tables[nd.children[0]], tables[nd.children[1]]
                by_labels: dict = {}
                for s in right:
                    by_labels.setdefault(s[0], []).append(s)
                for s1, (v1, _) in left.items():
                    for s2 in by_labels.get(s1[0], ()):
                        merged = self.join(s1, s2, nd.bag)
                        self._put(table, merged, self.combine(v1, right[s2][0]), (s1, s2))
            else:
                raise DomainError(f"unknown node kind {nd.kind!r}")
            if check_bounds:
                for s in table:
                    self.check_state(s, nd.bag)
            tables[t] = table
        self.tables = tables
        self.ntd = ntd
        return tables[ntd.root][self.empty_state][0]

    def reconstruct(self) -> CoalitionStructure:
        ntd, tables = self.ntd, self.tables
        labels = [-1] * self.g.n
        counter = 0
        stack = [(ntd.root, self.empty_state, [])]
        while stack:
            t, s, ids = stack.pop()
            nd = ntd.nodes[t]
            bp = tables[t][s][1]
            if nd.kind == LEAF:
                continue
            if nd.kind == JOIN:
                stack.append((nd.children[0], bp[0], ids))
                stack.append((nd.children[1], bp[1], ids))
                continue
            child = ntd.nodes[nd.children[0]]
            prev = bp[0]
            pos = {v: j for j, v in enumerate(nd.bag)}
            k = max(prev[0], default=-1) + 1
            prev_ids = [None] * k
            for j, v in enumerate(child.bag):
                if v in pos and prev_ids[prev[0][j]] is None:
                    prev_ids[prev[0][j]] = ids[s[0][pos[v]]]
            for i in range(k):
                if prev_ids[i] is None:  # only a just-closed coalition
                    prev_ids[i] = counter
                    counter += 1
            if nd.kind == FORGET:
                labels[nd.vertex] = prev_ids[prev[0][child.bag.index(nd.vertex)]]
            stack.append((nd.children[0], prev, prev_ids))
        if min(labels, default=0) < 0:
            raise AssertionError("reconstruction left vertices unassigned")
        return CoalitionStructure.from_labels(labels)
