"""Graphs, coalition structures and welfare in exact rational arithmetic."""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class FHGError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FHGError, ValueError):
    """An argument violates an operation's precondition."""


class SizeCapError(FHGError):
    """An instance exceeds a configured size cap (oracle n, vertex cover tau)."""


class UnsupportedMethodError(FHGError):
    """A solver was asked to handle an input class it does not cover."""


class ParseError(FHGError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


_RATIONAL_LITERAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def as_rational(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` literal to a Fraction (floats refused)."""
    if isinstance(value, bool):
        raise DomainError("booleans are not weights")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_LITERAL.match(text):
            raise DomainError(f"not an exact rational literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError as exc:
            raise DomainError(f"zero denominator in {value!r}") from exc
    raise DomainError(f"weights must be exact rationals, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class WeightedGraph:
    """Undirected simple graph on vertices ``0..n-1`` with nonzero rational weights.

    Instances are immutable; ``edges`` maps each pair ``(u, v)`` with ``u < v``
    to its weight.
    """

    __slots__ = ("n", "_edges", "_adj", "_hash")

    def __init__(self, n: int, edges: Mapping[tuple[int, int], object] | Iterable = ()):
        if n < 0:
            raise DomainError("vertex count must be nonnegative")
        items = edges.items() if isinstance(edges, Mapping) else edges
        store: dict[tuple[int, int], Fraction] = {}
        for item in items:
            if len(item) == 2 and isinstance(item[0], tuple):
                (u, v), w = item
            elif len(item) == 2:
                (u, v), w = item, 1
            else:
                u, v, w = item
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            key = (u, v) if u < v else (v, u)
            if key in store:
                raise DomainError(f"duplicate edge {key}")
            w = as_rational(w)
            if w == 0:
                raise DomainError(f"edge {key} has weight zero")
            store[key] = w
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in store:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self._edges = dict(sorted(store.items()))
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._hash = None

    @classmethod
    def unweighted(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "WeightedGraph":
        return cls(n, [(u, v, 1) for u, v in pairs])

    @property
    def edges(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._edges)

    def edge_items(self):
        return self._edges.items()

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def weight(self, u: int, v: int) -> Fraction:
        """Weight of edge ``{u, v}``; 0 when the vertices are not adjacent."""
        return self._edges.get((u, v) if u < v else (v, u), Fraction(0))

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    @property
    def max_abs_weight(self) -> Fraction:
        return max((abs(w) for w in self._edges.values()), default=Fraction(0))

    @property
    def W(self) -> int | None:
        """Maximum absolute weight for integer-weight graphs, else ``None``."""
        if not self.is_integer_weighted():
            return None
        return int(self.max_abs_weight)

    def is_unweighted(self) -> bool:
        return all(w == 1 for w in self._edges.values())

    def is_integer_weighted(self) -> bool:
        return all(w.denominator == 1 for w in self._edges.values())

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["WeightedGraph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns new->old ids."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        sub = [
            (index[u], index[v], w)
            for (u, v), w in self._edges.items()
            if u in index and v in index
        ]
        return WeightedGraph(len(old), sub), old

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._edges.items())))
        return self._hash

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


class CoalitionStructure:
    """A partition of ``0..n-1`` held in canonical form.

    Each block is sorted ascending and blocks are ordered by their minimum
    element. Two structures compare in restricted-growth-string order, which
    coincides with the order in which ``oracle.PartitionIterator`` emits them.
    """

    __slots__ = ("blocks", "n")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        canon = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in canon):
            raise DomainError("coalitions must be nonempty")
        canon.sort(key=lambda b: b[0])
        seen: set[int] = set()
        for b in canon:
            for v in b:
                if v in seen:
                    raise DomainError(f"vertex {v} appears in two coalitions")
                seen.add(v)
        total = len(seen)
        if n is None:
            n = total
        if seen != set(range(n)):
            raise DomainError("coalitions do not cover exactly the vertex set")
        self.blocks: tuple[tuple[int, ...], ...] = tuple(canon)
        self.n = n

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "CoalitionStructure":
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(v)
        return cls(groups.values(), len(labels))

    @classmethod
    def singletons(cls, n: int) -> "CoalitionStructure":
        return cls(([v] for v in range(n)), n)

    @classmethod
    def grand(cls, n: int) -> "CoalitionStructure":
        return cls([range(n)] if n else [], n)

    def rgs(self) -> tuple[int, ...]:
        """Restricted growth string: label of each vertex's block."""
        out = [0] * self.n
        for j, b in enumerate(self.blocks):
            for v in b:
                out[v] = j
        return tuple(out)

    def coalition_of(self, v: int) -> tuple[int, ...]:
        for b in self.blocks:
            if v in b:
                return b
        raise DomainError(f"vertex {v} not covered")

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, CoalitionStructure):
            return NotImplemented
        return self.blocks == other.blocks

    def __lt__(self, other):
        return self.rgs() < other.rgs()

    def __hash__(self):
        return hash(self.blocks)

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __repr__(self):
        return f"CoalitionStructure({self.to_lists()})"


@dataclass(frozen=True)
class WelfareReport:
    objective: str  # "utilitarian" | "egalitarian"
    value: Fraction
    partition: CoalitionStructure
    method: str
    extra: dict = field(default_factory=dict, compare=False)

    def check(self, g: WeightedGraph) -> bool:
        return welfare(g, self.partition, self.objective) == self.value


OBJECTIVES = ("utilitarian", "egalitarian")


def _check_partition(g: WeightedGraph, p: CoalitionStructure):
    if not isinstance(p, CoalitionStructure) or p.n != g.n:
        raise DomainError("partition is not a coalition structure of this graph")


def agent_utility(g: WeightedGraph, v: int, c: Iterable[int]) -> Fraction:
    members = set(c)
    if v not in members:
        raise DomainError(f"vertex {v} is not in the coalition")
    if not members <= set(range(g.n)):
        raise DomainError("coalition contains vertices outside the graph")
    total = sum((g.weight(v, u) for u in g.neighbors(v) if u in members), Fraction(0))
    return total / len(members)


def internal_weight(g: WeightedGraph, c: Iterable[int]) -> Fraction:
    members = sorted(set(c))
    total = Fraction(0)
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            total += g.weight(u, v)
    return total


def coalition_welfare(g: WeightedGraph, c: Iterable[int]) -> Fraction:
    """Utilitarian welfare of one coalition: twice its internal weight over its size."""
    members = list(c)
    return 2 * internal_weight(g, members) / len(members)


def utilitarian_welfare(g: WeightedGraph, p: CoalitionStructure) -> Fraction:
    _check_partition(g, p)
    return sum((coalition_welfare(g, b) for b in p.blocks), Fraction(0))


def egalitarian_welfare(g: WeightedGraph, p: CoalitionStructure) -> Fraction:
    _check_partition(g, p)
    if g.n == 0:
        return Fraction(0)
    return min(agent_utility(g, v, b) for b in p.blocks for v in b)


def welfare(g: WeightedGraph, p: CoalitionStructure, objective: str) -> Fraction:
    if objective == "utilitarian":
        return utilitarian_welfare(g, p)
    if objective == "egalitarian":
        return egalitarian_welfare(g, p)
    raise DomainError(f"unknown objective {objective!r}")


def connected_components(g: WeightedGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def diameter(g: WeightedGraph) -> float | int:
    """Hop diameter; ``math.inf`` for disconnected graphs (0 for n <= 1)."""
    if g.n <= 1:
        return 0
    best = 0
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if min(dist) < 0:
            return math.inf
        best = max(best, max(dist))
    return best


def biconnected_components(g: WeightedGraph) -> tuple[list[list[int]], list[int]]:
    """Vertex sets of the biconnected components and the articulation points.

    Iterative Hopcroft-Tarjan lowpoint search; isolated vertices form no component.
    """
    n = g.n
    disc = [-1] * n
    low = [0] * n
    comps: list[list[int]] = []
    cuts: set[int] = set()
    counter = 0
    for root in range(n):
        if disc[root] >= 0 or not g.neighbors(root):
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((u, w))
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    low[u] = min(low[u], disc[w])
                    edge_stack.append((u, w))
            if advanced:
                continue
            stack.pop()
            if parent < 0:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                if parent == root:
                    root_children += 1
                else:
                    cuts.add(parent)
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.add(a)
                    comp.add(b)
                    if (a, b) == (parent, u):
                        break
                comps.append(sorted(comp))
        if root_children >= 2:
            cuts.add(root)
    comps.sort()
    return comps, sorted(cuts)


def is_block_graph(g: WeightedGraph) -> bool:
    comps, _ = biconnected_components(g)
    for comp in comps:
        k = len(comp)
        if sum(1 for i, u in enumerate(comp) for v in comp[i + 1:] if g.has_edge(u, v)) != k * (k - 1) // 2:
            return False
    return True


def lcm_range(k: int) -> int:
    """lcm(1, ..., k); 1 for k < 1."""
    out = 1
    for i in range(2, k + 1):
        out = out * i // math.gcd(out, i)
    return out


def integer_weights(g: WeightedGraph) -> tuple[int, dict[tuple[int, int], int]]:
    """Common denominator D and the edge weights multiplied by D."""
    d = 1
    for w in g._edges.values():
        d = d * w.denominator // math.gcd(d, w.denominator)
    return d, {e: int(w * d) for e, w in g._edges.items()}
