"""Graph I/O, seeded instance generators and the egalitarian hardness construction."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    DomainError,
    ParseError,
    WeightedGraph,
    WelfareReport,
    as_rational,
    format_rational,
)
from .treedecomp import TreeDecomposition

FORMATS = ("edge_list", "json")


# -- parsing and serialization ------------------------------------------------


def _parse_edge_list(text: str) -> WeightedGraph:
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if n is not None or edges or len(parts) != 2:
                raise ParseError("'n <count>' must come once, before any edge", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 0:
                raise ParseError("vertex count must be nonnegative", lineno)
            continue
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"vertex ids must be integers: {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("vertex ids must be nonnegative", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key[0]} {key[1]}", lineno)
        seen.add(key)
        try:
            w = as_rational(parts[2]) if len(parts) == 3 else Fraction(1)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), lineno) from None
        if w == 0:
            raise ParseError("edge weight 0 is not allowed", lineno)
        if n is not None and max(u, v) >= n:
            raise ParseError(f"vertex id {max(u, v)} out of range for n={n}", lineno)
        edges.append((u, v, w))
    if n is None:
        n = max((max(u, v) for u, v, _ in edges), default=-1) + 1
    return WeightedGraph(n, edges)


def _parse_json(text: str) -> WeightedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "n" not in doc or not isinstance(doc.get("edges"), list):
        raise ParseError('expected an object with "n" and "edges"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError('"n" must be a nonnegative integer')
    edges = []
    seen = set()
    for i, item in enumerate(doc["edges"]):
        where = f"edge #{i}"
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise ParseError(f"{where}: expected [u, v] or [u, v, w]")
        u, v = item[0], item[1]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise ParseError(f"{where}: vertex ids must be integers")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"{where}: vertex id out of range")
        if u == v:
            raise ParseError(f"{where}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"{where}: duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        try:
            w = as_rational(item[2]) if len(item) == 3 else Fraction(1)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: {exc}") from None
        if w == 0:
            raise ParseError(f"{where}: edge weight 0 is not allowed")
        edges.append((u, v, w))
    return WeightedGraph(n, edges)


def parse_graph(data: bytes | str, format: str = "edge_list") -> WeightedGraph:
    """Parse a graph; errors carry the offending line number where there is one."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("input is not UTF-8 text") from None
    if format == "edge_list":
        return _parse_edge_list(data)
    if format == "json":
        return _parse_json(data)
    raise DomainError(f"unknown graph format {format!r}")


def guess_format(path: str) -> str:
    return "json" if str(path).lower().endswith(".json") else "edge_list"


def read_graph(path: str, format: str | None = None) -> WeightedGraph:
    with open(path, "rb") as fh:
        return parse_graph(fh.read(), format or guess_format(path))


def serialize_graph(g: WeightedGraph, format: str = "edge_list") -> str:
    unweighted = g.is_unweighted()
    if format == "edge_list":
        lines = [f"n {g.n}"]
        for (u, v), w in g.edge_items():
            lines.append(f"{u} {v}" if unweighted else f"{u} {v} {format_rational(w)}")
        return "\n".join(lines) + "\n"
    if format == "json":
        edges = [[u, v, format_rational(w)] for (u, v), w in g.edge_items()]
        return json.dumps({"n": g.n, "edges": edges}) + "\n"
    raise DomainError(f"unknown graph format {format!r}")


def serialize_report(report: WelfareReport, format: str = "text", approx: bool = False) -> str:
    value = format_rational(report.value)
    parts = report.partition.to_lists()
    if format == "json":
        doc = {"objective": report.objective, "method": report.method, "value": value, "partition": parts}
        if approx:
            doc["value_approx"] = f"{float(report.value):.12g}"
        return json.dumps(doc) + "\n"
    lines = [
        f"objective: {report.objective}",
        f"method: {report.method}",
        f"value: {value}",
    ]
    if approx:
        lines.append(f"value (approximate): {float(report.value):.12g}")
    lines.append(f"partition: {json.dumps(parts)}")
    return "\n".join(lines) + "\n"


# -- generators ---------------------------------------------------------------


def _nonzero(rng: random.Random, lo: int, hi: int) -> int:
    while True:
        x = rng.randint(lo, hi)
        if x:
            return x


def gen_random_block_graph(seed: int, n_blocks: int, max_clique: int = 4,
                           attach_prob: float = 0.3) -> WeightedGraph:
    """Connected unweighted block graph: a random tree of cliques.

    Each new block is a clique of 2..``max_clique`` vertices sharing one
    vertex with the graph so far; with probability ``attach_prob`` that vertex
    is an existing cut vertex, otherwise any existing vertex.
    """
    if n_blocks < 1 or max_clique < 2 or not 0 <= attach_prob <= 1:
        raise DomainError("need n_blocks >= 1, max_clique >= 2, 0 <= attach_prob <= 1")
    rng = random.Random(seed)
    size = rng.randint(2, max_clique)
    edges = list(itertools.combinations(range(size), 2))
    n = size
    cuts: list[int] = []
    for _ in range(n_blocks - 1):
        if cuts and rng.random() < attach_prob:
            c = rng.choice(cuts)
        else:
            c = rng.randrange(n)
            if c not in cuts:
                cuts.append(c)
        size = rng.randint(2, max_clique)
        members = [c] + list(range(n, n + size - 1))
        n += size - 1
        edges.extend(itertools.combinations(members, 2))
    return WeightedGraph.unweighted(n, edges)


def gen_bounded_block_graph(seed: int, n: int, max_degree: int = 8, max_clique: int = 4) -> WeightedGraph:
    """Connected unweighted block graph with exactly ``n`` vertices and max degree <= ``max_degree``."""
    if n < 1 or max_clique < 2 or max_degree < 1:
        raise DomainError("need n >= 1, max_clique >= 2, max_degree >= 1")
    rng = random.Random(seed)
    deg = [0] * n
    open_ = [0]  # vertices that can still take one more neighbour
    edges = []
    nxt = 1
    while nxt < n:
        c = open_[rng.randrange(len(open_))]
        room = max_degree - deg[c]
        size = min(rng.randint(2, max_clique), n - nxt + 1, room + 1, max_degree + 1)
        members = [c] + list(range(nxt, nxt + size - 1))
        nxt += size - 1
        for a, b in itertools.combinations(members, 2):
            edges.append((a, b))
            deg[a] += 1
            deg[b] += 1
        open_.extend(v for v in members[1:] if deg[v] < max_degree)
        if deg[c] >= max_degree:
            open_.remove(c)
    return WeightedGraph.unweighted(n, edges)


def gen_partial_ktree(seed: int, n: int, k: int, keep_prob: float = 0.7,
                      weights: tuple[int, int] | None = None) -> tuple[WeightedGraph, TreeDecomposition]:
    """Random k-tree with each edge kept independently; returns its width-k decomposition."""
    if not n > k >= 1:
        raise DomainError("need n > k >= 1")
    rng = random.Random(seed)
    bags = [frozenset(range(k + 1))]
    tree_edges = []
    cliques = [(tuple(sorted(set(range(k + 1)) - {x})), 0) for x in range(k + 1)]
    edges = set(itertools.combinations(range(k + 1), 2))
    for v in range(k + 1, n):
        base, node = cliques[rng.randrange(len(cliques))]
        bags.append(frozenset(base) | {v})
        t = len(bags) - 1
        tree_edges.append((node, t))
        for u in base:
            edges.add((u, v))
        for x in base:
            cliques.append((tuple(sorted((set(base) - {x}) | {v})), t))
    kept = [e for e in sorted(edges) if rng.random() < keep_prob]
    if weights is None:
        g = WeightedGraph.unweighted(n, kept)
    else:
        g = WeightedGraph(n, [(u, v, _nonzero(rng, *weights)) for u, v in kept])
    return g, TreeDecomposition(bags, tree_edges)


def gen_random_graph(seed: int, n: int, p: float, weights: tuple[int, int] | None = None) -> WeightedGraph:
    """G(n, p); optional nonzero integer weights drawn uniformly from ``weights``."""
    rng = random.Random(seed)
    out = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            out.append((u, v, 1 if weights is None else _nonzero(rng, *weights)))
    return WeightedGraph(n, out)


def gen_small_cover_graph(seed: int, n: int, tau: int, p: float = 0.6,
                          weights: tuple[int, int] | None = None) -> WeightedGraph:
    """Random graph whose edges all touch a random set of at most ``tau`` vertices."""
    rng = random.Random(seed)
    cover = set(rng.sample(range(n), min(tau, n)))
    out = []
    for u, v in itertools.combinations(range(n), 2):
        if (u in cover or v in cover) and rng.random() < p:
            out.append((u, v, 1 if weights is None else _nonzero(rng, *weights)))
    return WeightedGraph(n, out)


# -- hardness construction ----------------------------------------------------


@dataclass(frozen=True)
class PartitionInstance:
    A: tuple[int, ...]

    def __init__(self, A: Sequence[int]):
        A = tuple(int(a) for a in A)
        if any(a < 1 for a in A):
            raise DomainError("Partition items must be positive integers")
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def W(self) -> int:
        return sum(self.A)


@dataclass(frozen=True)
class HardnessInstance:
    graph: WeightedGraph
    threshold: Fraction
    big_M: int
    instance: PartitionInstance
    # vertex ids: v1, v2, w1, w2, then one vertex per item
    V1 = 0
    V2 = 1
    W1 = 2
    W2 = 3

    def item_vertex(self, i: int) -> int:
        return 4 + i

    def meta(self) -> dict:
        return {
            "A": list(self.instance.A),
            "threshold": format_rational(self.threshold),
            "big_M": self.big_M,
            "vertices": {"v1": self.V1, "v2": self.V2, "w1": self.W1, "w2": self.W2,
                         "items": [self.item_vertex(i) for i in range(self.instance.n)]},
            "vertex_cover": [self.V1, self.V2, self.W1, self.W2],
        }


def gen_egal_hardness(inst: PartitionInstance) -> HardnessInstance:
    """Egalitarian instance that reaches the threshold iff ``inst`` has an equal-size equal-sum split."""
    n, W = inst.n, inst.W
    if n % 2:
        raise DomainError("Partition instance must have an even number of items")
    if n == 0:
        raise DomainError("Partition instance must be nonempty")
    half = Fraction(n, 2) + 2
    level = (n + Fraction(7, 2)) * W
    big_M = (n + 4) ** 2 * W + 1
    V1, V2, W1, W2 = 0, 1, 2, 3
    edges = [(V1, W1, half * (n + 3) * W), (V2, W2, half * (n + 3) * W), (V1, V2, -big_M)]
    for i, a in enumerate(inst.A):
        x = 4 + i
        edges += [(V1, x, half * a), (V2, x, half * a), (W1, x, half * (level - a)), (W2, x, half * (level - a))]
    return HardnessInstance(WeightedGraph(n + 4, edges), level, big_M, inst)


def partition_has_solution(inst: PartitionInstance) -> bool:
    """Exhaustive check for a half-size subset with half the total sum."""
    n = inst.n
    if n % 2 or inst.W % 2:
        return False
    if n > 20:
        raise DomainError("exhaustive Partition check is limited to 20 items")
    target = inst.W // 2
    return any(sum(c) == target for c in itertools.combinations(inst.A, n // 2))
