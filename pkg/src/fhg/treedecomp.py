"""Tree decompositions: heuristics, validation, nice form and PACE ``.td`` files."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import DomainError, ParseError, WeightedGraph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node id plus the tree edges between nodes."""

    bags: tuple[frozenset, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, bags: Iterable[Iterable[int]], edges: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in bags))
        object.__setattr__(self, "edges", tuple(sorted((min(a, b), max(a, b)) for a, b in edges)))

    @property
    def num_nodes(self) -> int:
        return len(self.bags)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for row in adj:
            row.sort()
        return adj


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted
    children: tuple[int, ...] = ()
    vertex: int | None = None  # introduced or forgotten vertex


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted nice decomposition; children always precede their parent in ``nodes``."""

    nodes: tuple[NiceNode, ...]
    root: int
    parent: tuple[int, ...] = field(repr=False, default=())

    def postorder(self) -> range:
        return range(len(self.nodes))

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i, nd in enumerate(self.nodes) for c in nd.children]
        return TreeDecomposition([nd.bag for nd in self.nodes], edges)


@dataclass(frozen=True)
class Violation:
    kind: str  # "not-a-tree" | "missing-vertex" | "uncovered-edge" | "disconnected-vertex" | "bad-vertex" | "not-nice"
    witness: object
    message: str


def width(td: TreeDecomposition | NiceTreeDecomposition) -> int:
    if isinstance(td, NiceTreeDecomposition):
        return max((len(nd.bag) for nd in td.nodes), default=0) - 1
    return max((len(b) for b in td.bags), default=0) - 1


def _is_tree(k: int, edges: Sequence[tuple[int, int]]) -> bool:
    if k == 0:
        return False
    if len(edges) != k - 1 or len(set(edges)) != len(edges):
        return False
    adj: list[list[int]] = [[] for _ in range(k)]
    for a, b in edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return False
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == k


def validate_decomposition(g: WeightedGraph, td: TreeDecomposition | NiceTreeDecomposition) -> Violation | None:
    """``None`` when ``td`` is a tree decomposition of ``g``, else the first violation found."""
    if isinstance(td, NiceTreeDecomposition):
        td = td.as_tree_decomposition()
    k = td.num_nodes
    if not _is_tree(k, td.edges):
        return Violation("not-a-tree", td.edges, "decomposition nodes do not form a tree")
    where: dict[int, list[int]] = {}
    for t, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                return Violation("bad-vertex", v, f"bag {t} holds {v}, not a vertex of the graph")
            where.setdefault(v, []).append(t)
    for v in range(g.n):
        if v not in where:
            return Violation("missing-vertex", v, f"vertex {v} is in no bag")
    for u, v in g.edges:
        if not any(u in td.bags[t] for t in where[v]):
            return Violation("uncovered-edge", (u, v), f"edge {u}-{v} is in no bag")
    adj = td.adjacency()
    for v in range(g.n):
        nodes = set(where[v])
        start = where[v][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes):
            return Violation("disconnected-vertex", v, f"nodes holding vertex {v} are not connected")
    return None


def validate_nice(g: WeightedGraph, ntd: NiceTreeDecomposition) -> Violation | None:
    """Decomposition conditions plus the node grammar of a nice decomposition."""
    bad = validate_decomposition(g, ntd)
    if bad is not None:
        return bad
    root = ntd.nodes[ntd.root]
    if root.bag:
        return Violation("not-nice", ntd.root, "root bag is not empty")
    for i, nd in enumerate(ntd.nodes):
        kids = [ntd.nodes[c] for c in nd.children]
        ok = True
        if nd.kind == LEAF:
            ok = not kids and not nd.bag
        elif nd.kind == INTRODUCE:
            ok = (len(kids) == 1 and nd.vertex in nd.bag and nd.vertex not in kids[0].bag
                  and set(nd.bag) == set(kids[0].bag) | {nd.vertex})
        elif nd.kind == FORGET:
            ok = (len(kids) == 1 and nd.vertex not in nd.bag and nd.vertex in kids[0].bag
                  and set(nd.bag) == set(kids[0].bag) - {nd.vertex})
        elif nd.kind == JOIN:
            ok = len(kids) == 2 and kids[0].bag == nd.bag == kids[1].bag
        else:
            ok = False
        if not ok:
            return Violation("not-nice", i, f"node {i} ({nd.kind}) breaks the nice-node rules")
    return None


# -- heuristics ---------------------------------------------------------------


def elimination_order(g: WeightedGraph, strategy: str = "min_fill") -> list[int]:
    if strategy not in ("min_fill", "min_degree"):
        raise DomainError(f"unknown strategy {strategy!r}")
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    order = []
    while adj:
        def fill(v):
            nb = sorted(adj[v])
            return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])

        if strategy == "min_fill":
            v = min(adj, key=lambda x: (fill(x), len(adj[x]), x))
        else:
            v = min(adj, key=lambda x: (len(adj[x]), x))
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
        order.append(v)
    return order


def heuristic_decomposition(g: WeightedGraph, strategy: str = "min_fill") -> TreeDecomposition:
    """Decomposition from a greedy elimination ordering (one bag per vertex)."""
    if g.n == 0:
        return TreeDecomposition([()], [])
    order = elimination_order(g, strategy)
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    bags = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset(nb | {v}))
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
    edges = []
    orphans = []
    for i, v in enumerate(order):
        later = [pos[u] for u in bags[i] if u != v]
        if later:
            edges.append((i, min(later)))
        else:
            orphans.append(i)
    # separate components hang off each other through empty intersections
    for a, b in zip(orphans, orphans[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges)


# -- nice form ----------------------------------------------------------------


def _compress(td: TreeDecomposition) -> tuple[list[frozenset], list[list[int]]]:
    """Contract tree edges whose one end's bag is contained in the other's."""
    bags = list(td.bags)
    adj = [set(a) for a in td.adjacency()]
    alive = [True] * len(bags)
    changed = True
    while changed:
        changed = False
        for x in range(len(bags)):
            if not alive[x]:
                continue
            for y in sorted(adj[x]):
                if bags[x] <= bags[y]:
                    for z in adj[x]:
                        if z != y:
                            adj[z].discard(x)
                            adj[z].add(y)
                            adj[y].add(z)
                    adj[y].discard(x)
                    adj[x] = set()
                    alive[x] = False
                    changed = True
                    break
    keep = [i for i in range(len(bags)) if alive[i]]
    idx = {old: new for new, old in enumerate(keep)}
    return [bags[i] for i in keep], [sorted(idx[j] for j in adj[i]) for i in keep]


def make_nice(td: TreeDecomposition, g: WeightedGraph | None = None) -> NiceTreeDecomposition:
    """Nice decomposition of the same width; empty root and leaf bags."""
    if g is not None:
        bad = validate_decomposition(g, td)
        if bad is not None:
            raise DomainError(bad.message)
    elif not _is_tree(td.num_nodes, td.edges):
        raise DomainError("decomposition nodes do not form a tree")
    bags, adj = _compress(td)
    nodes: list[NiceNode] = []

    def add(kind, bag, children=(), vertex=None):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(children), vertex))
        return len(nodes) - 1

    def chain(top: int, src: frozenset, dst: frozenset) -> int:
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            top = add(FORGET, cur, (top,), v)
        for v in sorted(dst - src):
            cur.add(v)
            top = add(INTRODUCE, cur, (top,), v)
        return top

    # iterative post-order over the compressed tree rooted at node 0
    parent = {0: None}
    order = []
    stack = [0]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in reversed(adj[x]):
            if y != parent[x]:
                parent[y] = x
                stack.append(y)
    top_of: dict[int, int] = {}
    for x in reversed(order):
        kids = [y for y in adj[x] if y != parent[x]]
        tops = [chain(top_of[y], bags[y], bags[x]) for y in kids]
        if not tops:
            tops = [chain(add(LEAF, ()), frozenset(), bags[x])]
        cur = tops[0]
        for other in tops[1:]:
            cur = add(JOIN, bags[x], (cur, other))
        top_of[x] = cur
    root = chain(top_of[0], bags[0], frozenset())
    par = [-1] * len(nodes)
    for i, nd in enumerate(nodes):
        for c in nd.children:
            par[c] = i
    return NiceTreeDecomposition(tuple(nodes), root, tuple(par))


def nice_decomposition(g: WeightedGraph, strategy: str = "min_fill",
                       td: TreeDecomposition | None = None) -> NiceTreeDecomposition:
    if td is None:
        td = heuristic_decomposition(g, strategy)
    return make_nice(td, g)


# -- PACE .td -----------------------------------------------------------------


def write_pace(td: TreeDecomposition, n: int) -> str:
    """PACE text; bags and vertices are 1-indexed on disk."""
    lines = [f"s td {td.num_nodes} {width(td) + 1} {n}"]
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def read_pace(text: str) -> tuple[TreeDecomposition, int]:
    """Parse PACE ``.td`` text into ``(decomposition, vertex count)``."""
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise ParseError("bad solution line", lineno)
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise ParseError("bag before the 's td' line", lineno)
                i = int(parts[1])
                if not 1 <= i <= header[0] or i in bags:
                    raise ParseError(f"bad bag id {i}", lineno)
                vs = [int(x) - 1 for x in parts[2:]]
                if any(not 0 <= v < header[2] for v in vs):
                    raise ParseError("vertex id out of range", lineno)
                bags[i] = frozenset(vs)
            else:
                if header is None or len(parts) != 2:
                    raise ParseError("expected a tree edge 'a b'", lineno)
                a, b = int(parts[0]), int(parts[1])
                if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                    raise ParseError("tree edge names an unknown bag", lineno)
                edges.append((a - 1, b - 1))
        except ValueError:
            raise ParseError(f"not an integer in {raw!r}", lineno) from None
    if header is None:
        raise ParseError("missing 's td' line")
    k, _, n = header
    if len(bags) != k:
        raise ParseError(f"expected {k} bags, found {len(bags)}")
    return TreeDecomposition([bags[i + 1] for i in range(k)], edges), n
