"""Block-cut trees of connected block graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import DomainError, WeightedGraph, biconnected_components, connected_components, is_block_graph


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[tuple[int, ...], ...]
    cut_vertices: tuple[int, ...]
    # cut vertex -> indices of the blocks containing it
    cut_blocks: dict = field(repr=False)

    def block_cuts(self, b: int) -> tuple[int, ...]:
        cuts = set(self.cut_vertices)
        return tuple(v for v in self.blocks[b] if v in cuts)


def build_block_cut_tree(g: WeightedGraph) -> BlockCutTree:
    if g.n == 0 or len(connected_components(g)) != 1:
        raise DomainError("block-cut tree needs a connected, nonempty graph")
    if not is_block_graph(g):
        raise DomainError("graph is not a block graph")
    comps, cuts = biconnected_components(g)
    blocks = tuple(tuple(c) for c in comps)
    cut_blocks: dict[int, list[int]] = {c: [] for c in cuts}
    for i, b in enumerate(blocks):
        for v in b:
            if v in cut_blocks:
                cut_blocks[v].append(i)
    return BlockCutTree(blocks, tuple(cuts), {c: tuple(bs) for c, bs in cut_blocks.items()})


@dataclass
class RootedBlockCutTree:
    tree: BlockCutTree
    root: int
    block_parent: dict[int, int | None]  # block -> parent cut vertex (c_p)
    block_children: dict[int, tuple[int, ...]]  # block -> child cut vertices, ascending
    cut_parent: dict[int, int]  # cut vertex -> parent block
    cut_children: dict[int, tuple[int, ...]]  # cut vertex -> child blocks, ascending
    non_cut: dict[int, tuple[int, ...]]  # block -> R(B)
    order: list[tuple[str, int]]  # BFS order from the root, ("block"|"cut", id)

    @property
    def blocks(self):
        return self.tree.blocks

    def parent_cut(self, b: int) -> int | None:
        return self.block_parent[b]

    def subtree_vertices(self, kind: str, x: int) -> set[int]:
        """Vertices of the subtree rooted at block ``x`` or cut vertex ``x``."""
        out: set[int] = set()
        stack = [(kind, x)]
        while stack:
            k, y = stack.pop()
            if k == "block":
                out.update(self.tree.blocks[y])
                stack.extend(("cut", c) for c in self.block_children[y])
            else:
                out.add(y)
                stack.extend(("block", b) for b in self.cut_children[y])
        return out


def root_at(t: BlockCutTree, b: int | None = None) -> RootedBlockCutTree:
    """Root ``t`` at block ``b`` (default: the block holding the smallest vertex id)."""
    if b is None:
        b = min(range(len(t.blocks)), key=lambda i: t.blocks[i][0])
    if not 0 <= b < len(t.blocks):
        raise DomainError(f"no block with index {b}")
    cuts = set(t.cut_vertices)
    block_parent: dict[int, int | None] = {b: None}
    block_children: dict[int, tuple[int, ...]] = {}
    cut_parent: dict[int, int] = {}
    cut_children: dict[int, tuple[int, ...]] = {}
    order: list[tuple[str, int]] = []
    queue = deque([("block", b)])
    while queue:
        kind, x = queue.popleft()
        order.append((kind, x))
        if kind == "block":
            kids = tuple(v for v in t.blocks[x] if v in cuts and v != block_parent[x])
            block_children[x] = kids
            for c in kids:
                cut_parent[c] = x
                queue.append(("cut", c))
        else:
            kids = tuple(sorted((y for y in t.cut_blocks[x] if y != cut_parent[x]),
                                key=lambda y: t.blocks[y]))
            cut_children[x] = kids
            for y in kids:
                block_parent[y] = x
                queue.append(("block", y))
    non_cut = {i: tuple(v for v in blk if v not in cuts) for i, blk in enumerate(t.blocks)}
    return RootedBlockCutTree(t, b, block_parent, block_children, cut_parent, cut_children, non_cut, order)
