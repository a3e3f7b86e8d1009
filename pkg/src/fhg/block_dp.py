"""Maximum utilitarian welfare on unweighted block graphs.

Bottom-up over a rooted block-cut tree. A block node ``B`` stores
``f*(B, role, k)``: the best welfare of ``G[V_B]`` when its parent cut vertex
plays ``role`` (iso, cl, sc, sl) and exactly ``k`` child cut vertices keep no
vertex of their own subtree in their coalition. A cut node ``c`` stores
``g*(c, role)`` for iso, cl, sc_l, sl plus the derived scu and fin values.

Values are held as integers in units of ``1/D`` with ``D = lcm(1..Delta+2)``,
which makes every star-merge and leaf-absorption term integral.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from ._jit import pure
from .blockcut import RootedBlockCutTree, build_block_cut_tree, root_at
from .core import (
    CoalitionStructure,
    UnsupportedMethodError,
    WeightedGraph,
    WelfareReport,
    connected_components,
    is_block_graph,
    lcm_range,
)
from .kernels import CL, G_CL, G_ISO, G_SL, ISO, ROLE_NAMES, SC, SC_BASE, SL

_INT64_SAFE = 2 ** 62
_ROLE = {name: i for i, name in enumerate(ROLE_NAMES)}


def star_merge_delta(ell: int) -> Fraction:
    """Welfare change when an (ell-1)-leaf star and a single edge become an ell-leaf star."""
    return Fraction(-(ell - 1) * (ell + 2), ell * (ell + 1))


def leaf_gain(ell: int) -> Fraction:
    """Welfare gained by adding one leaf to an ell-leaf star."""
    return Fraction(2, (ell + 1) * (ell + 2))


class _Arith:
    """Scaled-integer arithmetic shared by every table of one solve."""

    def __init__(self, unit: int, bound: int):
        self.unit = unit
        if bound < _INT64_SAFE:
            self.dtype = np.int64
            self.neg = -_INT64_SAFE
        else:
            self.dtype = object
            self.neg = -(bound * 4 + 1)
        self.compiled = self.dtype is np.int64

    def fn(self, kernel):
        return kernel if self.compiled else pure(kernel)

    def arr(self, shape):
        return kernels.empty_like_values(shape, self.dtype)

    def scale(self, q: Fraction | None):
        if q is None:
            return self.neg
        x = q * self.unit
        if x.denominator != 1:
            raise ValueError(f"{q} is not a multiple of 1/{self.unit}")
        return int(x)

    def value(self, x) -> Fraction | None:
        x = int(x)
        return None if x == self.neg else Fraction(x, self.unit)


@dataclass
class CutTable:
    """Cut-node table; ``g[row, i]`` covers the first ``i`` child blocks."""

    g: np.ndarray
    iso: object
    fin: object
    scu: object
    fin_row: int
    scu_ell: int
    arith: _Arith

    @property
    def degree(self) -> int:
        return self.g.shape[1] - 1

    def g_star(self, role: str, ell: int | None = None) -> Fraction | None:
        """Exact ``g*(c, role)``; ``None`` stands for an infeasible role."""
        d = self.degree
        if role == "iso":
            return self.arith.value(self.iso)
        if role == "fin":
            return self.arith.value(self.fin)
        if role == "scu":
            return self.arith.value(self.scu)
        if role == "cl":
            return self.arith.value(self.g[G_CL, d])
        if role == "sl":
            return self.arith.value(self.g[G_SL, d])
        if role == "sc":
            if ell is None or not 1 <= ell:
                raise ValueError("sc needs a leaf count ell >= 1")
            if ell > d:
                return None
            return self.arith.value(self.g[SC_BASE + ell - 1, d])
        raise ValueError(f"unknown cut role {role!r}")


@dataclass
class BlockTable:
    fstar: np.ndarray  # [role, k]
    src: np.ndarray  # winning configuration per cell (-1: no scu child)
    children: tuple[int, ...]
    r: int
    has_parent: bool
    arith: _Arith
    a: np.ndarray
    F: np.ndarray
    S: np.ndarray

    def f_star(self, role: str, k: int) -> Fraction | None:
        if not 0 <= k < self.fstar.shape[1]:
            return None
        return self.arith.value(self.fstar[_ROLE[role], k])

    def best(self, role: int):
        """Max over k of ``f*(B, role, k)`` and the first k attaining it."""
        row = self.fstar[role]
        neg = self.arith.neg
        best_k, best = -1, neg
        for k in range(row.shape[0]):
            if row[k] != neg and (best == neg or row[k] > best):
                best, best_k = row[k], k
        return best, best_k

    def case_table(self, role: str, k: int, center: int | None = None, leaf=None):
        """Final-row value of one configuration (``f`` or ``f_center^leaf``).

        ``leaf`` is a child cut vertex id, ``"R"`` for a non-cut vertex or
        ``"parent"`` for the parent cut vertex.
        """
        m = len(self.children)
        ci = -1 if center is None else self.children.index(center)
        if center is None:
            li = -1
        elif leaf == "R":
            li = m
        elif leaf == "parent":
            li = m + 1
        else:
            li = self.children.index(leaf)
        tab, _, n_free, base_k, p_off, cp_leaf, ok = _config(self, _ROLE[role], ci, li)
        kk = k - base_k
        if not ok or not 0 <= kk <= n_free:
            return None
        _, valid = self.arith.fn(kernels._local)(_ROLE[role], p_off + kk, cp_leaf)
        if not valid:
            return None
        return self.arith.value(tab[n_free, kk])


def _config(bt: BlockTable, role: int, center: int, leaf: int):
    m = len(bt.children)
    tab = bt.arith.arr((m + 1, m + 1))
    order = np.zeros(max(m, 1), dtype=np.int64)
    res = bt.arith.fn(kernels.config_table)(
        role, center, leaf, bt.a, bt.F, bt.S, bt.r, bt.has_parent, bt.arith.unit, bt.arith.neg, tab, order)
    n_free, base_k, p_off, cp_leaf, ok = res
    return tab, order, int(n_free), int(base_k), int(p_off), bool(cp_leaf), bool(ok)


def _cut_from_children(arith: _Arith, child_best: Sequence[Sequence]) -> CutTable:
    """``child_best[j][role]`` is max_k f*(B_j, role, k) for the j-th child block."""
    d = len(child_best)
    neg = arith.neg
    iso, cl, sc, sl = (arith.arr(d) for _ in range(4))
    for j, best in enumerate(child_best):
        iso[j], cl[j], sc[j], sl[j] = best[ISO], best[CL], best[SC], best[SL]
    delta = arith.arr(d + 1)
    for ell in range(1, d + 1):
        delta[ell] = arith.scale(star_merge_delta(ell))
    g = arith.arr((SC_BASE + d, d + 1))
    arith.fn(kernels.cut_table)(iso, cl, sc, sl, delta, neg, g)
    fin, fin_row = neg, -1
    for row in [G_CL] + [SC_BASE + ell - 1 for ell in range(1, d + 1)] + [G_SL]:
        if g[row, d] != neg and (fin == neg or g[row, d] > fin):
            fin, fin_row = g[row, d], row
    scu, scu_ell = neg, -1
    for ell in range(1, d + 1):
        x = g[SC_BASE + ell - 1, d]
        if x == neg:
            continue
        x = x + arith.scale(leaf_gain(ell))
        if scu == neg or x > scu:
            scu, scu_ell = x, ell
    return CutTable(g, g[G_ISO, d], fin, scu, fin_row, scu_ell, arith)


def _block_from_children(arith: _Arith, children: Sequence[int], r: int, has_parent: bool,
                         cut_tables: Sequence[CutTable]) -> BlockTable:
    m = len(children)
    a, F, S = arith.arr(max(m, 1)), arith.arr(max(m, 1)), arith.arr(max(m, 1))
    for i, ct in enumerate(cut_tables):
        a[i], F[i], S[i] = ct.iso, ct.fin, ct.scu
    a, F, S = a[:m], F[:m], S[:m]
    fstar = arith.arr((4, m + 1))
    src = np.zeros((4, m + 1), dtype=np.int64)
    tab = arith.arr((m + 1, m + 1))
    order = np.zeros(max(m, 1), dtype=np.int64)
    arith.fn(kernels.block_table)(a, F, S, r, has_parent, arith.unit, arith.neg, fstar, src, tab, order)
    return BlockTable(fstar, src, tuple(children), r, has_parent, arith, a, F, S)


def _arith_for(max_children: int, n: int, extra: Sequence[Fraction] = ()) -> _Arith:
    unit = lcm_range(max_children + 2)
    for q in extra:
        if q is not None:
            unit = unit * q.denominator // np.gcd(unit, q.denominator)
    top = max([abs(q) for q in extra if q is not None] + [Fraction(n + 1)])
    return _Arith(int(unit), int((top + n + 4) * unit * 4))


def cut_table(children: Sequence[Mapping[str, Fraction | None]]) -> CutTable:
    """Cut-node table from the child blocks' best values per role.

    Each mapping gives ``max_k f*(B_j, role, k)`` for roles iso, cl, sc, sl;
    ``None`` marks an infeasible role.
    """
    vals = [child.get(role) for child in children for role in ROLE_NAMES]
    arith = _arith_for(len(children), len(children), vals)
    rows = [[arith.scale(child.get(role)) for role in ROLE_NAMES] for child in children]
    return _cut_from_children(arith, rows)


def block_table(r: int, children: Sequence[CutTable | Mapping[str, Fraction | None]],
                has_parent: bool = True) -> BlockTable:
    """Block-node table for a block with ``r`` non-cut vertices.

    ``children`` are the child cut vertices in processing order, each a
    ``CutTable`` or a mapping with exact ``iso``, ``fin`` and ``scu`` values.
    With ``has_parent=False`` the parent is the virtual isolated cut vertex
    used at the root.
    """
    summaries = []
    for c in children:
        if isinstance(c, CutTable):
            summaries.append({k: c.g_star(k) for k in ("iso", "fin", "scu")})
        else:
            summaries.append(dict(c))
    vals = [s.get(k) for s in summaries for k in ("iso", "fin", "scu")]
    arith = _arith_for(len(children), r + len(children), vals)

    class _Summary:
        def __init__(self, s):
            self.iso = arith.scale(s.get("iso"))
            self.fin = arith.scale(s.get("fin"))
            self.scu = arith.scale(s.get("scu"))

    return _block_from_children(arith, list(range(len(children))), r, has_parent,
                                [_Summary(s) for s in summaries])


class BlockDP:
    """All tables of one connected block graph, plus reconstruction."""

    def __init__(self, g: WeightedGraph, root: int | None = None):
        self.g = g
        self.tree: RootedBlockCutTree = root_at(build_block_cut_tree(g), root)
        t = self.tree
        max_children = max([len(v) for v in t.block_children.values()]
                           + [len(v) for v in t.cut_children.values()] + [0])
        self.arith = _arith_for(max(max_children, g.max_degree), g.n)
        self.blocks: dict[int, BlockTable] = {}
        self.cuts: dict[int, CutTable] = {}
        for kind, x in reversed(t.order):
            if kind == "cut":
                rows = [[self.blocks[b].best(role)[0] for role in range(4)] for b in t.cut_children[x]]
                self.cuts[x] = _cut_from_children(self.arith, rows)
            else:
                kids = t.block_children[x]
                self.blocks[x] = _block_from_children(
                    self.arith, kids, len(t.non_cut[x]), t.block_parent[x] is not None,
                    [self.cuts[c] for c in kids])

    def root_value(self) -> Fraction:
        best, _ = self.blocks[self.tree.root].best(ISO)
        return self.arith.value(best)

    def f_star(self, block: int, role: str, k: int) -> Fraction | None:
        return self.blocks[block].f_star(role, k)

    def g_star(self, cut: int, role: str, ell: int | None = None) -> Fraction | None:
        return self.cuts[cut].g_star(role, ell)

    # -- reconstruction ---------------------------------------------------

    def partition(self) -> CoalitionStructure:
        labels = [-1] * self.g.n
        counter = [0]

        def fresh():
            counter[0] += 1
            return counter[0] - 1

        root = self.tree.root
        _, k = self.blocks[root].best(ISO)
        tasks = [("block", root, ISO, k, None)]
        while tasks:
            task = tasks.pop()
            if task[0] == "block":
                self._expand_block(task[1:], labels, fresh, tasks)
            else:
                self._expand_cut(task[1:], labels, fresh, tasks)
        if min(labels, default=0) < 0:
            raise AssertionError("reconstruction left vertices unassigned")
        return CoalitionStructure.from_labels(labels)

    def _expand_block(self, task, labels, fresh, tasks):
        b, role, k, cp_id = task
        bt = self.blocks[b]
        kids = bt.children
        m = len(kids)
        code = int(bt.src[role, k])
        center, leaf = (-1, -1) if code == -1 else divmod(code, m + 2)
        tab, order, n_free, base_k, p_off, cp_leaf, ok = _config(bt, role, center, leaf)
        assert ok
        neg = self.arith.neg
        unit = self.arith.unit
        local = self.arith.fn(kernels._local)
        kk = k - base_k
        plain_kids, fin_kids = [], []
        for i in range(n_free, 0, -1):
            c = int(order[i - 1])
            if kk >= 1 and tab[i - 1, kk - 1] != neg and bt.a[c] != neg:
                hp, _ = local(role, p_off + kk - 1, cp_leaf)
                hn, _ = local(role, p_off + kk, cp_leaf)
                if tab[i, kk] == tab[i - 1, kk - 1] + bt.a[c] + (hn - hp) * unit:
                    plain_kids.append(c)
                    kk -= 1
                    continue
            fin_kids.append(c)
        assert kk == 0
        plain_kids.reverse()
        rest = list(self.tree.non_cut[b])
        if center >= 0:
            x = kids[center]
            cid = cp_id if leaf == m + 1 else fresh()
            labels[x] = cid
            if leaf == m:
                labels[rest.pop(0)] = cid
            elif leaf < m:
                y = kids[leaf]
                labels[y] = cid
                tasks.append(("cut", y, "iso", None))
            tasks.append(("cut", x, "scu", None))
        plain = rest + [kids[c] for c in plain_kids]
        if role in (ISO,) or cp_leaf:
            group_id = fresh()
            for v in plain:
                labels[v] = group_id
        elif role == CL:
            for v in plain:
                labels[v] = cp_id
        else:
            labels[plain[0]] = cp_id
            group_id = fresh()
            for v in plain[1:]:
                labels[v] = group_id
        for c in plain_kids:
            tasks.append(("cut", kids[c], "iso", None))
        for c in fin_kids:
            tasks.append(("cut", kids[c], "fin", None))

    def _expand_cut(self, task, labels, fresh, tasks):
        c, mode, _ = task
        ct = self.cuts[c]
        blocks = self.tree.cut_children[c]
        d = len(blocks)
        neg = self.arith.neg
        roles = [ISO] * d
        if mode == "fin":
            labels[c] = fresh()
            row = ct.fin_row
        elif mode == "scu":
            row = SC_BASE + ct.scu_ell - 1
        else:
            row = G_ISO
        g = ct.g
        i = d
        while i > 0 and row != G_ISO:
            iso_i = self.blocks[blocks[i - 1]].best(ISO)[0]
            first = g[row, i - 1]
            if first != neg and iso_i != neg and g[row, i] == first + iso_i:
                i -= 1
                continue
            if row == G_CL:
                roles[i - 1], row = CL, G_ISO
            elif row == G_SL:
                roles[i - 1], row = SL, G_ISO
            else:
                roles[i - 1] = SC
                row = G_ISO if row == SC_BASE else row - 1
            i -= 1
        for blk, role in zip(blocks, roles):
            _, k = self.blocks[blk].best(role)
            tasks.append(("block", blk, role, k, labels[c]))


def solve_block_utilitarian(g: WeightedGraph, root: int | None = None) -> WelfareReport:
    """Exact maximum utilitarian welfare of an unweighted block graph.

    Disconnected inputs are solved per component. ``root`` picks the root block
    (index into the block list) and is only meaningful for connected inputs.
    """
    if not g.is_unweighted():
        raise UnsupportedMethodError("the block-graph DP handles unweighted graphs only")
    if not is_block_graph(g):
        raise UnsupportedMethodError("input is not a block graph")
    labels = [-1] * g.n
    total = Fraction(0)
    next_id = 0
    for comp in connected_components(g):
        if len(comp) == 1:
            labels[comp[0]] = next_id
            next_id += 1
            continue
        sub, old = g.induced_subgraph(comp)
        dp = BlockDP(sub, root)
        total += dp.root_value()
        for blk in dp.partition().blocks:
            for v in blk:
                labels[old[v]] = next_id
            next_id += 1
    return WelfareReport("utilitarian", total, CoalitionStructure.from_labels(labels), "block")
