from fractions import Fraction

import pytest

from conftest import clique, cycle, path, star, triangle_pendant
from fhg.block_dp import BlockDP, block_table, cut_table, leaf_gain, solve_block_utilitarian, star_merge_delta
from fhg.blockcut import build_block_cut_tree
from fhg.core import CoalitionStructure, UnsupportedMethodError, WeightedGraph, utilitarian_welfare
from fhg.instances import gen_random_block_graph
from fhg.oracle import PartitionIterator, brute_force_max_utilitarian

# oracle values for gen_random_block_graph(seed, 3, 3, 0.3), frozen
FROZEN = {0: "3", 1: "3", 2: "7/3", 3: "7/3", 4: "3/2", 5: "10/3", 6: "3", 7: "3"}


@pytest.mark.parametrize("g, want", [
    (path(4), Fraction(2)),
    (triangle_pendant(), Fraction(2)),
    (star(3), Fraction(3, 2)),
    (clique(4), Fraction(3)),
    (path(3), Fraction(4, 3)),
    (WeightedGraph(1), Fraction(0)),
])
def test_examples(g, want):
    r = solve_block_utilitarian(g)
    assert r.value == want
    assert utilitarian_welfare(g, r.partition) == want


@pytest.mark.parametrize("seed", sorted(FROZEN))
def test_frozen_corpus(seed):
    assert solve_block_utilitarian(gen_random_block_graph(seed, 3, 3, 0.3)).value == Fraction(FROZEN[seed])


def test_rejects_unsupported_input():
    with pytest.raises(UnsupportedMethodError):
        solve_block_utilitarian(WeightedGraph(2, [(0, 1, 2)]))
    with pytest.raises(UnsupportedMethodError):
        solve_block_utilitarian(cycle(4))


def test_disconnected_input_is_solved_per_component():
    g = WeightedGraph.unweighted(7, [(0, 1), (1, 2), (0, 2), (4, 5), (5, 6)])
    r = solve_block_utilitarian(g)
    assert r.value == 2 + Fraction(4, 3)
    assert r.partition.to_lists() == [[0, 1, 2], [3], [4, 5, 6]]


def test_star_arithmetic():
    # merging an (l-1)-leaf star with one more edge: 2l/(l+1) - 2(l-1)/l - 1
    for ell in range(1, 12):
        assert star_merge_delta(ell) == Fraction(2 * ell, ell + 1) - Fraction(2 * (ell - 1), ell) - 1
        assert leaf_gain(ell) == Fraction(2 * (ell + 1), ell + 2) - Fraction(2 * ell, ell + 1)


def test_cut_table_single_k2_child():
    ct = cut_table([{"iso": Fraction(0), "cl": Fraction(1), "sc": Fraction(1), "sl": Fraction(1)}])
    assert ct.g_star("sl") == 1
    assert ct.g_star("iso") == 0


def test_cut_table_scu_bonus():
    ct = cut_table([{"iso": Fraction(0), "cl": None, "sc": Fraction(5, 2), "sl": None}])
    assert ct.g_star("sc", 1) == Fraction(5, 2)
    assert ct.g_star("scu") >= ct.g_star("sc", 1) + Fraction(1, 3)
    assert ct.g_star("fin") == Fraction(5, 2)


def test_cut_table_without_star_option():
    ct = cut_table([{"iso": Fraction(1), "cl": Fraction(2), "sc": None, "sl": Fraction(1)}])
    assert ct.g_star("scu") is None
    assert ct.g_star("sc", 1) is None
    assert ct.g_star("fin") == 2


def test_block_table_leaf_k2():
    bt = block_table(1, [])
    assert bt.f_star("iso", 0) == 0
    assert bt.f_star("cl", 0) == 1
    assert bt.f_star("sl", 0) == 1
    assert bt.f_star("sc", 0) == 1


def test_block_table_without_non_cut_vertices():
    child = {"iso": Fraction(0), "fin": Fraction(1), "scu": None}
    bt = block_table(0, [child])
    assert bt.f_star("cl", 0) is None
    assert bt.f_star("cl", 1) == 1  # the child joins c_p as a K2


def test_block_table_k3_leaf():
    assert block_table(2, []).f_star("sc", 0) == 1


def test_root_only_takes_iso():
    bt = block_table(3, [], has_parent=False)
    assert bt.f_star("iso", 0) == 2
    assert bt.f_star("cl", 0) is None


def test_root_value_examples():
    assert BlockDP(clique(4)).root_value() == 3
    t = build_block_cut_tree(path(3))
    assert BlockDP(path(3), t.blocks.index((0, 1))).root_value() == Fraction(4, 3)


def _is_clique_or_star(g, block):
    pairs = [(a, b) for i, a in enumerate(block) for b in block[i + 1:]]
    edges = sum(1 for a, b in pairs if g.has_edge(a, b))
    k = len(block)
    if edges == k * (k - 1) // 2:
        return True
    return edges == k - 1 and any(all(g.has_edge(c, x) for x in block if x != c) for c in block)


@pytest.mark.parametrize("seed", range(40))
def test_oracle_root_invariance_and_shape(seed):
    g = gen_random_block_graph(seed, 4 - seed % 2, 3 + seed % 2, 0.4)
    assert g.n <= 10
    want = brute_force_max_utilitarian(g).value
    blocks = build_block_cut_tree(g).blocks
    for root in range(len(blocks)):
        dp = BlockDP(g, root)
        assert dp.root_value() == want
        p = dp.partition()
        assert utilitarian_welfare(g, p) == want
        assert all(_is_clique_or_star(g, b) for b in p.blocks)


def _role_ok(g, C, cp, role):
    others = [y for y in C if y != cp]
    indep = not any(g.has_edge(a, b) for i, a in enumerate(others) for b in others[i + 1:])
    if role == "iso":
        return len(C) == 1
    if len(C) < 2:
        return False
    if role == "cl":
        return all(g.has_edge(a, b) for i, a in enumerate(C) for b in C[i + 1:])
    if role == "sc":
        return indep and all(g.has_edge(cp, y) for y in others)
    for x in others:  # sl: some centre x with c_p among its leaves
        rest = [y for y in C if y != x]
        if all(g.has_edge(x, y) for y in rest) and not any(
                g.has_edge(a, b) for i, a in enumerate(rest) for b in rest[i + 1:]):
            return True
    return False


@pytest.mark.parametrize("seed", range(0, 60, 3))
def test_k_semantics_against_constrained_enumeration(seed):
    g = gen_random_block_graph(seed, 4, 3, 0.4)
    dp = BlockDP(g)
    t = dp.tree
    for b, bt in dp.blocks.items():
        cp = t.block_parent[b]
        vb = sorted(t.subtree_vertices("block", b))
        if cp is None or len(vb) > 8:
            continue
        sub, old = g.induced_subgraph(vb)
        idx = {v: i for i, v in enumerate(old)}
        kids = t.block_children[b]
        below = {c: {idx[v] for v in t.subtree_vertices("cut", c)} - {idx[c]} for c in kids}
        best: dict = {}
        unconstrained = Fraction(0)
        for rgs in PartitionIterator(sub.n):
            p = CoalitionStructure.from_labels(rgs)
            val = utilitarian_welfare(sub, p)
            unconstrained = max(unconstrained, val)
            coal = list(p.coalition_of(idx[cp]))
            k = sum(1 for c in kids if not set(p.coalition_of(idx[c])) & below[c])
            for role in ("iso", "cl", "sc", "sl"):
                if _role_ok(sub, coal, idx[cp], role) and ((role, k) not in best or val > best[role, k]):
                    best[role, k] = val
        for role in ("iso", "cl", "sc", "sl"):
            for k in range(len(kids) + 1):
                got = bt.f_star(role, k)
                assert got == best.get((role, k)), (role, k)
                assert got is None or got <= unconstrained + 1
