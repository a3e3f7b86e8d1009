import itertools
import random
from fractions import Fraction

import pytest

from conftest import clique, path, star
from fhg.core import DomainError, SizeCapError, WeightedGraph, utilitarian_welfare
from fhg.instances import gen_small_cover_graph
from fhg.oracle import brute_force_max_utilitarian, search
from fhg.vc_solver import (
    BinPackingInstance,
    is_vertex_cover,
    max_k_bin_packing,
    min_vertex_cover,
    solve_vc_utilitarian,
)


def test_min_vertex_cover_examples():
    assert min_vertex_cover(star(3)).cover == (0,)
    vc = min_vertex_cover(path(4))
    assert vc.tau == 2 and is_vertex_cover(path(4), vc.cover)
    assert vc.cover == (0, 2)  # lexicographically smallest minimum
    assert min_vertex_cover(clique(4)).tau == 3
    assert min_vertex_cover(WeightedGraph(3)).tau == 0


def test_vertex_cover_cap():
    with pytest.raises(SizeCapError):
        min_vertex_cover(clique(6), cap=4)


@pytest.mark.parametrize("seed", range(20))
def test_cover_is_minimum(seed):
    g = gen_small_cover_graph(seed, 8, 4, 0.5)
    vc = min_vertex_cover(g)
    assert is_vertex_cover(g, vc.cover)
    for k in range(vc.tau):
        assert not any(is_vertex_cover(g, c) for c in itertools.combinations(range(g.n), k))


def test_bin_packing_examples():
    inst = BinPackingInstance([[3], [4], [Fraction(1, 2)]], [3])
    assert max_k_bin_packing(inst)[0] == Fraction(15, 2)
    value, assign = max_k_bin_packing(BinPackingInstance([[1, 0], [0, 2]], [1, 1]))
    assert value == 3 and assign == (0, 1)
    assert max_k_bin_packing(BinPackingInstance([[0, 0]] * 3, [2, 1]))[0] == 0


def test_bin_packing_rejects_bad_capacities():
    with pytest.raises(DomainError):
        max_k_bin_packing(BinPackingInstance([[1, 2]], [1, 1]))
    with pytest.raises(DomainError):
        BinPackingInstance([[1, 2]], [2, -1])


def test_bin_packing_large_values_use_python_ints():
    inst = BinPackingInstance([[10 ** 30, 1], [1, 10 ** 30]], [1, 1])
    assert max_k_bin_packing(inst)[0] == 2 * 10 ** 30


def test_solver_examples():
    assert solve_vc_utilitarian(star(3)).value == Fraction(3, 2)
    assert solve_vc_utilitarian(WeightedGraph(2, [(0, 1, 7)])).value == 7
    r = solve_vc_utilitarian(path(4))
    assert r.value == 2 and r.partition.to_lists() == [[0, 1], [2, 3]]
    assert solve_vc_utilitarian(WeightedGraph(0)).value == 0


@pytest.mark.parametrize("seed", range(25))
def test_oracle_and_coalition_bound(seed):
    rng = random.Random(seed)
    g = gen_small_cover_graph(seed, rng.randint(1, 9), 3, 0.6, (-5, 5))
    r = solve_vc_utilitarian(g)
    want = brute_force_max_utilitarian(g).value
    assert r.value == want == utilitarian_welfare(g, r.partition)
    assert search(g, max_blocks=min_vertex_cover(g).tau + 1)[0] == want


@pytest.mark.parametrize("seed", range(15))
def test_symmetry_reduction_is_safe(seed):
    g = gen_small_cover_graph(seed, 6, 2, 0.7, (-3, 4))
    assert solve_vc_utilitarian(g).value == solve_vc_utilitarian(g, symmetry_reduction=False).value


def test_supplied_cover_must_cover():
    with pytest.raises(DomainError):
        solve_vc_utilitarian(path(4), cover=[0])
    assert solve_vc_utilitarian(path(4), cover=[1, 2]).value == 2
