"""Randomized properties across modules, driven by hypothesis."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from fhg.block_dp import solve_block_utilitarian
from fhg.core import (
    CoalitionStructure,
    WeightedGraph,
    as_rational,
    egalitarian_welfare,
    format_rational,
    utilitarian_welfare,
)
from fhg.instances import gen_random_block_graph, parse_graph, serialize_graph
from fhg.oracle import brute_force_max_egalitarian, brute_force_max_utilitarian
from fhg.treedecomp import heuristic_decomposition, make_nice, validate_nice, width
from fhg.tw_egal import solve_tw_egalitarian
from fhg.tw_util import solve_tw_utilitarian

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if draw(st.booleans()):
                w = draw(fractions.filter(lambda x: x != 0))
                edges.append((u, v, w))
    return WeightedGraph(n, edges)


@given(fractions, fractions)
def test_rational_literals_round_trip(p, q):
    assert as_rational(format_rational(p)) == p
    assert (p + q) - q == p


@given(graphs())
def test_serialization_round_trip(g):
    for fmt in ("edge_list", "json"):
        back = parse_graph(serialize_graph(g, fmt), fmt)
        assert back.n == g.n and back.edges == g.edges


@given(graphs(), st.data())
def test_welfare_identities(g, data):
    labels = data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
    cs = CoalitionStructure.from_labels(labels)
    total = Fraction(0)
    for c in cs.to_lists():
        inside = sum((g.weight(u, v) for u in c for v in c if u < v and g.has_edge(u, v)), Fraction(0))
        total += 2 * inside / len(c)
    assert utilitarian_welfare(g, cs) == total
    if g.n:
        assert egalitarian_welfare(g, cs) * g.n <= total


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_treewidth_matches_oracle(g):
    assert solve_tw_utilitarian(g).value == brute_force_max_utilitarian(g).value
    assert solve_tw_egalitarian(g).value == brute_force_max_egalitarian(g).value


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=9))
def test_nice_decompositions_are_valid(g):
    td = heuristic_decomposition(g)
    nt = make_nice(td, g)
    assert validate_nice(g, nt) is None and width(nt) == width(td)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_block_dp_matches_oracle(seed):
    g = gen_random_block_graph(seed, 3, 3, 0.3)
    assert solve_block_utilitarian(g).value == brute_force_max_utilitarian(g).value
