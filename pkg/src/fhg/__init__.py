"""Exact welfare maximization for fractional hedonic games on graphs."""
from .block_dp import solve_block_utilitarian
from .core import (
    CoalitionStructure,
    DomainError,
    FHGError,
    ParseError,
    SizeCapError,
    UnsupportedMethodError,
    WeightedGraph,
    WelfareReport,
    agent_utility,
    connected_components,
    diameter,
    egalitarian_welfare,
    is_block_graph,
    utilitarian_welfare,
)
from .dispatch import solve
from .oracle import brute_force_clique_star_only, brute_force_max_egalitarian, brute_force_max_utilitarian
from .tw_egal import solve_tw_egalitarian
from .tw_util import solve_tw_utilitarian
from .vc_solver import max_k_bin_packing, min_vertex_cover, solve_vc_utilitarian

__version__ = "0.1.0"

__all__ = [
    "CoalitionStructure",
    "DomainError",
    "FHGError",
    "ParseError",
    "SizeCapError",
    "UnsupportedMethodError",
    "WeightedGraph",
    "WelfareReport",
    "agent_utility",
    "brute_force_clique_star_only",
    "brute_force_max_egalitarian",
    "brute_force_max_utilitarian",
    "connected_components",
    "diameter",
    "egalitarian_welfare",
    "is_block_graph",
    "max_k_bin_packing",
    "min_vertex_cover",
    "solve",
    "solve_block_utilitarian",
    "solve_tw_egalitarian",
    "solve_tw_utilitarian",
    "solve_vc_utilitarian",
    "utilitarian_welfare",
]
