"""Method selection shared by the library entry point and the CLI."""
from __future__ import annotations

import os
from fractions import Fraction

from .block_dp import solve_block_utilitarian
from .core import (
    DomainError,
    SizeCapError,
    UnsupportedMethodError,
    WeightedGraph,
    WelfareReport,
    is_block_graph,
)
from .oracle import DEFAULT_CAP, brute_force_max_egalitarian, brute_force_max_utilitarian
from .treedecomp import NiceTreeDecomposition
from .tw_egal import solve_tw_egalitarian
from .tw_util import solve_tw_utilitarian
from .vc_solver import DEFAULT_TAU_CAP, min_vertex_cover, solve_vc_utilitarian

OBJECTIVES = ("utilitarian", "egalitarian")
METHODS = ("auto", "brute", "block", "treewidth", "vertexcover")
_SUPPORTS = {
    "utilitarian": ("brute", "block", "treewidth", "vertexcover"),
    "egalitarian": ("brute", "treewidth"),
}
# test hook: FHG_CORRUPT=<method> perturbs that method's result so cross-checks must fail
CORRUPT_ENV = "FHG_CORRUPT"


def _check_objective(objective: str) -> None:
    if objective not in OBJECTIVES:
        raise DomainError(f"unknown objective {objective!r}")


def block_applicable(g: WeightedGraph) -> bool:
    return g.is_unweighted() and is_block_graph(g)


def vc_applicable(g: WeightedGraph, tau_cap: int) -> bool:
    try:
        min_vertex_cover(g, tau_cap)
    except SizeCapError:
        return False
    return True


def auto_method(g: WeightedGraph, objective: str, tau_cap: int = DEFAULT_TAU_CAP) -> str:
    _check_objective(objective)
    if objective == "egalitarian":
        return "treewidth"
    if block_applicable(g):
        return "block"
    if vc_applicable(g, tau_cap):
        return "vertexcover"
    return "treewidth"


def applicable_methods(g: WeightedGraph, objective: str, *, oracle_cap: int = DEFAULT_CAP,
                       tau_cap: int = DEFAULT_TAU_CAP) -> list[str]:
    """Methods that can run on ``g``, sorted by name."""
    _check_objective(objective)
    out = []
    for m in _SUPPORTS[objective]:
        if m == "brute" and g.n > oracle_cap:
            continue
        if m == "block" and not block_applicable(g):
            continue
        if m == "vertexcover" and not vc_applicable(g, tau_cap):
            continue
        out.append(m)
    return sorted(out)


def solve(
    g: WeightedGraph,
    objective: str = "utilitarian",
    method: str = "auto",
    *,
    ntd: NiceTreeDecomposition | None = None,
    oracle_cap: int = DEFAULT_CAP,
    tau_cap: int = DEFAULT_TAU_CAP,
    jobs: int | None = None,
) -> WelfareReport:
    """Solve with the named method; ``auto`` picks block, then vertex cover, then treewidth."""
    _check_objective(objective)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = auto_method(g, objective, tau_cap)
    if method not in _SUPPORTS[objective]:
        raise UnsupportedMethodError(f"method {method!r} does not support the {objective} objective")
    if method == "brute":
        fn = brute_force_max_utilitarian if objective == "utilitarian" else brute_force_max_egalitarian
        report = fn(g, cap=oracle_cap, jobs=jobs)
    elif method == "block":
        report = solve_block_utilitarian(g)
    elif method == "vertexcover":
        report = solve_vc_utilitarian(g, tau_cap)
    elif objective == "utilitarian":
        report = solve_tw_utilitarian(g, ntd)
    else:
        report = solve_tw_egalitarian(g, ntd)
    if os.environ.get(CORRUPT_ENV) == method:
        report = WelfareReport(report.objective, report.value + Fraction(1, 7), report.partition,
                               report.method, report.extra)
    return report
