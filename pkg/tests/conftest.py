import itertools
import random

import pytest

from fhg.core import WeightedGraph

ACCEPTANCE_LINES: list[str] = []


def path(n):
    return WeightedGraph.unweighted(n, [(i, i + 1) for i in range(n - 1)])


def clique(n):
    return WeightedGraph.unweighted(n, itertools.combinations(range(n), 2))


def star(leaves):
    return WeightedGraph.unweighted(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle(n):
    return WeightedGraph.unweighted(n, [(i, (i + 1) % n) for i in range(n)])


def triangle_pendant():
    return WeightedGraph.unweighted(4, [(0, 1), (0, 2), (1, 2), (0, 3)])


def random_weighted(seed, n_max=8, lo=-5, hi=5, unweighted=False):
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    p = rng.random()
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            w = 1
            if not unweighted:
                w = 0
                while w == 0:
                    w = rng.randint(lo, hi)
            edges.append((u, v, w))
    return WeightedGraph(n, edges)


@pytest.fixture
def record_acceptance():
    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
