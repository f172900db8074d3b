import functools
import itertools

import networkx as nx
import pytest

from hypercop.core import Graph
from hypercop.generators import FamilySpec, generate

# filled by test_acceptance, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def from_nx(G) -> Graph:
    G = nx.convert_node_labels_to_integers(G)
    return Graph(G.number_of_nodes(), list(G.edges()))


@functools.cache
def small_corpus() -> list[tuple[str, Graph]]:
    """Every family at n <= 10, plus all connected graphs on <= 6 vertices."""
    specs = []
    specs += [FamilySpec("path", (n,)) for n in range(1, 11)]
    specs += [FamilySpec("cycle", (n,)) for n in range(3, 11)]
    specs += [FamilySpec("complete", (n,)) for n in range(1, 11)]
    specs += [FamilySpec("grid", (r, c)) for r in range(2, 4) for c in range(r, 6) if r * c <= 10]
    specs += [FamilySpec("hypercube", (d,)) for d in range(0, 4)]
    specs += [FamilySpec("subdivided_grid", (1,))]
    specs += [FamilySpec("random_tree", (n,), seed) for n in range(2, 11) for seed in range(5)]
    specs += [FamilySpec("random_gnp", (n, p), seed) for n in range(4, 11) for p in (300, 500) for seed in range(5)]
    specs += [
        FamilySpec("random_block", (b, k), seed)
        for b, k in ((2, 3), (3, 3), (4, 3), (3, 2), (6, 2), (2, 4))
        for seed in range(5)
    ]
    out = [(f"{s.family}{s.params}@{s.seed}", generate(s)) for s in specs]
    out += [
        (f"atlas{i}", from_nx(G))
        for i, G in enumerate(nx.graph_atlas_g())
        if 0 < G.number_of_nodes() <= 6 and nx.is_connected(G)
    ]
    return out


@functools.cache
def exact_corpus() -> list[tuple[str, Graph]]:
    """Graphs with n <= 60 where the O(n^4) oracle is cheap."""
    specs = []
    specs += [FamilySpec("path", (n,)) for n in (2, 5, 17, 40)]
    specs += [FamilySpec("cycle", (n,)) for n in (3, 4, 5, 6, 7, 9, 12, 15, 20, 31, 48, 60)]
    specs += [FamilySpec("complete", (n,)) for n in (2, 4, 9)]
    specs += [FamilySpec("grid", rc) for rc in ((2, 2), (2, 7), (3, 3), (3, 8), (4, 4), (5, 5), (6, 6), (4, 12))]
    specs += [FamilySpec("hypercube", (d,)) for d in (1, 2, 3, 4, 5)]
    specs += [FamilySpec("subdivided_grid", (N,)) for N in (1, 2)]
    specs += [FamilySpec("random_tree", (n,), seed) for n in (12, 30, 60) for seed in range(3)]
    specs += [FamilySpec("random_gnp", (n, p), seed) for n, p in ((12, 300), (20, 200), (30, 150), (45, 100), (60, 80)) for seed in range(3)]
    specs += [FamilySpec("random_block", (b, k), seed) for b, k in ((5, 4), (12, 3)) for seed in range(2)]
    return [(f"{s.family}{s.params}@{s.seed}", generate(s)) for s in specs]


@functools.cache
def median_corpus() -> list[tuple[str, Graph]]:
    """Median graphs: trees, grids, hypercubes and tree x path products."""
    out = [(n, g) for n, g in exact_corpus() if n.startswith(("path", "grid", "hypercube", "random_tree"))]
    for seed in range(3):
        T = generate(FamilySpec("random_tree", (8,), seed))
        G = nx.cartesian_product(nx.Graph(T.edges()), nx.path_graph(3))
        out.append((f"tree8@{seed}xP3", from_nx(G)))
    out.append(("P4xP3xP2", from_nx(nx.cartesian_product(nx.grid_2d_graph(4, 3), nx.path_graph(2)))))
    return out


@pytest.fixture(scope="session")
def corpus_small():
    return small_corpus()


@pytest.fixture(scope="session")
def corpus_exact():
    return exact_corpus()


def pairs(n):
    return itertools.combinations(range(n), 2)
