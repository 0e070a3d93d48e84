"""Shared graph builders and the small-graph corpus used across tests."""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from grundy.generators import caterpillar, random_cograph, random_graph, random_tree
from grundy.graph import Graph, build_binomial_tree


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(x, a + y) for x in range(a) for y in range(b)])


def disjoint_union(*parts: Graph) -> Graph:
    g = Graph()
    for p in parts:
        base = g.n
        for _ in range(p.n):
            g.add_vertex()
        for u, v in p.edges():
            g.add_edge(base + u, base + v)
    return g


def join(a: Graph, b: Graph) -> Graph:
    g = disjoint_union(a, b)
    for u in range(a.n):
        for v in range(b.n):
            g.add_edge(u, a.n + v)
    return g


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    nodes = sorted(h.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(index[u], index[v]) for u, v in h.edges()])


def all_labeled_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for b, e in enumerate(pairs) if mask >> b & 1])


def atlas_graphs(max_n: int):
    """Every graph on at most ``max_n <= 7`` vertices, one per isomorphism class."""
    return [from_nx(h) for h in nx.graph_atlas_g() if 0 < h.number_of_nodes() <= max_n]


def corpus(max_n: int = 10) -> list[tuple[str, Graph]]:
    """Named and seeded graphs used by several property tests."""
    out = [("P4", path(4)), ("P6", path(6)), ("C4", cycle(4)), ("C5", cycle(5)),
           ("C7", cycle(7)), ("K4", complete(4)), ("K33", complete_bipartite(3, 3)),
           ("K3+K2", disjoint_union(complete(3), complete(2))),
           ("K3*K3", join(complete(3), complete(3))),
           ("petersen", from_nx(nx.petersen_graph()))]
    for i in range(1, 5):
        out.append((f"T{i}", build_binomial_tree(i).graph))
    for s in range(25):
        out.append((f"gnp{s}", random_graph(5 + s % 6, 0.2 + 0.03 * s, 1000 + s)))
    for s in range(8):
        out.append((f"tree{s}", random_tree(6 + s % 5, 2000 + s)))
        out.append((f"cater{s}", caterpillar(3, 2, 3000 + s)))
        out.append((f"cograph{s}", random_cograph(6 + s % 5, 4000 + s)))
    return [(name, g) for name, g in out if g.n <= max_n]
