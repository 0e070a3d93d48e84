"""Seeded random graph families for tests, benchmarks and the ``gen`` command.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import InvalidArgument
from .graph import Graph


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi ``G(n, p)``; pairs are sampled in lexicographic order."""
    if n < 0 or not 0 <= p <= 1:
        raise InvalidArgument("need n >= 0 and 0 <= p <= 1")
    rng = rng_for(seed)
    pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


def random_tree(n: int, seed: int) -> Graph:
    rng = rng_for(seed)
    g = Graph(n)
    for v in range(1, n):
        g.add_edge(v, int(rng.integers(0, v)))
    return g


def caterpillar(spine: int, legs: int | list[int], seed: int | None = None) -> Graph:
    """A path of ``spine`` vertices, each with pendant leaves.

    ``legs`` is a fixed count per spine vertex, a list of counts, or with a
    ``seed`` an upper bound for random counts.
    """
    if spine < 1:
        raise InvalidArgument("spine needs at least one vertex")
    if isinstance(legs, int):
        if seed is None:
            counts = [legs] * spine
        else:
            counts = [int(c) for c in rng_for(seed).integers(0, legs + 1, size=spine)]
    else:
        counts = list(legs)
        if len(counts) != spine:
            raise InvalidArgument("one leg count per spine vertex")
    g = Graph(spine)
    for v in range(spine - 1):
        g.add_edge(v, v + 1)
    for v, c in enumerate(counts):
        for _ in range(c):
            g.add_edge(v, g.add_vertex())
    return g


def random_cograph(n: int, seed: int) -> Graph:
    """Random cograph built by recursive disjoint unions and joins."""
    if n < 1:
        raise InvalidArgument("need n >= 1")
    rng = rng_for(seed)
    g = Graph(n)
    # split blocks top-down; each split is a union or a join at random
    stack = [list(range(n))]
    while stack:
        block = stack.pop()
        if len(block) < 2:
            continue
        cut = int(rng.integers(1, len(block)))
        left, right = block[:cut], block[cut:]
        if rng.random() < 0.5:
            for a in left:
                for b in right:
                    g.add_edge(a, b)
        stack.extend((left, right))
    return g


def random_twin_graph(sizes: list[int], kinds: list[str], p: float, seed: int) -> Graph:
    """Blow up a random quotient: class ``i`` has ``sizes[i]`` vertices.

    ``kinds[i]`` is ``"clique"`` or ``"independent"``; quotient edges appear
    with probability ``p`` and become complete bipartite joins.
    """
    if len(sizes) != len(kinds):
        raise InvalidArgument("one kind per class")
    rng = rng_for(seed)
    g = Graph(sum(sizes))
    classes, start = [], 0
    for s in sizes:
        classes.append(list(range(start, start + s)))
        start += s
    for cls, kind in zip(classes, kinds):
        if kind == "clique":
            for a, b in combinations(cls, 2):
                g.add_edge(a, b)
        elif kind != "independent":
            raise InvalidArgument(f"unknown class kind {kind!r}")
    for i, j in combinations(range(len(classes)), 2):
        if rng.random() < p:
            for a in classes[i]:
                for b in classes[j]:
                    g.add_edge(a, b)
    return g


def random_bounded_nd(max_classes: int, max_size: int, seed: int) -> Graph:
    """Graph with at most ``max_classes`` twin classes of random sizes and kinds."""
    rng = rng_for(seed)
    w = int(rng.integers(1, max_classes + 1))
    sizes = [int(s) for s in rng.integers(1, max_size + 1, size=w)]
    kinds = ["clique" if rng.random() < 0.5 else "independent" for _ in range(w)]
    return random_twin_graph(sizes, kinds, float(rng.random()), int(rng.integers(0, 2**31)))


def planted_module(n_outside: int, module: Graph, p: float, seed: int) -> tuple[Graph, list[int]]:
    """Random host graph with ``module`` planted as a module; returns it and the module's ids.

    Outside vertices come first; every outside vertex is adjacent to all or
    none of the module.
    """
    rng = rng_for(seed)
    host = random_graph(n_outside, p, int(rng.integers(0, 2**31)))
    g = host.copy()
    ids = [g.add_vertex() for _ in range(module.n)]
    for a, b in module.edges():
        g.add_edge(ids[a], ids[b])
    for v in range(n_outside):
        if rng.random() < 0.5:
            for x in ids:
                g.add_edge(v, x)
    return g, ids
