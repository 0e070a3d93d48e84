"""Undirected simple graphs, binomial trees and the two support operations.

Vertices are the integers ``0..n-1``. Operations that build on an existing
graph only ever append vertices, so identifiers are stable across them.

Binomial tree numbering: ``T_i`` is laid out in preorder with the root first,
followed by the subtrees ``T_1, T_2, ..., T_{i-1}`` in that order. The child
``T_a`` of a root at offset ``o`` therefore occupies offsets
``[o + 2^(a-1), o + 2^a)``, which lets colorings of support trees be computed
from the root offset and the order alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InvalidArgument

SUPPORT_PREFIX = "support"


class Graph:
    """Undirected simple graph with optional per-vertex role tags."""

    __slots__ = ("adj", "tags")

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = (), tags: dict[int, str] | None = None):
        if n < 0:
            raise InvalidArgument("vertex count must be non-negative")
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.tags: dict[int, str] = dict(tags or {})
        for u, v in edges:
            self.add_edge(u, v)

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def add_vertex(self, tag: str | None = None) -> int:
        self.adj.append(set())
        v = len(self.adj) - 1
        if tag is not None:
            self.tags[v] = tag
        return v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise InvalidArgument(f"self-loop on vertex {u}")
        n = len(self.adj)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidArgument(f"edge ({u}, {v}) out of range for {n} vertices")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nbrs in enumerate(self.adj):
            for v in sorted(nbrs):
                if u < v:
                    yield u, v

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def copy(self) -> Graph:
        g = Graph()
        g.adj = [set(a) for a in self.adj]
        g.tags = dict(self.tags)
        return g

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph on ``vertices`` (renumbered in sorted order).

        Returns the subgraph and the list mapping new ids to old ids.
        """
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        h = Graph(len(old))
        for i, v in enumerate(old):
            h.adj[i] = {index[u] for u in self.adj[v] if u in index}
            if v in self.tags:
                h.tags[i] = self.tags[v]
        return h, old

    def is_clique(self) -> bool:
        n = self.n
        return all(len(a) == n - 1 for a in self.adj)

    def is_edgeless(self) -> bool:
        return all(not a for a in self.adj)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def complement(self) -> Graph:
        n = self.n
        everyone = set(range(n))
        g = Graph()
        g.adj = [everyone - a - {v} for v, a in enumerate(self.adj)]
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


@dataclass
class RootedTree:
    graph: Graph
    root: int


def is_support_vertex(g: Graph, v: int) -> bool:
    return g.tags.get(v, "").startswith(SUPPORT_PREFIX)


def support_tag(v: int, i: int) -> str:
    return f"{SUPPORT_PREFIX}({v},{i})"


def _append_binomial(g: Graph, i: int, tag: str | None = None) -> int:
    """Append a copy of ``T_i`` to ``g`` in preorder; return its root."""
    root = g.add_vertex(tag)
    # explicit stack of (parent, order) so deep trees need no recursion
    stack = [(root, a) for a in range(i - 1, 0, -1)]
    while stack:
        parent, a = stack.pop()
        r = g.add_vertex(tag)
        g.add_edge(parent, r)
        stack.extend((r, b) for b in range(a - 1, 0, -1))
    return root


def build_binomial_tree(i: int) -> RootedTree:
    """The binomial tree ``T_i`` (``2^(i-1)`` vertices), rooted at vertex 0."""
    if i < 1:
        raise InvalidArgument(f"binomial tree order must be >= 1, got {i}")
    g = Graph()
    root = _append_binomial(g, i)
    return RootedTree(g, root)


def binomial_orders(i: int) -> list[int]:
    """Order of the sub-binomial tree rooted at each offset of ``T_i``."""
    out = [0] * (1 << (i - 1))
    stack = [(0, i)]
    while stack:
        off, a = stack.pop()
        out[off] = a
        for b in range(1, a):
            stack.append((off + (1 << (b - 1)), b))
    return out


def binomial_coloring(i: int, root_color: int | None = None) -> list[int]:
    """A Grundy coloring of ``T_i`` by offset whose root gets ``root_color``.

    With ``root_color == i`` (the default) every vertex gets the order of the
    subtree it roots. Color 1 at the root alternates colors 1 and 2 by depth.
    For ``1 < j < i`` the children ``T_a``, ``a < j``, are colored optimally,
    the child ``T_j`` recursively with root color ``j - 1``, and every larger
    child with root color 1, so the root sees exactly ``1..j-1``.
    """
    j = i if root_color is None else root_color
    if not 1 <= j <= i:
        raise InvalidArgument(f"root color must lie in [1, {i}], got {j}")
    out = [0] * (1 << (i - 1))
    orders = binomial_orders(i)
    stack = [(0, i, j, False)]
    while stack:
        off, a, c, parity = stack.pop()
        if parity:
            # c is the color at this vertex; children get the other of 1, 2
            out[off] = c
            for b in range(1, a):
                stack.append((off + (1 << (b - 1)), b, 3 - c, True))
        elif c == a:
            for v in range(off, off + (1 << (a - 1))):
                out[v] = orders[v]
        elif c == 1:
            stack.append((off, a, 1, True))
        else:
            out[off] = c
            for b in range(1, a):
                child = off + (1 << (b - 1))
                if b < c:
                    stack.append((child, b, b, False))
                elif b == c:
                    stack.append((child, b, c - 1, False))
                else:
                    stack.append((child, b, 1, False))
    return out


def find_disjoint_subtrees(i: int, t: int) -> list[frozenset[int]]:
    """``2^(i-t-1)`` pairwise disjoint, non-adjacent copies of ``T_t`` in ``T_i``.

    Vertex ids refer to :func:`build_binomial_tree` numbering; no copy
    contains the root. Follows the split of ``T_i`` into the root's part
    (root plus children ``T_1..T_{i-2}``) and the last child ``T_{i-1}``.
    """
    if not (1 <= t < i):
        raise InvalidArgument(f"need 1 <= t < i, got t={t}, i={i}")
    found: list[frozenset[int]] = []
    # (offset of the root, order of the tree viewed from that root)
    # the root's part of T_a shares the root and spans [off, off + 2^(a-2))
    stack = [(0, i)]
    while stack:
        off, a = stack.pop()
        last_child = off + (1 << (a - 2))
        if a - t == 1:
            found.append(frozenset(range(last_child, last_child + (1 << (t - 1)))))
        else:
            stack.append((off, a - 1))
            stack.append((last_child, a - 1))
    return sorted(found, key=min)


def _attach_tree_supports(g: Graph, v: int, orders: Iterable[int]) -> list[tuple[int, int]]:
    added = []
    for i in sorted(set(orders)):
        if i < 1:
            raise InvalidArgument(f"support orders must be positive, got {i}")
        r = _append_binomial(g, i, support_tag(v, i))
        g.add_edge(v, r)
        added.append((i, r))
    return added


def attach_tree_supports(g: Graph, v: int, orders: Iterable[int]) -> Graph:
    """Copy of ``g`` with a fresh ``T_i`` joined to ``v`` for each ``i``."""
    if not 0 <= v < g.n:
        raise InvalidArgument(f"vertex {v} not in graph")
    h = g.copy()
    _attach_tree_supports(h, v, orders)
    return h


def _attach_clique_supports(g: Graph, v: int, sizes: Iterable[int]) -> list[tuple[int, list[int]]]:
    added = []
    for i in sorted(set(sizes)):
        if i < 1:
            raise InvalidArgument(f"support sizes must be positive, got {i}")
        members = [g.add_vertex(support_tag(v, i)) for _ in range(i)]
        for a in range(i):
            for b in range(a + 1, i):
                g.add_edge(members[a], members[b])
        # lowest-numbered member is the connector
        g.add_edge(v, members[0])
        added.append((i, members))
    return added


def attach_clique_supports(g: Graph, v: int, sizes: Iterable[int]) -> Graph:
    """Copy of ``g`` with a fresh ``K_i`` for each ``i``, one vertex joined to ``v``."""
    if not 0 <= v < g.n:
        raise InvalidArgument(f"vertex {v} not in graph")
    h = g.copy()
    _attach_clique_supports(h, v, sizes)
    return h
