"""Multicolored clique instances turned into Grundy coloring instances of small treewidth.

Naming, with ``L = log2 n`` and parts ``1..k``, part vertices ``0..n-1``:

* ``s[i,j,l]`` for ``j in 0..m+1`` and ``l in 1..2L`` (vertex selection),
* ``p[i,j]`` for ``j in 0..m`` (propagators),
* ``w[j,x]``, ``w[j,y]`` and checkers ``wc[j,x]``, ``wc[j,y]`` for edge ``j in 1..m``,
  where ``x`` is the endpoint in the lower-numbered part,
* ``q[i,i2]`` for parts ``i < i2`` (validators).

Gadget vertices are numbered in that order; tree supports follow, one
binomial tree at a time in preorder. Bit ``b_1`` of a part vertex is its
most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from ..coloring import GrundyColoring, TargetSpec
from ..decompositions import PathDecomposition
from ..errors import InvalidArgument
from ..graph import Graph, _attach_tree_supports, binomial_coloring
from .filling import Filling, ceil_log2, tree_filling

Endpoint = tuple[int, int]  # (part, index)


@dataclass(frozen=True)
class MccInstance:
    k: int
    n: int
    edges: tuple[tuple[Endpoint, Endpoint], ...]

    def __post_init__(self):
        if self.k < 2:
            raise InvalidArgument("need at least two parts")
        if self.n < 1 or self.n & (self.n - 1):
            raise InvalidArgument(f"part size must be a power of two, got {self.n}")
        norm = []
        for a, b in self.edges:
            i, i2 = a[0], b[0]
            for part, idx in (a, b):
                if not (1 <= part <= self.k and 0 <= idx < self.n):
                    raise InvalidArgument(f"endpoint {(part, idx)} out of range")
            if i == i2:
                raise InvalidArgument(f"edge {a}-{b} inside part {i}")
            norm.append((a, b) if i < i2 else (b, a))
        norm.sort()
        if len(set(norm)) != len(norm):
            raise InvalidArgument("repeated edge")
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_parts(cls, k: int, n: int, edges: Iterable[tuple[int, int, int, int]]) -> MccInstance:
        """Edges given as ``(i, x, i2, y)`` tuples."""
        return cls(k, n, tuple(((i, x), (i2, y)) for i, x, i2, y in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def log_n(self) -> int:
        return self.n.bit_length() - 1

    def is_clique(self, choice: Sequence[int]) -> bool:
        if len(choice) != self.k:
            return False
        present = set(self.edges)
        return all(((i + 1, choice[i]), (i2 + 1, choice[i2])) in present
                   for i, i2 in combinations(range(self.k), 2))


def mcc_target_count(k: int, m: int) -> int:
    return k * (m + 1) + comb(k, 2) + 2 * m


def mcc_threshold(k: int, n: int, m: int) -> int:
    """``ceil(log2(k(m+1) + C(k,2) + 2m)) + 2 log2 n + 5``."""
    if k < 2 or n < 1 or n & (n - 1) or m < 0:
        raise InvalidArgument("need k >= 2, n a power of two, m >= 0")
    return ceil_log2(mcc_target_count(k, m)) + 2 * (n.bit_length() - 1) + 5


def bits(x: int, width: int) -> list[int]:
    """``b_1..b_width`` of ``x``, most significant first."""
    return [(x >> (width - l)) & 1 for l in range(1, width + 1)]


@dataclass
class ReductionOutput:
    graph: Graph
    targets: TargetSpec
    gadget_index: dict[str, int]
    threshold: int
    supports: list[tuple[int, int, int]] = field(default_factory=list)  # (vertex, order, root)
    instance: MccInstance | None = None
    filling: Filling | None = None

    def vertex(self, name: str) -> int:
        return self.gadget_index[name]


def build_mcc_reduction(inst: MccInstance) -> ReductionOutput:
    k, n, m, L = inst.k, inst.n, inst.m, inst.log_n
    t = 2 * L + 4
    g = Graph()
    idx: dict[str, int] = {}

    def new(name: str, tag: str) -> int:
        v = g.add_vertex(tag)
        idx[name] = v
        return v

    for i in range(1, k + 1):
        for j in range(m + 2):
            for l in range(1, 2 * L + 1):
                new(f"s[{i},{j},{l}]", f"select({i},{j},{l})")
    for i in range(1, k + 1):
        for j in range(m + 1):
            new(f"p[{i},{j}]", f"propagator({i},{j})")
    for j in range(1, m + 1):
        for end in ("x", "y"):
            new(f"w[{j},{end}]", f"edge({j},{end})")
        for end in ("x", "y"):
            new(f"wc[{j},{end}]", f"checker({j},{end})")
    pairs = list(combinations(range(1, k + 1), 2))
    for i, i2 in pairs:
        new(f"q[{i},{i2}]", f"validator({i},{i2})")

    s = lambda i, j, l: idx[f"s[{i},{j},{l}]"]  # noqa: E731
    for i in range(1, k + 1):
        for j in range(m + 2):
            for l in range(1, L + 1):
                g.add_edge(s(i, j, 2 * l - 1), s(i, j, 2 * l))
        for j in range(m + 1):
            p = idx[f"p[{i},{j}]"]
            for l in range(1, L + 1):
                g.add_edge(p, s(i, j, 2 * l))
                g.add_edge(p, s(i, j + 1, 2 * l - 1))
    for j, ((i, x), (i2, y)) in enumerate(inst.edges, start=1):
        wx, wy = idx[f"w[{j},x]"], idx[f"w[{j},y]"]
        g.add_edge(wx, wy)
        g.add_edge(idx[f"wc[{j},x]"], wx)
        g.add_edge(idx[f"wc[{j},y]"], wy)
        for w, part, val in ((wx, i, x), (wy, i2, y)):
            for l, bit in enumerate(bits(val, L), start=1):
                g.add_edge(w, s(part, j, 2 * l - bit))
        q = idx[f"q[{i},{i2}]"]
        g.add_edge(q, wx)
        g.add_edge(q, wy)

    supports: list[tuple[int, int, int]] = []

    def support(v: int, orders: Iterable[int]) -> None:
        for order, root in _attach_tree_supports(g, v, orders):
            supports.append((v, order, root))

    for i in range(1, k + 1):
        for j in range(m + 2):
            for l in range(2, L + 1):
                for v in (s(i, j, 2 * l - 1), s(i, j, 2 * l)):
                    support(v, range(1, 2 * l - 1))
    for i in range(1, k + 1):
        for j in range(m + 1):
            support(idx[f"p[{i},{j}]"], (2 * L + 1, 2 * L + 2, 2 * L + 3))
    for j in range(1, m + 1):
        for end in ("x", "y"):
            support(idx[f"w[{j},{end}]"], range(1, 2 * L + 2, 2))
        for end in ("x", "y"):
            support(idx[f"wc[{j},{end}]"], [c for c in range(1, 2 * L + 4) if c != 2 * L + 1])
    for i, i2 in pairs:
        support(idx[f"q[{i},{i2}]"], range(1, 2 * L + 3))

    target_vertices = ([idx[f"p[{i},{j}]"] for i in range(1, k + 1) for j in range(m + 1)]
                       + [idx[f"wc[{j},{e}]"] for j in range(1, m + 1) for e in ("x", "y")]
                       + [idx[f"q[{i},{i2}]"] for i, i2 in pairs])
    assert len(target_vertices) == mcc_target_count(k, m)
    return ReductionOutput(g, TargetSpec(frozenset(target_vertices), t), idx,
                           mcc_threshold(k, n, m), supports, inst)


def build_gprime_path_decomposition(out: ReductionOutput) -> PathDecomposition:
    """Column sweep over the graph without its supports, with one important bag per target.

    Every bag holds all validators. Column ``j`` adds the propagators on
    both sides of it and the pair ``w[j,*]``; its bags visit the selection
    pairs one at a time, then give each propagator ``p[i,j]`` and each
    checker of column ``j`` a bag of its own. Validators get theirs last.
    """
    inst = out.instance
    if inst is None:
        raise InvalidArgument("reduction output lacks its instance")
    k, m, L = inst.k, inst.m, inst.log_n
    idx = out.gadget_index
    validators = frozenset(idx[f"q[{i},{i2}]"] for i, i2 in combinations(range(1, k + 1), 2))
    bags: list[frozenset[int]] = []
    important: dict[int, int] = {}
    base = validators
    for j in range(m + 2):
        base = set(validators)
        for i in range(1, k + 1):
            if j >= 1:
                base.add(idx[f"p[{i},{j - 1}]"])
            if j <= m:
                base.add(idx[f"p[{i},{j}]"])
        if 1 <= j <= m:
            base.update((idx[f"w[{j},x]"], idx[f"w[{j},y]"]))
        base = frozenset(base)
        for i in range(1, k + 1):
            for l in range(1, L + 1):
                bags.append(base | {idx[f"s[{i},{j},{2 * l - 1}]"], idx[f"s[{i},{j},{2 * l}]"]})
        if j <= m:
            for i in range(1, k + 1):
                bags.append(base)
                important[idx[f"p[{i},{j}]"]] = len(bags) - 1
        if 1 <= j <= m:
            for end in ("x", "y"):
                c = idx[f"wc[{j},{end}]"]
                bags.append(base | {c})
                important[c] = len(bags) - 1
        if not L and j > m:
            bags.append(base)
    for q in sorted(validators):
        bags.append(base)
        important[q] = len(bags) - 1
    return PathDecomposition(bags, important)


def apply_tree_filling(out: ReductionOutput) -> Filling:
    """Build ``H`` (and its tree decomposition) from the column-sweep decomposition."""
    if out.filling is None:
        out.filling = tree_filling(out.graph, out.targets, build_gprime_path_decomposition(out))
        out.gadget_index["root"] = out.filling.root
    return out.filling


def gprime_witness_coloring(inst: MccInstance, out: ReductionOutput, clique: Sequence[int]) -> list[int]:
    """Colors of ``G'`` achieving every target, from a multicolored clique."""
    if not inst.is_clique(clique):
        raise InvalidArgument(f"{list(clique)} is not a multicolored clique")
    k, m, L = inst.k, inst.m, inst.log_n
    idx = out.gadget_index
    g = out.graph
    colors = [0] * g.n
    sup_root: dict[tuple[int, int], int] = {}
    for v, order, root in out.supports:
        sup_root[(v, order)] = root

    def color_support(v: int, order: int, root_color: int | None = None) -> None:
        root = sup_root[(v, order)]
        for off, c in enumerate(binomial_coloring(order, root_color)):
            colors[root + off] = c

    # supports default to optimal; some are recolored below
    for v, order, _ in out.supports:
        color_support(v, order)
    for i in range(1, k + 1):
        b = bits(clique[i - 1], L)
        for j in range(m + 2):
            for l in range(1, L + 1):
                colors[idx[f"s[{i},{j},{2 * l - (1 - b[l - 1])}]"]] = 2 * l - 1
                colors[idx[f"s[{i},{j},{2 * l - b[l - 1]}]"]] = 2 * l
        for j in range(m + 1):
            colors[idx[f"p[{i},{j}]"]] = 2 * L + 4
    chosen = {((i + 1, clique[i]), (i2 + 1, clique[i2])) for i, i2 in combinations(range(k), 2)}
    for j, e in enumerate(inst.edges, start=1):
        wx, wy = idx[f"w[{j},x]"], idx[f"w[{j},y]"]
        if e in chosen:
            colors[wx], colors[wy] = 2 * L + 2, 2 * L + 3
        else:
            for w in (wx, wy):
                # one selection neighbor per interval [2l-1, 2l]; the T_{2l+1}
                # support supplies the other, the T_1 support color 1
                seen = {colors[u] for u in g.adj[w] if g.tags.get(u, "").startswith("select")}
                for l in range(1, L + 1):
                    miss = [c for c in (2 * l - 1, 2 * l) if c not in seen]
                    color_support(w, 2 * l + 1, miss[0] if miss else 2 * l + 1)
            colors[wx] = 2 * L + 1
            colors[wy] = 2 * L + 2
        for end, w in (("x", wx), ("y", wy)):
            wc = idx[f"wc[{j},{end}]"]
            cw = colors[w]
            if cw != 2 * L + 1:
                color_support(wc, cw, 2 * L + 1)
            colors[wc] = 2 * L + 4
    for i, i2 in combinations(range(1, k + 1), 2):
        colors[idx[f"q[{i},{i2}]"]] = 2 * L + 4
    assert all(colors)
    return colors


def mcc_witness_coloring(inst: MccInstance, out: ReductionOutput, clique: Sequence[int]) -> GrundyColoring:
    """The constructive coloring of ``H``; its root reaches ``mcc_threshold``."""
    colors = gprime_witness_coloring(inst, out, clique)
    fill = apply_tree_filling(out)
    full = colors + [0] * (fill.graph.n - len(colors))
    for v, order in fill.tree_orders.items():
        full[v] = order
    return GrundyColoring(tuple(full))
