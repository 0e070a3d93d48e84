"""Replacing target vertices by sub-binomial-tree roots of one large binomial tree.

The big tree ``T_i`` uses the preorder layout of :mod:`grundy.graph`. Its
left half (root plus children ``T_1..T_{i-2}``) is a ``T_{i-1}`` sharing the
root; its right half is the last child ``T_{i-1}``. Targets are split into a
left and a right block along the path decomposition, recursively, and each
target replaces the root of a ``T_t`` slot, whose other vertices are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..coloring import TargetSpec
from ..decompositions import PathDecomposition, TreeDecomposition, check_decomposition
from ..errors import InvalidArgument
from ..graph import Graph, binomial_orders


def ceil_log2(x: int) -> int:
    if x < 1:
        raise InvalidArgument("ceil_log2 needs a positive argument")
    return (x - 1).bit_length()


def filling_order(target_count: int, t: int) -> int:
    return ceil_log2(target_count) + t + 1


@dataclass
class Filling:
    graph: Graph
    decomposition: TreeDecomposition
    root: int
    order: int  # i of the added T_i
    target: int  # t
    tree_orders: dict[int, int] = field(default_factory=dict)  # vertex -> order of the subtree it roots
    slot_parent: dict[int, int] = field(default_factory=dict)  # target -> its parent in the tree
    path: PathDecomposition | None = None  # with the important bags actually used


def assign_important_bags(pd: PathDecomposition, targets: Sequence[int]) -> PathDecomposition:
    """Give each target its own bag, duplicating bags where several share one."""
    wanted = set(targets)
    bags: list[frozenset[int]] = []
    important: dict[int, int] = {}
    for bag in pd.bags:
        bags.append(bag)
        fresh = sorted(v for v in bag if v in wanted and v not in important)
        for idx, v in enumerate(fresh):
            if idx:
                bags.append(bag)
            important[v] = len(bags) - 1
    missing = wanted - set(important)
    if missing:
        raise InvalidArgument(f"targets {sorted(missing)[:5]} lie in no bag")
    return PathDecomposition(bags, important)


class _Builder:
    def __init__(self):
        self.bags: list[frozenset[int]] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, bag, link: int | None = None) -> int:
        self.bags.append(frozenset(bag))
        idx = len(self.bags) - 1
        if link is not None:
            self.edges.append((link, idx))
        return idx

    def link(self, a: int, b: int) -> None:
        self.edges.append((a, b))


def _stripped_components(g: Graph, core: set[int]) -> list[tuple[int, int, list[int]]]:
    """Pieces outside ``core``: each must be a tree joined to ``core`` by one edge.

    Returns ``(root, anchor, vertices)`` per piece.
    """
    seen: set[int] = set()
    out = []
    for s in range(g.n):
        if s in core or s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.adj[v]:
                if u not in core and u not in seen:
                    seen.add(u)
                    stack.append(u)
        links = [(v, u) for v in comp for u in g.adj[v] if u in core]
        inner = sum(1 for v in comp for u in g.adj[v] if u not in core) // 2
        if len(links) != 1 or inner != len(comp) - 1:
            raise InvalidArgument("vertices outside the path decomposition must form "
                                  "trees hanging from a single vertex")
        root, anchor = links[0]
        out.append((root, anchor, sorted(comp)))
    return out


def tree_filling(g: Graph, spec: TargetSpec, pd: PathDecomposition) -> Filling:
    """Add ``T_i`` with ``i = ceil(log2 |S|) + t + 1`` and graft the targets onto it.

    ``pd`` covers the graph without its pendant trees (the supports); those
    are hung back on the returned tree decomposition with width-1 pieces.
    Targets are ordered by their important bags; if ``pd`` has none they are
    assigned, duplicating bags as needed.
    """
    targets = sorted(spec.vertices)
    t = spec.target
    if not targets:
        raise InvalidArgument("tree filling needs at least one target")
    core = set().union(*pd.bags) if pd.bags else set()
    verdict = check_decomposition(core, [(u, v) for u, v in g.edges() if u in core and v in core], pd)
    if not verdict.valid:
        raise InvalidArgument("path decomposition invalid: " + "; ".join(verdict.problems[:3]))
    if not set(targets) <= core:
        raise InvalidArgument("every target must appear in the path decomposition")
    if pd.important is None:
        pd = assign_important_bags(pd, targets)
    imp = pd.important
    missing = [v for v in targets if v not in imp]
    if missing:
        raise InvalidArgument(f"targets {missing[:5]} have no important bag")
    if len({imp[v] for v in targets}) != len(targets):
        raise InvalidArgument("important bags must be distinct")
    for v in targets:
        if not 0 <= imp[v] < len(pd.bags) or v not in pd.bags[imp[v]]:
            raise InvalidArgument(f"important bag of {v} does not contain it")
    targets.sort(key=imp.__getitem__)
    pendant = _stripped_components(g, core)

    i = filling_order(len(targets), t)
    size = 1 << (i - 1)
    orders = binomial_orders(i)
    parent = [-1] * size
    stack = [0]
    while stack:
        off = stack.pop()
        for b in range(1, orders[off]):
            child = off + (1 << (b - 1))
            parent[child] = off
            stack.append(child)

    # slot roots by the recursive halving
    slot_of: dict[int, int] = {}  # offset -> target
    plan = [(0, i, targets)]
    while plan:
        off, a, block = plan.pop()
        if len(block) == 1:
            while a > t + 1:
                a -= 1  # stay in the left half, which shares the root
            slot_of[off + (1 << (t - 1))] = block[0]
            continue
        half = (len(block) + 1) // 2
        plan.append((off, a - 1, block[:half]))
        plan.append((off + (1 << (a - 2)), a - 1, block[half:]))
    dropped = [False] * size
    for so in slot_of:
        dropped[so + 1:so + (1 << (t - 1))] = [True] * ((1 << (t - 1)) - 1)

    h = g.copy()
    vert = [-1] * size
    for off in range(size):
        if off in slot_of:
            vert[off] = slot_of[off]
        elif not dropped[off]:
            vert[off] = h.add_vertex("filling")
    for off in range(1, size):
        if vert[off] >= 0 and not dropped[off]:
            h.add_edge(vert[off], vert[parent[off]])
    tree_orders = {vert[off]: orders[off] for off in range(size)
                   if vert[off] >= 0 and off not in slot_of}
    slot_parent = {slot_of[so]: vert[parent[so]] for so in slot_of}

    b = _Builder()
    bags = pd.bags

    def build(lo: int, hi: int, off: int, a: int, block: list[int]) -> int:
        A, Z = bags[lo], bags[hi]
        r = vert[off]
        if len(block) == 1:
            first = None
            prev = None
            for x in range(lo, hi + 1):
                cur = b.add(bags[x] | A | {r}, prev)
                if x == imp[block[0]]:
                    first = cur
                prev = cur
            top = prev
            central = b.add({r})
            where = {off: central}
            for o in range(off + 1, off + (1 << (a - 1))):
                if dropped[o]:
                    continue
                # parents precede children in preorder
                where[o] = b.add({vert[o], vert[parent[o]], r}, where[parent[o]])
                if o in slot_of:
                    b.link(where[o], first)
            return top
        half = (len(block) + 1) // 2
        left, right = block[:half], block[half:]
        cut = imp[left[-1]]
        rl = build(lo, cut, off, a - 1, left)
        right_off = off + (1 << (a - 2))
        rr = build(cut + 1, hi, right_off, a - 1, right)
        joint = b.add(A | bags[cut + 1] | bags[cut] | Z | {vert[right_off], r})
        b.link(joint, rl)
        b.link(joint, rr)
        return b.add(A | Z | {r}, joint)

    build(0, len(bags) - 1, 0, i, targets)
    home: dict[int, int] = {}
    for idx, bag in enumerate(b.bags):
        for v in bag:
            home.setdefault(v, idx)
    for root, anchor, comp in pendant:
        members = set(comp)
        top = b.add({root, anchor}, home[anchor])
        where = {root: top}
        queue = [root]
        while queue:
            v = queue.pop()
            for u in sorted(g.adj[v]):
                if u in members and u not in where:
                    where[u] = b.add({u, v}, where[v])
                    queue.append(u)
    td = TreeDecomposition(b.bags, b.edges)
    return Filling(h, td, vert[0], i, t, tree_orders, slot_parent, pd)
