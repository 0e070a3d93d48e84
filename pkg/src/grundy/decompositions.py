"""Tree and path decompositions: verification, nice form, exact small widths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import BudgetExceeded, InvalidArgument
from .graph import Graph

EXACT_WIDTH_MAX_N = 12
# nice-form node count is at most NICE_SIZE_CONSTANT * n * max(width, 1)
NICE_SIZE_CONSTANT = 6


def _width(bags: Sequence[frozenset[int]]) -> int:
    return max((len(b) for b in bags), default=0) - 1


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]
        self.edges = [(int(a), int(b)) for a, b in self.edges]

    @property
    def width(self) -> int:
        return _width(self.bags)


@dataclass
class PathDecomposition:
    """Bags in path order; ``important`` optionally maps a vertex to its bag index."""

    bags: list[frozenset[int]]
    important: dict[int, int] | None = None

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(len(self.bags) - 1)]

    @property
    def width(self) -> int:
        return _width(self.bags)

    def as_tree(self) -> TreeDecomposition:
        return TreeDecomposition(list(self.bags), self.edges)


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: frozenset[int]
    vertex: int | None
    children: tuple[int, ...]


@dataclass
class NiceTreeDecomposition:
    """Rooted nice decomposition; children precede parents in ``nodes``."""

    nodes: list[NiceNode]
    root: int

    @property
    def bags(self) -> list[frozenset[int]]:
        return [nd.bag for nd in self.nodes]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(c, i) for i, nd in enumerate(self.nodes) for c in nd.children]

    @property
    def width(self) -> int:
        return _width(self.bags)

    def as_tree(self) -> TreeDecomposition:
        return TreeDecomposition(self.bags, self.edges)


AnyDecomposition = Union[TreeDecomposition, PathDecomposition, NiceTreeDecomposition]


@dataclass
class DecompositionVerdict:
    valid: bool
    width: int
    problems: list[str]

    def __bool__(self) -> bool:
        return self.valid


def _tree_adjacency(nbags: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    if nbags == 0:
        if edges:
            raise InvalidArgument("edges given for an empty decomposition")
        return []
    if len(edges) != nbags - 1:
        raise InvalidArgument(f"{len(edges)} edges over {nbags} bags cannot form a tree")
    adj: list[list[int]] = [[] for _ in range(nbags)]
    for a, b in edges:
        if not (0 <= a < nbags and 0 <= b < nbags) or a == b:
            raise InvalidArgument(f"bad decomposition edge ({a}, {b})")
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nbags:
        raise InvalidArgument("decomposition edges do not form a connected tree")
    return adj


def check_decomposition(vertices: Iterable[int], edges: Iterable[tuple[int, int]],
                        d: AnyDecomposition) -> DecompositionVerdict:
    """Check the decomposition axioms against an explicit vertex and edge set."""
    bags = d.bags
    tree = _tree_adjacency(len(bags), d.edges)
    vertices = set(vertices)
    problems = []
    where: dict[int, list[int]] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            where.setdefault(v, []).append(i)
    stray = sorted(set(where) - vertices)
    if stray:
        problems.append(f"bags mention non-vertices {stray[:5]}")
    for v in sorted(vertices):
        if v not in where:
            problems.append(f"vertex {v} in no bag")
    for u, v in edges:
        hosts = where.get(u, ())
        if not any(v in bags[i] for i in hosts):
            problems.append(f"edge {u}-{v} in no bag")
    for v, hosts in where.items():
        hostset = set(hosts)
        seen = {hosts[0]}
        stack = [hosts[0]]
        while stack:
            x = stack.pop()
            for y in tree[x]:
                if y in hostset and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(hostset):
            problems.append(f"bags containing {v} are not connected")
    return DecompositionVerdict(not problems, _width(bags), problems)


def verify_decomposition(g: Graph, d: AnyDecomposition) -> DecompositionVerdict:
    """Vertex coverage, edge coverage and connectivity of ``d`` for ``g``."""
    return check_decomposition(range(g.n), g.edges(), d)


def _compress(bags: list[frozenset[int]], adj: list[list[int]]) -> tuple[list[frozenset[int]], list[list[int]]]:
    """Contract tree edges whose one bag is contained in the other."""
    bags = list(bags)
    nbrs = [set(a) for a in adj]
    alive = [True] * len(bags)
    changed = True
    while changed:
        changed = False
        for x in range(len(bags)):
            if not alive[x]:
                continue
            for y in sorted(nbrs[x]):
                if bags[x] <= bags[y]:
                    # merge x into y
                    for z in nbrs[x]:
                        if z != y:
                            nbrs[z].discard(x)
                            nbrs[z].add(y)
                            nbrs[y].add(z)
                    nbrs[y].discard(x)
                    nbrs[x] = set()
                    alive[x] = False
                    changed = True
                    break
    keep = [i for i in range(len(bags)) if alive[i]]
    index = {old: new for new, old in enumerate(keep)}
    return [bags[i] for i in keep], [sorted(index[z] for z in nbrs[i]) for i in keep]


def to_nice(d: AnyDecomposition, g: Graph | None = None) -> NiceTreeDecomposition:
    """Equivalent nice decomposition of the same width with an empty root.

    Bags contained in a neighboring bag are contracted first, so a
    decomposition of an ``n``-vertex graph yields at most
    ``NICE_SIZE_CONSTANT * n * max(width, 1)`` nodes.
    """
    if isinstance(d, NiceTreeDecomposition):
        return d
    if g is not None:
        verdict = verify_decomposition(g, d)
        if not verdict.valid:
            raise InvalidArgument("invalid decomposition: " + "; ".join(verdict.problems[:3]))
    nodes: list[NiceNode] = []

    def add(kind, bag, vertex, children) -> int:
        nodes.append(NiceNode(kind, frozenset(bag), vertex, tuple(children)))
        return len(nodes) - 1

    bags = list(d.bags)
    if not bags:
        root = add("leaf", (), None, ())
        return NiceTreeDecomposition(nodes, root)
    adj = _tree_adjacency(len(bags), d.edges)
    bags, adj = _compress(bags, adj)
    # root at bag 0; iterative postorder
    parent = [-1] * len(bags)
    order = []
    stack = [0]
    parent[0] = 0
    while stack:
        x = stack.pop()
        order.append(x)
        for y in adj[x]:
            if parent[y] == -1:
                parent[y] = x
                stack.append(y)
    parent[0] = -1
    children: list[list[int]] = [[] for _ in bags]
    for x in order[1:]:
        children[parent[x]].append(x)
    top: dict[int, int] = {}  # bag index -> nice node whose bag equals it

    def chain(node: int, current: frozenset[int], target: frozenset[int]) -> int:
        for v in sorted(current - target):
            current = current - {v}
            node = add("forget", current, v, (node,))
        for v in sorted(target - current):
            current = current | {v}
            node = add("introduce", current, v, (node,))
        return node

    for x in reversed(order):
        bag = bags[x]
        if not children[x]:
            leaf = add("leaf", (), None, ())
            top[x] = chain(leaf, frozenset(), bag)
            continue
        branches = [chain(top[c], bags[c], bag) for c in sorted(children[x])]
        node = branches[0]
        for other in branches[1:]:
            node = add("join", bag, None, (node, other))
        top[x] = node
    root = chain(top[0], bags[0], frozenset())
    return NiceTreeDecomposition(nodes, root)


def _elimination_decomposition(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    n = g.n
    pos = {v: i for i, v in enumerate(order)}
    fill = [set(a) for a in g.adj]
    bags: list[frozenset[int]] = []
    parent_vertex: list[int | None] = []
    for v in order:
        later = {u for u in fill[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        for a in later:
            fill[a] |= later - {a}
        parent_vertex.append(min(later, key=pos.__getitem__) if later else None)
    edges = []
    roots = []
    for i, p in enumerate(parent_vertex):
        if p is None:
            roots.append(i)
        else:
            edges.append((i, pos[p]))
    edges.extend((roots[a], roots[a + 1]) for a in range(len(roots) - 1))
    assert len(bags) == n
    return TreeDecomposition(bags, edges)


def _exact_treewidth(g: Graph) -> tuple[int, list[int]]:
    n = g.n
    adj_mask = [sum(1 << u for u in g.adj[v]) for v in range(n)]

    def q_size(s: int, v: int) -> int:
        # vertices outside s | {v} reachable from v through s
        seen = (1 << v)
        frontier = 1 << v
        reach_out = 0
        while frontier:
            low = frontier & -frontier
            x = low.bit_length() - 1
            frontier ^= low
            nb = adj_mask[x] & ~seen
            seen |= nb
            inside = nb & s
            reach_out |= nb & ~s
            frontier |= inside
        return bin(reach_out).count("1")

    full = (1 << n) - 1
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    best[0] = -1
    for s in range(1, full + 1):
        val = n + 1
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            cand = max(best[s ^ low], q_size(s ^ low, v))
            if cand < val:
                val, choice[s] = cand, v
        best[s] = val
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return best[full], order


def _exact_pathwidth(g: Graph) -> tuple[int, list[int]]:
    n = g.n
    adj_mask = [sum(1 << u for u in g.adj[v]) for v in range(n)]
    full = (1 << n) - 1

    def boundary(s: int) -> int:
        cnt = 0
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if adj_mask[v] & ~s & full:
                cnt += 1
        return cnt

    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for s in range(1, full + 1):
        val = n + 1
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if best[s ^ low] < val:
                val, choice[s] = best[s ^ low], v
        best[s] = max(val, boundary(s))
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return best[full], order


def layout_path_decomposition(g: Graph, order: Sequence[int]) -> PathDecomposition:
    """Path decomposition from a vertex layout; width equals its vertex separation."""
    prefix: set[int] = set()
    bags = []
    for v in order:
        active = {u for u in prefix if not g.adj[u] <= prefix}
        bags.append(frozenset(active | {v}))
        prefix.add(v)
    return PathDecomposition(bags)


def exact_width_small(g: Graph, kind: str = "tree") -> tuple[int, AnyDecomposition]:
    """Exact treewidth or pathwidth with a certificate of that width.

    Treewidth by the subset recursion over elimination orderings, pathwidth
    as vertex separation number by the analogous recursion over layouts.
    """
    if kind not in ("tree", "path"):
        raise InvalidArgument(f"kind must be 'tree' or 'path', got {kind!r}")
    if g.n > EXACT_WIDTH_MAX_N:
        raise BudgetExceeded(f"exact_width_small supports at most {EXACT_WIDTH_MAX_N} vertices")
    if g.n == 0:
        empty = TreeDecomposition([]) if kind == "tree" else PathDecomposition([])
        return -1, empty
    if kind == "tree":
        width, order = _exact_treewidth(g)
        cert: AnyDecomposition = _elimination_decomposition(g, order)
    else:
        width, order = _exact_pathwidth(g)
        cert = layout_path_decomposition(g, order)
    assert cert.width == width
    return width, cert


def trivial_decomposition(g: Graph) -> PathDecomposition:
    """A single bag holding every vertex."""
    return PathDecomposition([frozenset(range(g.n))] if g.n else [])


def min_degree_decomposition(g: Graph) -> TreeDecomposition:
    """Heuristic tree decomposition from the min-degree elimination order (ties by id)."""
    fill = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    while alive:
        v = min(alive, key=lambda u: (len(fill[u]), u))
        order.append(v)
        alive.remove(v)
        nbrs = fill[v]
        for a in nbrs:
            fill[a] |= nbrs - {a}
            fill[a].discard(v)
    return _elimination_decomposition(g, order)
