"""Grundy number for graphs with few twin classes or small modular width.

Twin classes are grouped into *patterns*: sets of pairwise non-adjacent
classes that a single color class can meet. A Grundy coloring corresponds
to an ordered collection of patterns, each used some positive number of
times, where every later pattern is dominated by every earlier one; the
counts come from a small integer program over class sizes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .coloring import GrundyColoring, grundy_upper_bound, verify_grundy
from .errors import BudgetExceeded, InvalidArgument
from .graph import Graph

log = logging.getLogger(__name__)

MAX_PATTERNS = 64
MAX_COLLECTIONS = 2_000_000


@dataclass
class TwinPartition:
    classes: list[tuple[int, ...]]
    kinds: list[str]  # "true" | "false" | "singleton"
    quotient: list[int]  # bitmask of adjacent classes, per class

    @property
    def w(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def class_of(self) -> dict[int, int]:
        return {v: i for i, cls in enumerate(self.classes) for v in cls}


def compute_twin_classes(g: Graph) -> TwinPartition:
    """Maximal twin classes, ordered by smallest member."""
    by_open: dict[frozenset, list[int]] = {}
    for v in range(g.n):
        by_open.setdefault(frozenset(g.adj[v]), []).append(v)
    groups: list[tuple[int, ...]] = []
    kinds: dict[tuple[int, ...], str] = {}
    rest = []
    for members in by_open.values():
        if len(members) > 1:
            groups.append(tuple(members))
            kinds[tuple(members)] = "false"
        else:
            rest.extend(members)
    # a vertex with a false twin cannot also have a true twin
    by_closed: dict[frozenset, list[int]] = {}
    for v in rest:
        by_closed.setdefault(frozenset(g.adj[v] | {v}), []).append(v)
    for members in by_closed.values():
        groups.append(tuple(members))
        kinds[tuple(members)] = "true" if len(members) > 1 else "singleton"
    groups.sort(key=lambda c: c[0])
    index = {v: i for i, cls in enumerate(groups) for v in cls}
    quotient = [0] * len(groups)
    for i, cls in enumerate(groups):
        for u in g.adj[cls[0]]:
            j = index[u]
            if j != i:
                quotient[i] |= 1 << j
    return TwinPartition(groups, [kinds[c] for c in groups], quotient)


@dataclass
class FalseTwinReduction:
    graph: Graph
    kept: list[int]  # reduced vertex -> original vertex
    representative: list[int]  # original vertex -> reduced vertex carrying its color


def reduce_false_twins_map(g: Graph) -> FalseTwinReduction:
    """Shrink every false-twin class to one vertex, repeating until none remain."""
    current = g
    kept = list(range(g.n))
    rep = list(range(g.n))  # original -> index into current
    while True:
        p = compute_twin_classes(current)
        drop = set()
        local = list(range(current.n))
        for cls, kind in zip(p.classes, p.kinds):
            if kind == "false":
                for v in cls[1:]:
                    drop.add(v)
                    local[v] = cls[0]
        if not drop:
            break
        reduced, old = current.induced(v for v in range(current.n) if v not in drop)
        pos = {v: i for i, v in enumerate(old)}
        rep = [pos[local[r]] for r in rep]
        kept = [kept[v] for v in old]
        current = reduced
    return FalseTwinReduction(current, kept, rep)


def reduce_false_twins(g: Graph, p: TwinPartition | None = None) -> Graph:
    return reduce_false_twins_map(g).graph


def enumerate_patterns(p: TwinPartition) -> list[int]:
    """Non-empty sets of pairwise non-adjacent classes, as bitmasks over class indices."""
    w = p.w
    out: list[int] = []

    def grow(cur: int, start: int, blocked: int) -> None:
        for i in range(start, w):
            if not blocked >> i & 1:
                nxt = cur | 1 << i
                out.append(nxt)
                if len(out) > MAX_PATTERNS:
                    raise BudgetExceeded(f"more than {MAX_PATTERNS} intersection patterns")
                grow(nxt, i + 1, blocked | p.quotient[i])

    grow(0, 0, 0)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def _closed_adjacency(p: TwinPartition) -> list[int]:
    return [p.quotient[i] | 1 << i for i in range(p.w)]


def _compatible(later: int, earlier: int, closed: list[int]) -> bool:
    # every class of the later pattern sees, or is, a class of the earlier one
    m = later
    while m:
        low = m & -m
        if not closed[low.bit_length() - 1] & earlier:
            return False
        m ^= low
    return True


def is_eligible(patterns: Sequence[int], p: TwinPartition) -> list[int] | None:
    """An order (first to last) making the collection eligible, or ``None``.

    Peels off a pattern that may come after all the others. Since any
    sub-collection of an eligible collection is eligible, a wrong choice
    of which pattern to peel is impossible, so this agrees with the full
    subset recursion.
    """
    closed = _closed_adjacency(p)
    remaining = list(dict.fromkeys(patterns))
    tail: list[int] = []
    while remaining:
        for idx, cand in enumerate(remaining):
            if all(_compatible(cand, other, closed) for other in remaining if other != cand):
                tail.append(remaining.pop(idx))
                break
        else:
            return None
    tail.reverse()
    return tail


@dataclass
class PatternProgram:
    """Maximize the total count subject to per-class sums equal to the class sizes."""

    patterns: list[int]
    sizes: list[int]
    positive: bool = True  # x_I >= 1 if set, else x_I >= 0


@dataclass
class ProgramSolution:
    objective: int
    assignment: dict[int, int] = field(default_factory=dict)


def solve_pattern_program(prog: PatternProgram) -> ProgramSolution | None:
    """Exact branch and bound over the counts; ``None`` when infeasible."""
    w = len(prog.sizes)
    pats = list(prog.patterns)
    lb = 1 if prog.positive else 0
    residual = list(prog.sizes)
    for pat in pats:
        if pat >> w:
            raise InvalidArgument(f"pattern {pat:b} names a class beyond {w}")
        for i in range(w):
            if pat >> i & 1:
                residual[i] -= lb
    if any(r < 0 for r in residual):
        return None
    # classes no pattern covers must be empty
    covered = 0
    for pat in pats:
        covered |= pat
    if any(residual[i] and not covered >> i & 1 for i in range(w)):
        return None
    members = [[i for i in range(w) if pat >> i & 1] for pat in pats]
    # last pattern index touching each class: there the count is forced
    last_touch = [-1] * w
    for idx, ms in enumerate(members):
        for i in ms:
            last_touch[i] = idx
    best_val = -1
    best_y: list[int] = []
    y = [0] * len(pats)

    def search(idx: int, acc: int) -> None:
        nonlocal best_val, best_y
        if acc + sum(residual) <= best_val:
            return
        if idx == len(pats):
            if not any(residual):
                best_val, best_y = acc, list(y)
            return
        ms = members[idx]
        top = min(residual[i] for i in ms)
        forced = [residual[i] for i in ms if last_touch[i] == idx]
        if forced:
            if min(forced) != max(forced) or forced[0] > top:
                return
            choices = [forced[0]]
        else:
            choices = range(top, -1, -1)
        for val in choices:
            for i in ms:
                residual[i] -= val
            y[idx] = val
            search(idx + 1, acc + val)
            for i in ms:
                residual[i] += val
        y[idx] = 0

    search(0, 0)
    if best_val < 0:
        return None
    assignment = {pat: yv + lb for pat, yv in zip(pats, best_y)}
    return ProgramSolution(sum(assignment.values()), assignment)


def _assemble(p: TwinPartition, ordered: list[int], counts: dict[int, int], n: int) -> list[int]:
    """Consecutive color blocks per pattern, one fresh class member per color."""
    colors = [0] * n
    unused = [list(cls) for cls in p.classes]
    c = 0
    for pat in ordered:
        for _ in range(counts[pat]):
            c += 1
            for i in range(p.w):
                if pat >> i & 1:
                    colors[unused[i].pop(0)] = c
    assert not any(unused)
    return colors


@dataclass
class NdResult:
    gamma: int
    coloring: GrundyColoring
    collection: list[int]
    counts: dict[int, int]


def solve_nd(g: Graph, relaxed: bool = False) -> NdResult:
    """Best program value over eligible pattern collections.

    Faithful mode tries every eligible collection covering every class
    with all counts positive. ``relaxed`` allows zero counts and only
    solves maximal eligible collections; both modes give the same value.
    """
    if g.n == 0:
        return NdResult(0, GrundyColoring(()), [], {})
    red = reduce_false_twins_map(g)
    h = red.graph
    p = compute_twin_classes(h)
    assert all(kind != "false" for kind in p.kinds)
    patterns = enumerate_patterns(p)
    sizes = p.sizes()
    cap = min(grundy_upper_bound(h), h.n)
    full = (1 << p.w) - 1
    best: tuple[int, list[int], dict[int, int]] | None = None
    visited = 0

    def consider(chosen: list[int]) -> None:
        nonlocal best
        sol = solve_pattern_program(PatternProgram(chosen, sizes, positive=not relaxed))
        if sol is None:
            return
        if best is None or sol.objective > best[0]:
            used = [pat for pat in chosen if sol.assignment[pat] > 0]
            order = is_eligible(used, p)
            assert order is not None
            best = (sol.objective, order, {pat: sol.assignment[pat] for pat in used})

    def extends(chosen: list[int], cand: int) -> bool:
        trial = chosen + [cand]
        return is_eligible(trial, p) is not None

    def dfs(start: int, chosen: list[int], cover: int, uses: list[int]) -> bool:
        nonlocal visited
        visited += 1
        if visited > MAX_COLLECTIONS:
            raise BudgetExceeded(f"more than {MAX_COLLECTIONS} pattern collections")
        if not relaxed and cover == full:
            consider(chosen)
            if best is not None and best[0] >= cap:
                return True
        grew = False
        for idx in range(start, len(patterns)):
            pat = patterns[idx]
            if not relaxed and any(pat >> i & 1 and uses[i] >= sizes[i] for i in range(p.w)):
                continue
            if not extends(chosen, pat):
                continue
            grew = True
            for i in range(p.w):
                if pat >> i & 1:
                    uses[i] += 1
            stop = dfs(idx + 1, chosen + [pat], cover | pat, uses)
            for i in range(p.w):
                if pat >> i & 1:
                    uses[i] -= 1
            if stop:
                return True
        if relaxed and not grew:
            # maximal unless some earlier-skipped pattern still fits
            if all(pat in chosen or not extends(chosen, pat) for pat in patterns):
                consider(chosen)
                if best is not None and best[0] >= cap:
                    return True
        return False

    dfs(0, [], 0, [0] * p.w)
    if best is None:
        raise AssertionError("no eligible collection found; every graph has one")
    value, order, counts = best
    reduced_colors = _assemble(p, order, counts, h.n)
    colors = tuple(reduced_colors[red.representative[v]] for v in range(g.n))
    witness = GrundyColoring(colors)
    assert witness.max_color == value and not verify_grundy(g, witness)
    return NdResult(value, witness, order, counts)


def gamma_nd(g: Graph, relaxed: bool = False) -> tuple[int, GrundyColoring]:
    res = solve_nd(g, relaxed=relaxed)
    return res.gamma, res.coloring


def _smallest_module(g: Graph, adj_mask: list[int], seed: int) -> int:
    """Smallest module containing the vertex set ``seed`` (bitmask)."""
    n = g.n
    full = (1 << n) - 1
    mod = seed
    changed = True
    while changed:
        changed = False
        outside = full & ~mod
        while outside:
            low = outside & -outside
            x = low.bit_length() - 1
            outside ^= low
            hits = adj_mask[x] & mod
            if hits and hits != mod:
                mod |= low
                changed = True
    return mod


def modular_partition(g: Graph) -> list[list[int]]:
    """Maximal strong modules below the root of the modular decomposition."""
    if g.n < 2:
        raise InvalidArgument("modular_partition needs at least two vertices")
    comps = g.components()
    if len(comps) > 1:
        return comps
    co = g.complement().components()
    if len(co) > 1:
        return co
    # prime root: maximal proper modules partition the vertex set
    adj_mask = [sum(1 << u for u in g.adj[v]) for v in range(g.n)]
    full = (1 << g.n) - 1
    assigned = [False] * g.n
    parts = []
    for u in range(g.n):
        if assigned[u]:
            continue
        part = 1 << u
        for v in range(g.n):
            if v != u and not part >> v & 1:
                m = _smallest_module(g, adj_mask, 1 << u | 1 << v)
                if m != full:
                    part |= m
        members = [v for v in range(g.n) if part >> v & 1]
        for v in members:
            assigned[v] = True
        parts.append(members)
    return parts


def replace_module_with_clique(g: Graph, module: Sequence[int], size: int) -> Graph:
    """Swap ``module`` for a clique of ``size`` vertices with the same outside neighbors.

    Vertices outside the module keep their relative order and come first.
    """
    mod = set(module)
    if not mod or size < 1:
        raise InvalidArgument("module must be non-empty and size positive")
    rep = next(iter(mod))
    outside_nbrs = g.adj[rep] - mod
    for v in mod:
        if g.adj[v] - mod != outside_nbrs:
            raise InvalidArgument(f"{sorted(mod)} is not a module")
    h, old = g.induced(v for v in range(g.n) if v not in mod)
    index = {v: i for i, v in enumerate(old)}
    clique = [h.add_vertex() for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            h.add_edge(clique[a], clique[b])
        for u in outside_nbrs:
            h.add_edge(clique[a], index[u])
    return h


def gamma_mw(g: Graph) -> int:
    """Grundy number by collapsing modules to cliques, then the twin-class solver."""
    if g.n <= 1:
        return g.n
    if g.is_clique():
        return g.n
    if g.is_edgeless():
        return 1
    comps = g.components()
    if len(comps) > 1:
        # a disjoint union has the largest Grundy number of its parts
        return max(gamma_mw(g.induced(c)[0]) for c in comps)
    h = g
    ids: list[int | None] = list(range(g.n))  # current vertex -> original, None for new
    for module in modular_partition(g):
        if len(module) < 2:
            continue
        sub = g.induced(module)[0]
        if sub.is_clique() or sub.is_edgeless():
            continue
        val = gamma_mw(sub)
        members = set(module)
        current = [v for v, o in enumerate(ids) if o in members]
        h = replace_module_with_clique(h, current, val)
        ids = [o for o in ids if o not in members] + [None] * val
    return gamma_nd(h)[0]
