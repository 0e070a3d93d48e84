"""Deciding k-Grundy colorability by dynamic programming on a nice decomposition.

A state at a node describes the bag: a color per bag vertex, the set of
smaller colors each bag vertex already sees among neighbors processed in the
subtree (a bitmask, bit ``c-1`` for color ``c``), and whether color ``k`` has
been used anywhere in the subtree. Edges are processed at the introduce node
where their second endpoint enters; a vertex may only be forgotten once it
sees every smaller color.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass

from .coloring import GrundyColoring, color_upper_bounds, verify_grundy
from .decompositions import (AnyDecomposition, NiceTreeDecomposition, PathDecomposition,
                             to_nice, verify_decomposition)
from .errors import BudgetExceeded, InvalidArgument
from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 3_000_000


def state_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``$GRUNDY_BUDGET``, else the default."""
    if budget is not None:
        return budget
    env = os.environ.get("GRUNDY_BUDGET")
    return int(env) if env else DEFAULT_STATE_BUDGET


def _full(c: int) -> int:
    return (1 << (c - 1)) - 1


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _subtree_vertices(nice: NiceTreeDecomposition) -> list[int]:
    masks = [0] * len(nice.nodes)
    for i, nd in enumerate(nice.nodes):
        m = 0
        for c in nd.children:
            m |= masks[c]
        for v in nd.bag:
            m |= 1 << v
        masks[i] = m
    return masks


def grundy_decision_dp(g: Graph, d: AnyDecomposition, k: int, *,
                       budget: int | None = None) -> tuple[bool, GrundyColoring | None]:
    """Whether ``g`` has a Grundy coloring using exactly ``k`` colors, with a witness."""
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    verdict = verify_decomposition(g, d)
    if not verdict.valid:
        raise InvalidArgument("invalid decomposition: " + "; ".join(verdict.problems[:3]))
    return _decide(g, to_nice(d), k, state_budget(budget))


def _decide(g: Graph, nice: NiceTreeDecomposition, k: int, limit: int):
    if g.n == 0:
        return False, None
    adj_mask = [sum(1 << u for u in g.adj[v]) for v in range(g.n)]
    covered = _subtree_vertices(nice)
    reach = color_upper_bounds(g)

    # per node: bag order (sorted tuple) and a table state -> back-pointer
    # state = (colors, seen, flag)
    orders: list[tuple[int, ...]] = []
    tables: list[dict] = []
    total = 0

    def feasible(bag: tuple[int, ...], colors, seen, done: int) -> bool:
        # a bag vertex still missing more colors than it has unprocessed neighbors is dead
        for idx, v in enumerate(bag):
            missing = _popcount(_full(colors[idx]) & ~seen[idx])
            if missing and missing > _popcount(adj_mask[v] & ~done):
                return False
        return True

    for i, nd in enumerate(nice.nodes):
        bag = tuple(sorted(nd.bag))
        done = covered[i]
        table: dict = {}
        if nd.kind == "leaf":
            table[((), (), False)] = None
        elif nd.kind == "introduce":
            (c_idx,) = nd.children
            child_bag, child = orders[c_idx], tables[c_idx]
            v = nd.vertex
            pos = bag.index(v)
            nbr_pos = [j for j, u in enumerate(child_bag) if u in g.adj[v]]
            top = min(k, reach[v])
            for state in child:
                colors, seen, flag = state
                taken = {colors[j] for j in nbr_pos}
                for c in range(1, top + 1):
                    if c in taken:
                        continue
                    vseen = 0
                    new_seen = list(seen)
                    for j in nbr_pos:
                        cu = colors[j]
                        if cu < c:
                            vseen |= 1 << (cu - 1)
                        else:
                            new_seen[j] |= 1 << (c - 1)
                    new_c = colors[:pos] + (c,) + colors[pos:]
                    assert vseen & ~_full(c) == 0
                    new_seen.insert(pos, vseen)
                    new_seen = tuple(new_seen)
                    if not feasible(bag, new_c, new_seen, done):
                        continue
                    key = (new_c, new_seen, flag or c == k)
                    if key not in table:
                        table[key] = state
        elif nd.kind == "forget":
            (c_idx,) = nd.children
            child_bag, child = orders[c_idx], tables[c_idx]
            pos = child_bag.index(nd.vertex)
            for state in child:
                colors, seen, flag = state
                if seen[pos] != _full(colors[pos]):
                    continue
                key = (colors[:pos] + colors[pos + 1:], seen[:pos] + seen[pos + 1:], flag)
                if key not in table:
                    table[key] = state
        elif nd.kind == "join":
            left_idx, right_idx = nd.children
            buckets: dict[tuple, list] = {}
            for state in tables[right_idx]:
                buckets.setdefault(state[0], []).append(state)
            for ls in tables[left_idx]:
                for rs in buckets.get(ls[0], ()):
                    seen = tuple(a | b for a, b in zip(ls[1], rs[1]))
                    if not feasible(bag, ls[0], seen, done):
                        continue
                    key = (ls[0], seen, ls[2] or rs[2])
                    if key not in table:
                        table[key] = (ls, rs)
        else:
            raise InvalidArgument(f"unknown nice node kind {nd.kind!r}")
        total += len(table)
        if total > limit:
            raise BudgetExceeded(f"DP state budget {limit} exceeded at k={k}", upper_bound=k)
        orders.append(bag)
        tables.append(table)

    root_table = tables[nice.root]
    accepting = [s for s in root_table if s[2]]
    if not accepting:
        return False, None
    colors = [0] * g.n
    stack = [(nice.root, accepting[0])]
    while stack:
        i, state = stack.pop()
        nd = nice.nodes[i]
        back = tables[i][state]
        if nd.kind == "introduce":
            colors[nd.vertex] = state[0][orders[i].index(nd.vertex)]
            stack.append((nd.children[0], back))
        elif nd.kind == "forget":
            stack.append((nd.children[0], back))
        elif nd.kind == "join":
            stack.append((nd.children[0], back[0]))
            stack.append((nd.children[1], back[1]))
    witness = GrundyColoring(tuple(colors))
    assert witness.max_color == k and not verify_grundy(g, witness)
    return True, witness


@dataclass
class DpResult:
    gamma: int
    coloring: GrundyColoring | None
    cap: int
    width: int


def _scan(g: Graph, d: AnyDecomposition, cap: int, budget: int | None) -> DpResult:
    nice = to_nice(d, g)
    if isinstance(d, NiceTreeDecomposition):
        verdict = verify_decomposition(g, d)
        if not verdict.valid:
            raise InvalidArgument("invalid decomposition: " + "; ".join(verdict.problems[:3]))
    limit = state_budget(budget)
    for k in range(cap, 0, -1):
        try:
            ok, witness = _decide(g, nice, k, limit)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"{exc}; every k > {k} was refuted", upper_bound=k) from None
        if ok:
            return DpResult(k, witness, cap, d.width)
    return DpResult(0, GrundyColoring(()), cap, d.width)


def _base_cap(g: Graph) -> int:
    # degree bound, tightened by the iterated neighbor bound (both sound)
    return min(g.max_degree() + 1, g.n, max(color_upper_bounds(g), default=0))


def tw_cap(g: Graph, width: int, log_cap: bool = False) -> int:
    cap = _base_cap(g)
    if log_cap:
        # heuristic, off by default: (tw + 1) * ceil(log2(n + 1))
        cap = min(cap, (width + 1) * math.ceil(math.log2(g.n + 1)))
    return cap


def pw_cap(g: Graph, width: int) -> int:
    cap = _base_cap(g)
    if 8 * (width + 1) < cap:
        log.info("pathwidth bound caps the scan at %d (degree bound %d)", 8 * (width + 1), cap)
        cap = 8 * (width + 1)
    return cap


def solve_tw(g: Graph, d: AnyDecomposition, *, budget: int | None = None,
             log_cap: bool = False) -> DpResult:
    return _scan(g, d, tw_cap(g, d.width, log_cap), budget)


def solve_pw(g: Graph, d: PathDecomposition, *, budget: int | None = None) -> DpResult:
    if not isinstance(d, PathDecomposition):
        raise InvalidArgument("gamma_pw needs a path decomposition")
    return _scan(g, d, pw_cap(g, d.width), budget)


def gamma_tw(g: Graph, d: AnyDecomposition, *, budget: int | None = None,
             log_cap: bool = False) -> int:
    """Grundy number by a downward scan of k from ``min(Delta + 1, n)``."""
    return solve_tw(g, d, budget=budget, log_cap=log_cap).gamma


def gamma_pw(g: Graph, d: PathDecomposition, *, budget: int | None = None) -> int:
    """As :func:`gamma_tw`, with the scan also capped at ``8 * (width + 1)``."""
    return solve_pw(g, d, budget=budget).gamma
