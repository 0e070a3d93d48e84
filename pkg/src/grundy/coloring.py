"""Grundy colorings: First-Fit, verification, and two brute-force oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidArgument
from .graph import Graph

ORDERINGS_MAX_N = 9
EXACT_MAX_N = 18


@dataclass(frozen=True)
class GrundyColoring:
    """Colors indexed by vertex; colors are positive integers."""

    colors: tuple[int, ...]

    @classmethod
    def from_mapping(cls, mapping: dict[int, int], n: int) -> GrundyColoring:
        missing = [v for v in range(n) if v not in mapping]
        if missing:
            raise InvalidArgument(f"coloring misses vertices {missing[:5]}")
        return cls(tuple(int(mapping[v]) for v in range(n)))

    @property
    def max_color(self) -> int:
        return max(self.colors, default=0)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out


@dataclass(frozen=True)
class TargetSpec:
    vertices: frozenset[int]
    target: int

    def __post_init__(self):
        if self.target < 1:
            raise InvalidArgument("target must be >= 1")


@dataclass(frozen=True)
class Violation:
    kind: str  # "improper-edge" | "missing-color" | "empty-class" | "bad-color"
    vertex: int | None = None
    other: int | None = None
    color: int | None = None

    def __str__(self) -> str:
        if self.kind == "improper-edge":
            return f"edge {self.vertex}-{self.other} joins two vertices of color {self.color}"
        if self.kind == "missing-color":
            return f"vertex {self.vertex} has no neighbor colored {self.color}"
        if self.kind == "empty-class":
            return f"class {self.color} empty"
        return f"vertex {self.vertex} has invalid color {self.color}"

    def to_record(self) -> dict:
        rec = {"kind": self.kind}
        for key in ("vertex", "other", "color"):
            val = getattr(self, key)
            if val is not None:
                rec[key] = val
        return rec


def first_fit(g: Graph, order: Sequence[int]) -> GrundyColoring:
    """Color vertices in ``order``, each with the least color unused by earlier neighbors."""
    n = g.n
    if len(order) != n or set(order) != set(range(n)):
        raise InvalidArgument("order must be a permutation of the vertices")
    colors = [0] * n
    for v in order:
        seen = {colors[u] for u in g.adj[v]}
        c = 1
        while c in seen:
            c += 1
        colors[v] = c
    return GrundyColoring(tuple(colors))


def verify_grundy(g: Graph, c: GrundyColoring) -> list[Violation]:
    """All violations of the Grundy conditions; an empty list means valid."""
    if len(c) != g.n:
        raise InvalidArgument(f"coloring has {len(c)} entries for {g.n} vertices")
    out: list[Violation] = []
    colors = c.colors
    for v, cv in enumerate(colors):
        if not isinstance(cv, (int, np.integer)) or cv < 1:
            out.append(Violation("bad-color", vertex=v, color=cv))
    if out:
        return out
    for u, v in g.edges():
        if colors[u] == colors[v]:
            out.append(Violation("improper-edge", vertex=u, other=v, color=colors[u]))
    for v, cv in enumerate(colors):
        if cv == 1:
            continue
        below = {colors[u] for u in g.adj[v] if colors[u] < cv}
        if len(below) < cv - 1:
            for j in range(1, cv):
                if j not in below:
                    out.append(Violation("missing-color", vertex=v, color=j))
    used = set(colors)
    for j in range(1, c.max_color + 1):
        if j not in used:
            out.append(Violation("empty-class", color=j))
    return out


def verify_targets(g: Graph, c: GrundyColoring, spec: TargetSpec) -> bool:
    """Whether a valid Grundy coloring gives every target vertex the target color."""
    if verify_grundy(g, c):
        raise InvalidArgument("underlying coloring is not a Grundy coloring")
    return all(c[v] == spec.target for v in spec.vertices)


def color_upper_bounds(g: Graph) -> list[int]:
    """Per-vertex upper bounds on the color any Grundy coloring can give.

    A vertex colored ``c`` has distinct neighbors colored ``1..c-1``, each of
    which must itself be able to reach its color. Starting from ``deg + 1``
    the bounds are tightened until nothing changes.
    """
    bound = [len(a) + 1 for a in g.adj]
    changed = True
    while changed:
        changed = False
        for v, nbrs in enumerate(g.adj):
            # largest t with t distinct neighbors whose sorted bounds beat 1..t
            t = 0
            for b in sorted(bound[u] for u in nbrs):
                if b > t:
                    t += 1
            if t + 1 < bound[v]:
                bound[v] = t + 1
                changed = True
    return bound


def grundy_upper_bound(g: Graph) -> int:
    return max(color_upper_bounds(g), default=0)


def gamma_orderings(g: Graph) -> int:
    """Grundy number by running First-Fit over every vertex ordering.

    Orderings sharing a prefix share the partial coloring of that prefix;
    the maximum is still taken over all ``n!`` orderings.
    """
    n = g.n
    if n > ORDERINGS_MAX_N:
        raise BudgetExceeded(f"gamma_orderings supports at most {ORDERINGS_MAX_N} vertices")
    if n == 0:
        return 0
    adj = [sorted(a) for a in g.adj]
    colors = [0] * n
    best = 0

    def extend(depth: int, used_max: int) -> None:
        nonlocal best
        if depth == n:
            best = max(best, used_max)
            return
        for v in range(n):
            if colors[v]:
                continue
            seen = {colors[u] for u in adj[v]}
            c = 1
            while c in seen:
                c += 1
            colors[v] = c
            extend(depth + 1, max(used_max, c))
            colors[v] = 0

    extend(0, 0)
    return best


def _maximal_independent_sets(adj_mask: list[int], mask: int) -> Iterable[int]:
    """Maximal independent sets of the subgraph induced by ``mask``.

    Bron-Kerbosch on the complement: an independent set is maximal exactly
    when it dominates the rest of ``mask``.
    """
    def rec(r: int, p: int, x: int):
        if not p and not x:
            yield r
            return
        # pivot: the vertex in p|x with the most non-neighbors in p
        px = p | x
        best_u, best_cnt = -1, -1
        while px:
            low = px & -px
            u = low.bit_length() - 1
            px ^= low
            cnt = bin(p & ~adj_mask[u]).count("1")
            if cnt > best_cnt:
                best_u, best_cnt = u, cnt
        cand = p & (adj_mask[best_u] | (1 << best_u))
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            non_nbrs = ~adj_mask[v] & ~low
            yield from rec(r | low, p & non_nbrs, x & non_nbrs)
            p &= ~low
            x |= low

    yield from rec(0, mask, 0)


def _exact_solver(g: Graph):
    n = g.n
    if n > EXACT_MAX_N:
        raise BudgetExceeded(f"gamma_exact supports at most {EXACT_MAX_N} vertices")
    adj_mask = [0] * n
    for v in range(n):
        for u in g.adj[v]:
            adj_mask[v] |= 1 << u
    memo: dict[int, int] = {0: 0}

    def solve(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        cap = 1 + max(bin(adj_mask[v] & mask).count("1")
                      for v in range(n) if mask >> v & 1)
        best = 0
        for s in _maximal_independent_sets(adj_mask, mask):
            val = 1 + solve(mask & ~s)
            if val > best:
                best = val
                if best >= cap:
                    break
        memo[mask] = best
        return best

    return solve, adj_mask


def gamma_exact(g: Graph) -> int:
    """Grundy number via the recursion over first color classes.

    ``Gamma(G[M]) = max(1 + Gamma(G[M - S]))`` over independent ``S``
    dominating ``M - S``, memoized on the bitmask ``M``. A search stops
    early once it reaches the degree bound ``Delta + 1``.
    """
    solve, _ = _exact_solver(g)
    return solve((1 << g.n) - 1)


def exact_witness(g: Graph) -> GrundyColoring:
    """A Grundy coloring with ``gamma_exact(g)`` colors, peeled class by class."""
    solve, adj_mask = _exact_solver(g)
    colors = [0] * g.n
    mask = (1 << g.n) - 1
    c = 1
    while mask:
        want = solve(mask) - 1
        s = next(s for s in _maximal_independent_sets(adj_mask, mask) if solve(mask & ~s) == want)
        for v in range(g.n):
            if s >> v & 1:
                colors[v] = c
        mask &= ~s
        c += 1
    return GrundyColoring(tuple(colors))


def to_csr(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    for v, a in enumerate(g.adj):
        indptr[v + 1] = indptr[v] + len(a)
    indices = np.fromiter(itertools.chain.from_iterable(sorted(a) for a in g.adj),
                          dtype=np.int64, count=int(indptr[-1]))
    return indptr, indices


def _first_fit_csr_py(indptr, indices, order, colors, mark):
    best = 0
    for step in range(order.shape[0]):
        v = order[step]
        stamp = step + 1
        for e in range(indptr[v], indptr[v + 1]):
            c = colors[indices[e]]
            if c > 0:
                mark[c] = stamp
        c = 1
        while mark[c] == stamp:
            c += 1
        colors[v] = c
        if c > best:
            best = c
    return best


try:
    from numba import njit

    _first_fit_csr = njit(cache=True, nogil=True)(_first_fit_csr_py)
except ImportError:  # pragma: no cover - numba is a declared dependency
    _first_fit_csr = _first_fit_csr_py


def first_fit_search(g: Graph, trials: int, seed: int) -> int:
    """Best First-Fit value over ``trials`` random orderings (a lower bound on Gamma).

    Orderings come from ``numpy.random.Generator(PCG64(seed))`` via
    ``permutation``, so results replay exactly for a given seed.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    n = g.n
    if n == 0:
        return 0
    indptr, indices = to_csr(g)
    rng = np.random.Generator(np.random.PCG64(seed))
    colors = np.zeros(n, dtype=np.int64)
    mark = np.zeros(g.max_degree() + 3, dtype=np.int64)
    best = 0
    for _ in range(trials):
        order = rng.permutation(n).astype(np.int64)
        colors[:] = 0
        mark[:] = 0
        best = max(best, int(_first_fit_csr(indptr, indices, order, colors, mark)))
    return best
