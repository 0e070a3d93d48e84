from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from grundy.coloring import gamma_exact, verify_grundy
from grundy.errors import InvalidArgument
from grundy.generators import (planted_module, random_bounded_nd, random_cograph, random_graph,
                               random_twin_graph)
from grundy.graph import Graph
from grundy.modular import (PatternProgram, TwinPartition, compute_twin_classes,
                            enumerate_patterns, gamma_mw, gamma_nd, is_eligible,
                            modular_partition, reduce_false_twins, replace_module_with_clique,
                            solve_nd, solve_pattern_program)

from helpers import complete, complete_bipartite, cycle, disjoint_union, join, path


def partition(classes, kinds, adjacent_pairs):
    quotient = [0] * len(classes)
    for a, b in adjacent_pairs:
        quotient[a] |= 1 << b
        quotient[b] |= 1 << a
    return TwinPartition([tuple(c) for c in classes], kinds, quotient)


def brute_twin_classes(g: Graph) -> set[frozenset[int]]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in combinations(range(g.n), 2):
        if g.adj[u] - {v} == g.adj[v] - {u}:
            parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), set()).add(v)
    return {frozenset(s) for s in groups.values()}


def milp_objective(patterns, sizes, positive=True):
    """Reference optimum of the pattern program via scipy's MILP solver."""
    if not patterns:
        return 0 if not any(sizes) else None
    w = len(sizes)
    a = np.array([[1 if pat >> i & 1 else 0 for pat in patterns] for i in range(w)])
    res = milp(c=-np.ones(len(patterns)), constraints=LinearConstraint(a, sizes, sizes),
               integrality=np.ones(len(patterns)),
               bounds=Bounds(1 if positive else 0, np.inf))
    return round(-res.fun) if res.success else None


def test_twin_class_examples():
    p = compute_twin_classes(cycle(4))
    assert p.classes == [(0, 2), (1, 3)] and p.kinds == ["false", "false"]
    assert p.quotient == [0b10, 0b01]
    p = compute_twin_classes(complete(4))
    assert p.classes == [(0, 1, 2, 3)] and p.kinds == ["true"]
    p = compute_twin_classes(path(4))
    assert p.w == 4 and set(p.kinds) == {"singleton"}


def test_twin_classes_match_definition():
    for seed in range(60):
        g = random_twin_graph([1 + seed % 3, 2, 1, 3], ["clique", "independent"] * 2, 0.5, seed)
        p = compute_twin_classes(g)
        assert {frozenset(c) for c in p.classes} == brute_twin_classes(g)
        where = p.class_of()
        for u, v in combinations(range(g.n), 2):
            if where[u] != where[v]:
                assert g.has_edge(u, v) == bool(p.quotient[where[u]] >> where[v] & 1)


def test_false_twin_reduction_examples():
    assert reduce_false_twins(cycle(4)) == complete(2)
    assert reduce_false_twins(complete_bipartite(3, 3)) == complete(2)
    assert reduce_false_twins(complete(4)) == complete(4)


def test_false_twin_reduction_preserves_gamma():
    for seed in range(50):
        g = random_bounded_nd(4, 4, seed)
        if g.n > 14:
            continue
        h = reduce_false_twins(g)
        assert "false" not in compute_twin_classes(h).kinds
        assert gamma_exact(h) == gamma_exact(g)


def test_pattern_examples():
    assert enumerate_patterns(partition([(0,), (1,)], ["true"] * 2, [(0, 1)])) == [0b01, 0b10]
    assert enumerate_patterns(partition([(0,), (1,)], ["true"] * 2, [])) == [0b01, 0b10, 0b11]
    p3 = partition([(0,), (1,), (2,)], ["singleton"] * 3, [(0, 1), (1, 2)])
    assert enumerate_patterns(p3) == [0b001, 0b010, 0b100, 0b101]


def test_eligibility_examples():
    adj = partition([(0,), (1,)], ["true"] * 2, [(0, 1)])
    apart = partition([(0,), (1,)], ["true"] * 2, [])
    assert is_eligible([0b01], apart) == [0b01]
    assert sorted(is_eligible([0b01, 0b10], adj)) == [0b01, 0b10]
    assert is_eligible([0b01, 0b10], apart) is None


def _eligible_by_orderings(patterns, p):
    from itertools import permutations
    closed = [p.quotient[i] | 1 << i for i in range(p.w)]
    for order in permutations(patterns):
        if all(all(closed[i] & order[a] for i in range(p.w) if order[b] >> i & 1)
               for a in range(len(order)) for b in range(a + 1, len(order))):
            return True
    return False


def test_eligibility_matches_all_orderings_and_is_hereditary():
    rng = np.random.default_rng(5)
    for trial in range(150):
        w = 4
        pairs = [pr for pr in combinations(range(w), 2) if rng.random() < 0.5]
        p = partition([(i,) for i in range(w)], ["singleton"] * w, pairs)
        pats = enumerate_patterns(p)
        k = int(rng.integers(1, min(5, len(pats)) + 1))
        chosen = [pats[i] for i in rng.choice(len(pats), size=k, replace=False)]
        order = is_eligible(chosen, p)
        assert (order is not None) == _eligible_by_orderings(chosen, p)
        if order is not None:
            for r in range(1, len(chosen)):
                for sub in combinations(chosen, r):
                    assert is_eligible(list(sub), p) is not None


def test_program_examples():
    assert solve_pattern_program(PatternProgram([0b1], [5])).objective == 5
    sol = solve_pattern_program(PatternProgram([0b01, 0b10], [2, 2]))
    assert sol.objective == 4 and sol.assignment == {0b01: 2, 0b10: 2}
    sol = solve_pattern_program(PatternProgram([0b11, 0b01], [3, 2]))
    assert sol.objective == 3 and sol.assignment == {0b11: 2, 0b01: 1}
    assert solve_pattern_program(PatternProgram([0b11, 0b01], [1, 1])) is None
    assert solve_pattern_program(PatternProgram([0b01], [1, 1])) is None


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda w: st.tuples(
    st.lists(st.integers(1, (1 << w) - 1), min_size=1, max_size=6, unique=True),
    st.lists(st.integers(0, 5), min_size=w, max_size=w))), st.booleans())
def test_program_matches_milp(case, positive):
    patterns, sizes = case
    sol = solve_pattern_program(PatternProgram(patterns, sizes, positive=positive))
    ref = milp_objective(patterns, sizes, positive)
    assert (sol.objective if sol else None) == ref
    if sol:
        for i, s in enumerate(sizes):
            assert sum(x for pat, x in sol.assignment.items() if pat >> i & 1) == s


def test_gamma_nd_examples():
    assert gamma_nd(cycle(4))[0] == 2
    k4 = join(complete(2), complete(2))
    assert compute_twin_classes(k4).w == 1
    assert gamma_nd(k4)[0] == 4
    assert gamma_nd(Graph(0))[0] == 0


def test_gamma_nd_matches_oracle():
    checked = 0
    seed = 0
    while checked < 60:
        g = random_bounded_nd(4, 4, seed)
        seed += 1
        if g.n > 16:
            continue
        res = solve_nd(g)
        assert res.gamma == gamma_exact(g)
        assert res.coloring.max_color == res.gamma and not verify_grundy(g, res.coloring)
        assert gamma_nd(g, relaxed=True)[0] == res.gamma
        checked += 1


def test_witness_uses_consecutive_blocks():
    # clique classes only, so the false-twin step changes nothing
    for seed in range(10):
        g = random_twin_graph([3, 2, 2, 1], ["clique"] * 4, 0.4, 60 + seed)
        res = solve_nd(g)
        assert not verify_grundy(g, res.coloring)
        p = compute_twin_classes(g)
        where = p.class_of()
        color = 1
        for pat in res.collection:
            for _ in range(res.counts[pat]):
                met = {where[v] for v in range(g.n) if res.coloring[v] == color}
                assert sum(1 << i for i in met) == pat
                color += 1
        assert color - 1 == res.gamma


def test_modular_partition_examples():
    parts = modular_partition(disjoint_union(complete(3), complete(2)))
    assert sorted(map(sorted, parts)) == [[0, 1, 2], [3, 4]]
    assert sorted(map(sorted, modular_partition(path(4)))) == [[0], [1], [2], [3]]
    parts = modular_partition(join(complete(3).complement(), complete(3).complement()))
    assert sorted(map(sorted, parts)) == [[0, 1, 2], [3, 4, 5]]
    with pytest.raises(InvalidArgument):
        modular_partition(Graph(1))


def _is_module(g: Graph, s: set[int]) -> bool:
    return all(len({x in g.adj[v] for v in s}) == 1 for x in range(g.n) if x not in s)


def test_modular_partition_against_brute_force():
    for seed in range(40):
        g = random_graph(7, 0.45, seed)
        parts = modular_partition(g)
        assert sorted(v for p in parts for v in p) == list(range(g.n))
        assert all(_is_module(g, set(p)) for p in parts)
        prime = len(g.components()) == 1 and len(g.complement().components()) == 1
        if prime:
            where = {v: i for i, p in enumerate(parts) for v in p}
            for r in range(2, g.n):
                for s in combinations(range(g.n), r):
                    if _is_module(g, set(s)):
                        assert len({where[v] for v in s}) == 1


def test_replace_module_with_clique():
    g, ids = planted_module(4, cycle(4), 0.5, 3)
    h = replace_module_with_clique(g, ids, 2)
    assert h.n == g.n - 2
    assert h.induced(range(4))[0] == g.induced(range(4))[0]
    with pytest.raises(InvalidArgument):
        replace_module_with_clique(path(4), [0, 1], 2)


def test_module_replacement_preserves_gamma():
    for seed in range(50):
        inner = random_graph(3 + seed % 4, 0.5, 7000 + seed)
        g, ids = planted_module(5 + seed % 4, inner, 0.4, seed)
        assert g.n <= 14
        h = replace_module_with_clique(g, ids, gamma_exact(inner))
        assert gamma_exact(h) == gamma_exact(g)


def test_gamma_mw_examples():
    assert gamma_mw(join(complete(3), complete(3))) == 6
    assert gamma_mw(disjoint_union(complete(3), complete(2))) == 3
    assert gamma_mw(Graph(0)) == 0


def test_gamma_mw_matches_oracle():
    for seed in range(60):
        g = random_cograph(4 + seed % 13, seed)
        assert gamma_mw(g) == gamma_exact(g)
    # small prime quotient with a non-trivial planted module
    for seed in range(20):
        g, _ = planted_module(4, random_graph(5, 0.5, 900 + seed), 0.5, seed)
        assert gamma_mw(g) == gamma_exact(g)
