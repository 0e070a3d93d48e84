from __future__ import annotations

from itertools import combinations, product

import pytest

from grundy.coloring import (GrundyColoring, TargetSpec, exact_witness, first_fit_search,
                             verify_grundy, verify_targets)
from grundy.cwexpr import eval_cw_expression, join_labels
from grundy.decompositions import (PathDecomposition, check_decomposition, exact_width_small,
                                   verify_decomposition)
from grundy.errors import InvalidArgument
from grundy.generators import random_graph
from grundy.graph import is_support_vertex
from grundy.reductions.filling import assign_important_bags, ceil_log2, filling_order, tree_filling
from grundy.reductions.mcc import (MccInstance, apply_tree_filling, bits,
                                   build_gprime_path_decomposition, build_mcc_reduction,
                                   mcc_target_count, mcc_threshold, mcc_witness_coloring)
from grundy.reductions.sat import (CnfFormula, all_sign_patterns, build_cw8_expression,
                                   build_sat_reduction, format_dimacs_cnf, parse_dimacs_cnf,
                                   sat_target, sat_witness_coloring)

from helpers import path

TRIANGLE = [(1, 0, 2, 1), (1, 0, 3, 1), (2, 1, 3, 1)]


def core_verdict(out, pd):
    core = set().union(*pd.bags)
    return check_decomposition(core, [e for e in out.graph.edges() if core.issuperset(e)], pd)


# ------------------------------------------------------------------ counts

def test_counts_and_thresholds():
    assert mcc_target_count(2, 1) == 7
    assert mcc_target_count(3, 3) == 21
    assert mcc_threshold(2, 2, 1) == 10
    assert mcc_threshold(3, 2, 3) == 12
    assert mcc_threshold(2, 4, 1) == 12
    assert ceil_log2(1) == 0 and ceil_log2(7) == 3 and ceil_log2(8) == 3
    assert filling_order(1, 2) == 3
    assert filling_order(7, 6) == 10
    assert bits(2, 2) == [1, 0] and bits(1, 3) == [0, 0, 1]


def test_instance_validation():
    with pytest.raises(InvalidArgument):
        MccInstance.from_parts(2, 3, [(1, 0, 2, 0)])
    with pytest.raises(InvalidArgument):
        MccInstance.from_parts(2, 2, [(1, 0, 1, 1)])
    with pytest.raises(InvalidArgument):
        MccInstance.from_parts(2, 2, [(1, 0, 2, 0), (2, 0, 1, 0)])
    with pytest.raises(InvalidArgument):
        MccInstance.from_parts(2, 2, [(1, 2, 2, 0)])
    inst = MccInstance.from_parts(2, 2, [(2, 1, 1, 0)])
    assert inst.edges == (((1, 0), (2, 1)),)
    assert inst.is_clique([0, 1]) and not inst.is_clique([1, 1])


def test_target_counts_of_built_instances():
    out = build_mcc_reduction(MccInstance.from_parts(2, 2, [(1, 0, 2, 1)]))
    assert len(out.targets.vertices) == 7 and out.targets.target == 6
    out = build_mcc_reduction(MccInstance.from_parts(3, 2, TRIANGLE))
    assert len(out.targets.vertices) == 21 and out.targets.target == 6


@pytest.mark.parametrize("n", [2, 4])
def test_gadget_degrees(n):
    edges = [(1, 0, 2, n - 1), (1, 1, 3, 0), (2, 0, 3, 1)]
    inst = MccInstance.from_parts(3, n, edges)
    out = build_mcc_reduction(inst)
    g, idx, L = out.graph, out.gadget_index, inst.log_n

    def split(v):
        sup = sum(1 for u in g.adj[v] if is_support_vertex(g, u))
        return g.degree(v) - sup, sup

    for i in range(1, 4):
        for j in range(inst.m + 1):
            assert split(idx[f"p[{i},{j}]"]) == (2 * L, 3)
    for j in range(1, inst.m + 1):
        for end in ("x", "y"):
            assert g.degree(idx[f"wc[{j},{end}]"]) == 2 * L + 3
            assert split(idx[f"w[{j},{end}]"]) == (L + 3, L + 1)
    for i, i2 in combinations(range(1, 4), 2):
        incident = sum(1 for (a, _), (b, _) in inst.edges if (a, b) == (i, i2))
        assert split(idx[f"q[{i},{i2}]"]) == (2 * incident, 2 * L + 2)


# ------------------------------------------------------------ certificates

@pytest.mark.parametrize("k,n,edges", [(2, 2, [(1, 0, 2, 1)]),
                                       (2, 2, [(1, 0, 2, 0), (1, 1, 2, 1), (1, 0, 2, 1)]),
                                       (3, 2, TRIANGLE),
                                       (2, 4, [(1, 3, 2, 2), (1, 0, 2, 0)])])
def test_certificates(k, n, edges):
    inst = MccInstance.from_parts(k, n, edges)
    out = build_mcc_reduction(inst)
    pd = build_gprime_path_decomposition(out)
    assert core_verdict(out, pd).valid
    assert pd.width <= k * (k - 1) // 2 + 2 * k + 3
    assert len(set(pd.important.values())) == len(out.targets.vertices)
    fill = apply_tree_filling(out)
    assert verify_decomposition(fill.graph, fill.decomposition).valid
    assert fill.decomposition.width <= 4 * pd.width + 5
    assert fill.order == mcc_threshold(k, n, inst.m)


def test_tree_filling_base_case():
    g = path(3)
    fill = tree_filling(g, TargetSpec(frozenset({1}), 2), PathDecomposition([{0, 1}, {1, 2}]))
    assert fill.order == 3
    assert fill.graph.n == 5
    assert fill.graph.induced(range(3))[0] == g
    assert verify_decomposition(fill.graph, fill.decomposition).valid
    assert fill.slot_parent == {1: fill.root}


def test_tree_filling_errors():
    g = path(3)
    with pytest.raises(InvalidArgument):
        tree_filling(g, TargetSpec(frozenset({1}), 2), PathDecomposition([{0, 1}, {2}]))
    with pytest.raises(InvalidArgument):
        tree_filling(g, TargetSpec(frozenset({0, 1}), 2),
                     PathDecomposition([{0, 1}, {1, 2}], {0: 0, 1: 0}))
    with pytest.raises(InvalidArgument):
        tree_filling(g, TargetSpec(frozenset(), 2), PathDecomposition([{0, 1}, {1, 2}]))


def test_assign_important_bags_duplicates():
    pd = assign_important_bags(PathDecomposition([{0, 1, 2}]), [0, 2])
    assert len(pd.bags) == 2 and pd.important == {0: 0, 2: 1}


def test_tree_filling_on_random_colorings():
    # any Grundy coloring with targets at t extends by the filling tree's own orders
    for seed in range(30):
        g = random_graph(9, 0.35, seed)
        c = exact_witness(g)
        t = 1 + seed % c.max_color
        spec = TargetSpec(frozenset(v for v in range(g.n) if c[v] == t), t)
        _, pd = exact_width_small(g, "path")
        fill = tree_filling(g, spec, pd)
        h = fill.graph
        assert verify_decomposition(h, fill.decomposition).valid
        assert fill.decomposition.width <= 4 * pd.width + 5
        colors = list(c.colors) + [0] * (h.n - g.n)
        for v, order in fill.tree_orders.items():
            colors[v] = order
        ext = GrundyColoring(tuple(colors))
        assert verify_grundy(h, ext) == []
        assert ext[fill.root] == fill.order == filling_order(len(spec.vertices), t)


# ---------------------------------------------------------------- witnesses

def _clique_edge_sets(k, n):
    pairs = [((i, x), (i2, y)) for i, i2 in combinations(range(1, k + 1), 2)
             for x in range(n) for y in range(n)]
    for r in range(1, len(pairs) + 1):
        for subset in combinations(pairs, r):
            yield [(a[0], a[1], b[0], b[1]) for a, b in subset]


def _find_clique(inst):
    return next((list(c) for c in product(range(inst.n), repeat=inst.k) if inst.is_clique(c)),
                None)


def test_mcc_witness_all_small_edge_sets():
    seen = 0
    for edges in _clique_edge_sets(2, 2):
        inst = MccInstance.from_parts(2, 2, edges)
        clique = _find_clique(inst)
        assert clique is not None  # with k = 2 every edge is a clique
        out = build_mcc_reduction(inst)
        c = mcc_witness_coloring(inst, out, clique)
        h = apply_tree_filling(out).graph
        assert verify_grundy(h, c) == []
        assert verify_targets(h, c, out.targets)
        assert c.max_color == c[out.gadget_index["root"]] == mcc_threshold(2, 2, inst.m)
        seen += 1
    assert seen == 15


def test_mcc_witness_triangle():
    inst = MccInstance.from_parts(3, 2, TRIANGLE)
    out = build_mcc_reduction(inst)
    c = mcc_witness_coloring(inst, out, [0, 1, 1])
    h = out.filling.graph
    assert verify_grundy(h, c) == [] and verify_targets(h, c, out.targets)
    assert c.max_color == 12
    assert sum(1 for v in out.targets.vertices if c[v] == 6) == 21


def test_mcc_witness_with_extra_edges():
    inst = MccInstance.from_parts(3, 4, TRIANGLE + [(1, 3, 2, 2), (2, 3, 3, 0)])
    out = build_mcc_reduction(inst)
    c = mcc_witness_coloring(inst, out, [0, 1, 1])
    h = out.filling.graph
    assert verify_grundy(h, c) == [] and verify_targets(h, c, out.targets)
    assert c.max_color == mcc_threshold(3, 4, inst.m)


def test_mcc_witness_rejects_non_clique():
    inst = MccInstance.from_parts(3, 2, TRIANGLE[:2])
    out = build_mcc_reduction(inst)
    with pytest.raises(InvalidArgument):
        mcc_witness_coloring(inst, out, [0, 1, 1])


def test_mcc_no_instance_bounded_search():
    inst = MccInstance.from_parts(3, 2, [(1, 0, 2, 1), (1, 1, 3, 1), (2, 0, 3, 0)])
    assert _find_clique(inst) is None
    out = build_mcc_reduction(inst)
    h = apply_tree_filling(out).graph
    assert first_fit_search(h, 500, 1) < mcc_threshold(3, 2, inst.m)


# --------------------------------------------------------------------- SAT

PHI = CnfFormula(3, ((1, -2, 3),))


def test_formula_validation_and_dimacs():
    with pytest.raises(InvalidArgument):
        CnfFormula(3, ((1, 1, 2),))
    with pytest.raises(InvalidArgument):
        CnfFormula(3, ((1, 2),))
    with pytest.raises(InvalidArgument):
        CnfFormula(2, ((1, 2, 3),))
    text = "c example\np cnf 3 2\n1 -2 3 0\n-1 2\n-3 0\n"
    phi = parse_dimacs_cnf(text)
    assert phi.clauses == ((1, -2, 3), (-1, 2, -3))
    assert parse_dimacs_cnf(format_dimacs_cnf(phi)) == phi
    with pytest.raises(InvalidArgument):
        parse_dimacs_cnf("p cnf 3 2\n1 2 3 0\n")


def test_sat_targets():
    assert build_sat_reduction(PHI).target == sat_target(PHI) == 41
    unsat = all_sign_patterns()
    assert unsat.m == 8 and sat_target(unsat) == 111
    assert not any(unsat.satisfied_by(a) for a in product([False, True], repeat=3))


def test_sat_witness():
    red = build_sat_reduction(PHI)
    c = sat_witness_coloring(PHI, [True, True, True], red)
    assert verify_grundy(red.graph, c) == [] and c.max_color == 41
    assert c[red.vertex("u")] == 41
    for a in product([False, True], repeat=3):
        if PHI.satisfied_by(a):
            assert verify_grundy(red.graph, sat_witness_coloring(PHI, a, red)) == []
        else:
            with pytest.raises(InvalidArgument):
                sat_witness_coloring(PHI, a, red)


def test_sat_witness_two_clauses():
    phi = CnfFormula(3, ((1, 2, 3), (-1, -2, 3)))
    red = build_sat_reduction(phi)
    c = sat_witness_coloring(phi, [True, False, True], red)
    assert verify_grundy(red.graph, c) == [] and c.max_color == 51


def test_u_degree_bounds_first_fit():
    red = build_sat_reduction(PHI)
    u = red.vertex("u")
    assert red.graph.degree(u) == 40
    assert first_fit_search(red.graph, 300, 5) <= 41


@pytest.mark.parametrize("phi", [PHI, CnfFormula(3, ((1, 2, 3), (-1, -2, 3))),
                                 CnfFormula(4, ((1, -2, 4), (2, 3, -4), (-1, -3, 4))),
                                 all_sign_patterns()])
def test_cw8_round_trip(phi):
    red = build_sat_reduction(phi)
    e = build_cw8_expression(phi, red)
    g, labels = eval_cw_expression(e)
    assert g == red.graph
    assert labels <= 8
    assert 0 not in join_labels(e)
