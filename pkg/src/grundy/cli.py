"""``grundy`` command line: solve, verify, gen, params, bench.

Exit status is 0 on success, 1 on input errors or failed verification,
2 when a solver runs out of budget.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import comb
from pathlib import Path

from . import formats
from .coloring import (EXACT_MAX_N, ORDERINGS_MAX_N, GrundyColoring, exact_witness,
                       gamma_orderings, verify_grundy, verify_targets)
from .cwexpr import eval_cw_expression, join_labels, parse_sexpr, to_sexpr
from .decompositions import (EXACT_WIDTH_MAX_N, PathDecomposition, check_decomposition,
                             exact_width_small, min_degree_decomposition, verify_decomposition)
from .dp import solve_pw, solve_tw
from .errors import BudgetExceeded, GrundyError, InvalidArgument
from .generators import (caterpillar, random_bounded_nd, random_cograph, random_graph,
                         random_tree)
from .graph import Graph, binomial_coloring, build_binomial_tree, is_support_vertex
from .modular import compute_twin_classes, gamma_mw, gamma_nd, modular_partition
from .reductions.mcc import (MccInstance, apply_tree_filling, build_gprime_path_decomposition,
                             build_mcc_reduction, mcc_witness_coloring)
from .reductions.sat import (build_cw8_expression, build_sat_reduction, parse_dimacs_cnf,
                             sat_witness_coloring)

log = logging.getLogger("grundy")

ALGORITHMS = ("auto", "orderings", "exact", "tw", "pw", "nd", "mw")
AUTO_ND_MAX_CLASSES = 5


class VerifyFailed(GrundyError):
    pass


# --------------------------------------------------------------------- solve

def _load_graph(path) -> Graph:
    return formats.parse_graph(formats.read_text(path))


def _tree_decomposition_for(g: Graph, decomp_path):
    if decomp_path:
        return formats.parse_decomposition(formats.read_text(decomp_path)), "file"
    if g.n <= EXACT_WIDTH_MAX_N:
        return exact_width_small(g, "tree")[1], "exact treewidth"
    return min_degree_decomposition(g), "min-degree heuristic"


def _pick_auto(g: Graph) -> str:
    w = compute_twin_classes(g).w
    if w <= AUTO_ND_MAX_CLASSES:
        log.info("auto: nd (%d twin classes <= %d)", w, AUTO_ND_MAX_CLASSES)
        return "nd"
    log.info("auto: tw (%d twin classes > %d)", w, AUTO_ND_MAX_CLASSES)
    return "tw"


def solve_graph(g: Graph, algo: str, decomp_path=None, budget=None, log_cap=False):
    """Returns ``(gamma, coloring or None, algorithm actually run)``."""
    if algo == "auto":
        algo = _pick_auto(g)
    if algo == "orderings":
        if g.n > ORDERINGS_MAX_N:
            raise BudgetExceeded(f"orderings handles at most {ORDERINGS_MAX_N} vertices")
        return gamma_orderings(g), None, algo
    if algo == "exact":
        if g.n > EXACT_MAX_N:
            raise BudgetExceeded(f"exact handles at most {EXACT_MAX_N} vertices")
        c = exact_witness(g)
        return c.max_color, c, algo
    if algo == "tw":
        d, source = _tree_decomposition_for(g, decomp_path)
        log.info("tree decomposition of width %d (%s)", d.width, source)
        res = solve_tw(g, d, budget=budget, log_cap=log_cap)
        log.info("scan started at k = %d", res.cap)
        return res.gamma, res.coloring, algo
    if algo == "pw":
        if decomp_path:
            d = formats.parse_decomposition(formats.read_text(decomp_path))
            if not isinstance(d, PathDecomposition):
                raise InvalidArgument("--algo pw needs a decomposition file with 'kind: path'")
            source = "file"
        elif g.n <= EXACT_WIDTH_MAX_N:
            d, source = exact_width_small(g, "path")[1], "exact pathwidth"
        else:
            raise InvalidArgument("--algo pw on more than "
                                  f"{EXACT_WIDTH_MAX_N} vertices needs --decomp")
        log.info("path decomposition of width %d (%s)", d.width, source)
        log.info("pathwidth cap = 8 * (%d + 1) = %d", d.width, 8 * (d.width + 1))
        res = solve_pw(g, d, budget=budget)
        log.info("scan started at k = %d", res.cap)
        return res.gamma, res.coloring, algo
    if algo == "nd":
        gamma, c = gamma_nd(g)
        return gamma, c, algo
    if algo == "mw":
        return gamma_mw(g), None, algo
    raise InvalidArgument(f"unknown algorithm {algo!r}")


def run_solve(args) -> int:
    g = _load_graph(args.graph)
    try:
        gamma, coloring, algo = solve_graph(g, args.algo, args.decomp, args.budget, args.log_cap)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}")
        if exc.upper_bound is not None:
            print(f"gamma <= {exc.upper_bound}")
        return 2
    print(f"gamma = {gamma}")
    print(f"algorithm = {algo}")
    if coloring is not None and args.out:
        formats.write_text(args.out, formats.format_coloring(coloring))
        print(f"coloring = {args.out}")
    return 0


# -------------------------------------------------------------------- verify

def _check_coloring(g: Graph, c: GrundyColoring, report=None) -> bool:
    problems = verify_grundy(g, c)
    for p in problems:
        print(f"violation: {p}")
    if report:
        formats.write_text(report, json.dumps([p.to_record() for p in problems], indent=1) + "\n")
    if not problems:
        print(f"coloring ok: {c.max_color} colors")
    return not problems


def _check_expression(g: Graph, e) -> bool:
    h, labels = eval_cw_expression(e)
    ok = h == g
    if 0 in join_labels(e):
        print("violation: junk label 0 used in a join")
        ok = False
    print(f"expression {'ok' if ok else 'does not match the graph'}: {labels} labels")
    return ok


def run_verify(args) -> int:
    g = _load_graph(args.graph)
    if not (args.coloring or args.decomp or args.expr):
        raise InvalidArgument("nothing to verify: give --coloring, --decomp or --expr")
    ok = True
    if args.coloring:
        c = formats.parse_coloring(formats.read_text(args.coloring), g.n)
        ok = _check_coloring(g, c, args.report)
        if ok and args.targets:
            spec = formats.parse_targets(formats.read_text(args.targets))
            hit = verify_targets(g, c, spec)
            missed = sorted(v for v in spec.vertices if c[v] != spec.target)
            for v in missed[:10]:
                print(f"violation: target {v} has color {c[v]}, wanted {spec.target}")
            print(f"targets {'ok' if hit else 'missed'}: {len(spec.vertices) - len(missed)}"
                  f"/{len(spec.vertices)} at color {spec.target}")
            ok = hit
    elif args.targets:
        raise InvalidArgument("--targets needs --coloring")
    if args.decomp:
        d = formats.parse_decomposition(formats.read_text(args.decomp))
        if args.core:
            # decomposition of the graph without its support trees
            core = [v for v in range(g.n) if not is_support_vertex(g, v)]
            keep = set(core)
            verdict = check_decomposition(core, [e for e in g.edges() if keep.issuperset(e)], d)
        else:
            verdict = verify_decomposition(g, d)
        for p in verdict.problems:
            print(f"violation: {p}")
        if verdict.valid:
            print(f"decomposition ok: width {verdict.width}")
        ok = ok and verdict.valid
    if args.expr:
        ok = _check_expression(g, parse_sexpr(formats.read_text(args.expr))) and ok
    return 0 if ok else 1


# ----------------------------------------------------------------------- gen

class _Out:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.files: dict[str, str] = {}

    def put(self, key: str, name: str, text: str) -> Path:
        path = self.root / name
        formats.write_text(path, text)
        self.files[key] = name
        return path

    def manifest(self, extra: dict) -> None:
        body = dict(extra, files=dict(sorted(self.files.items())))
        formats.write_text(self.root / "manifest.json", formats.format_manifest(body))


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise VerifyFailed(f"self-check failed: {what}")


def _gen_binomial(args, out: _Out) -> dict:
    if not 1 <= args.i <= 20:
        raise InvalidArgument("--i must lie in 1..20")
    tree = build_binomial_tree(args.i)
    c = GrundyColoring(tuple(binomial_coloring(args.i)))
    _require(not verify_grundy(tree.graph, c) and c.max_color == args.i, "binomial coloring")
    out.put("graph", "graph.gr", formats.format_graph(tree.graph))
    out.put("coloring", "coloring.json", formats.format_coloring(c))
    return {"kind": "binomial", "i": args.i, "n": tree.graph.n, "root": tree.root, "gamma": args.i}


def _gen_random(args, out: _Out) -> dict:
    fam, n, seed = args.family, args.n, args.seed
    if fam == "gnp":
        g = random_graph(n, args.p, seed)
    elif fam == "tree":
        g = random_tree(n, seed)
    elif fam == "caterpillar":
        g = caterpillar(n, args.legs, seed)
    elif fam == "cograph":
        g = random_cograph(n, seed)
    elif fam == "nd":
        g = random_bounded_nd(args.classes, max(1, n), seed)
    else:  # argparse restricts choices
        raise InvalidArgument(f"unknown family {fam!r}")
    out.put("graph", "graph.gr", formats.format_graph(g))
    meta = {"kind": "random", "family": fam, "seed": seed, "n": g.n, "m": g.edge_count()}
    if g.n <= EXACT_MAX_N:
        c = exact_witness(g)
        _require(not verify_grundy(g, c), "exact witness")
        out.put("coloring", "coloring.json", formats.format_coloring(c))
        meta["gamma"] = c.max_color
    return meta


def _find_clique(inst: MccInstance):
    for choice in itertools.product(range(inst.n), repeat=inst.k):
        if inst.is_clique(choice):
            return list(choice)
    return None


def _gen_mcc(args, out: _Out) -> dict:
    edges = formats.parse_edges_file(formats.read_text(args.edges_file))
    inst = MccInstance.from_parts(args.k, args.n, edges)
    red = build_mcc_reduction(inst)
    pd = build_gprime_path_decomposition(red)
    fill = apply_tree_filling(red)
    h = fill.graph
    core = set().union(*pd.bags)
    pd_ok = check_decomposition(core, [e for e in red.graph.edges() if core.issuperset(e)], pd)
    td_ok = verify_decomposition(h, fill.decomposition)
    pd_bound = comb(inst.k, 2) + 2 * inst.k + 3
    _require(pd_ok.valid and pd.width <= pd_bound, "G'' path decomposition")
    _require(td_ok.valid and fill.decomposition.width <= 4 * pd.width + 5, "H tree decomposition")
    out.put("graph", "graph.gr", formats.format_graph(h))
    out.put("gprime", "gprime.gr", formats.format_graph(red.graph))
    out.put("targets", "targets.json", formats.format_targets(red.targets))
    out.put("path_decomposition", "gprime.pd", formats.format_decomposition(pd))
    out.put("tree_decomposition", "graph.td", formats.format_decomposition(fill.decomposition))
    meta = {"kind": "mcc", "k": inst.k, "n": inst.n, "m": inst.m, "vertices": h.n,
            "threshold": red.threshold, "target_color": red.targets.target,
            "target_count": len(red.targets.vertices), "filling_order": fill.order,
            "root": fill.root, "pathwidth_bound": pd_bound, "path_width": pd.width,
            "tree_width": fill.decomposition.width}
    clique = [int(x) for x in args.clique.split(",")] if args.clique else _find_clique(inst)
    meta["clique"] = clique
    if clique is not None:
        c = mcc_witness_coloring(inst, red, clique)
        _require(not verify_grundy(h, c), "witness coloring")
        _require(verify_targets(h, c, red.targets), "witness targets")
        _require(c[fill.root] == red.threshold, "root reaches the threshold")
        out.put("coloring", "coloring.json", formats.format_coloring(c))
    return meta


def _parse_assignment(text: str, n: int) -> list[bool]:
    tokens = text.replace(",", " ").split()
    if len(tokens) == 1 and len(tokens[0]) == n:
        tokens = list(tokens[0])
    truth = {"1": True, "t": True, "true": True, "0": False, "f": False, "false": False}
    try:
        vals = [truth[t.lower()] for t in tokens]
    except KeyError:
        raise InvalidArgument("assignment values must be 0/1 or t/f") from None
    if len(vals) != n:
        raise InvalidArgument(f"assignment needs {n} values, got {len(vals)}")
    return vals


def _gen_sat(args, out: _Out) -> dict:
    phi = parse_dimacs_cnf(formats.read_text(args.cnf_file))
    red = build_sat_reduction(phi)
    expr = build_cw8_expression(phi, red)
    h, labels = eval_cw_expression(expr)
    _require(h == red.graph and labels <= 8 and 0 not in join_labels(expr), "cw expression")
    out.put("graph", "graph.gr", formats.format_graph(red.graph))
    out.put("expression", "graph.cw", to_sexpr(expr) + "\n")
    meta = {"kind": "sat", "variables": phi.n, "clauses": phi.m, "vertices": red.graph.n,
            "threshold": red.target, "labels": labels}
    if args.assignment:
        c = sat_witness_coloring(phi, _parse_assignment(args.assignment, phi.n), red)
        _require(not verify_grundy(red.graph, c) and c.max_color == red.target, "witness")
        out.put("coloring", "coloring.json", formats.format_coloring(c))
    return meta


def run_gen(args) -> int:
    out = _Out(args.out)
    meta = {"binomial": _gen_binomial, "random": _gen_random,
            "mcc": _gen_mcc, "sat": _gen_sat}[args.family_kind](args, out)
    meta["selfcheck"] = "ok"
    out.manifest(meta)
    for key, name in sorted(out.files.items()):
        print(f"{key} = {out.root / name}")
    if "threshold" in meta:
        print(f"threshold = {meta['threshold']}")
    print(f"manifest = {out.root / 'manifest.json'}")
    return 0


# -------------------------------------------------------------------- params

def run_params(args) -> int:
    g = _load_graph(args.graph)
    print(f"vertices = {g.n}")
    print(f"edges = {g.edge_count()}")
    print(f"max degree = {g.max_degree() if g.n else 0}")
    if args.twins:
        p = compute_twin_classes(g)
        print(f"twin classes = {p.w}")
        for cls, kind in zip(p.classes, p.kinds):
            print(f"  {kind}: {list(cls)}")
    if args.modules:
        if g.n >= 2:
            parts = modular_partition(g)
            print(f"maximal modules = {len(parts)}")
            for part in parts:
                print(f"  {part}")
        else:
            print("maximal modules = 0")
    if args.width:
        kind = args.width
        if g.n <= EXACT_WIDTH_MAX_N:
            w, _ = exact_width_small(g, kind)
            print(f"{kind}width = {w}")
        elif kind == "tree":
            print(f"treewidth <= {min_degree_decomposition(g).width} (min-degree heuristic)")
        else:
            raise BudgetExceeded(f"exact pathwidth handles at most {EXACT_WIDTH_MAX_N} vertices")
    return 0


# --------------------------------------------------------------------- bench

def _bench_one(task):
    family, n, seed, algos = task
    g = random_cograph(n, seed) if family == "cograph" else (
        random_bounded_nd(4, max(1, n // 4), seed) if family == "nd" else random_graph(n, 0.3, seed))
    row = []
    for algo in algos:
        start = time.perf_counter()
        try:
            gamma = solve_graph(g, algo)[0]
        except BudgetExceeded:
            gamma = None
        row.append((algo, gamma, time.perf_counter() - start))
    return seed, g.n, row


def run_bench(args) -> int:
    algos = args.algos.split(",")
    for a in algos:
        if a not in ALGORITHMS:
            raise InvalidArgument(f"unknown algorithm {a!r}")
    tasks = [(args.family, args.n, args.seed + i, algos) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks))  # map keeps task order
    else:
        rows = [_bench_one(t) for t in tasks]
    totals = {a: 0.0 for a in algos}
    mismatches = 0
    for seed, n, row in rows:
        vals = {gamma for _, gamma, _ in row if gamma is not None}
        mismatches += len(vals) > 1
        print(f"seed {seed} n={n} " + " ".join(f"{a}={gm}" for a, gm, _ in row))
        for a, _, dt in row:
            totals[a] += dt
    for a in algos:
        print(f"time {a} = {totals[a]:.3f}s")
    print(f"mismatches = {mismatches}")
    return 0 if mismatches == 0 else 1


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grundy", description="Grundy numbers and reductions")
    ap.add_argument("-q", "--quiet", action="store_true", help="suppress log messages")
    sub = ap.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", help="compute the Grundy number of a graph file")
    s.add_argument("graph")
    s.add_argument("--algo", choices=ALGORITHMS, default="auto")
    s.add_argument("--decomp", help="decomposition file for tw/pw")
    s.add_argument("--budget", type=int, help="DP state budget (default from GRUNDY_BUDGET)")
    s.add_argument("--out", help="write the witness coloring here")
    s.add_argument("--log-cap", action="store_true",
                   help="heuristic cap (tw+1)*ceil(log2(n+1)) on the tw scan")
    s.set_defaults(func=run_solve)

    v = sub.add_parser("verify", help="check a coloring, targets, decomposition or expression")
    v.add_argument("graph")
    v.add_argument("--coloring")
    v.add_argument("--targets")
    v.add_argument("--decomp")
    v.add_argument("--core", action="store_true",
                   help="check --decomp against the graph without its support trees")
    v.add_argument("--expr", help="clique-width expression (s-expression)")
    v.add_argument("--report", help="write violation records as JSON")
    v.set_defaults(func=run_verify)

    gen = sub.add_parser("gen", help="generate instances and certificates")
    gsub = gen.add_subparsers(dest="family_kind", required=True)
    b = gsub.add_parser("binomial")
    b.add_argument("--i", type=int, required=True)
    r = gsub.add_parser("random")
    r.add_argument("--family", choices=("gnp", "tree", "caterpillar", "cograph", "nd"), required=True)
    r.add_argument("--n", type=int, required=True, help="vertices (spine length for caterpillar, "
                                                         "max class size for nd)")
    r.add_argument("--p", type=float, default=0.3)
    r.add_argument("--legs", type=int, default=2)
    r.add_argument("--classes", type=int, default=4)
    r.add_argument("--seed", type=int, default=0)
    mc = gsub.add_parser("mcc")
    mc.add_argument("--k", type=int, required=True)
    mc.add_argument("--n", type=int, required=True)
    mc.add_argument("--edges-file", required=True, help="lines 'i x i2 y'")
    mc.add_argument("--clique", help="comma-separated part indices; searched if omitted")
    sa = gsub.add_parser("sat")
    sa.add_argument("--cnf-file", "--cnf", dest="cnf_file", required=True)
    sa.add_argument("--assignment", help="e.g. 1,0,1 or tft")
    for p in (b, r, mc, sa):
        p.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=run_gen)

    pa = sub.add_parser("params", help="structural parameters of a graph")
    pa.add_argument("graph")
    pa.add_argument("--twins", action="store_true")
    pa.add_argument("--modules", action="store_true")
    pa.add_argument("--width", choices=("tree", "path"))
    pa.set_defaults(func=run_params)

    be = sub.add_parser("bench", help="time solvers on seeded random graphs")
    be.add_argument("--family", choices=("gnp", "cograph", "nd"), default="gnp")
    be.add_argument("--n", type=int, default=8)
    be.add_argument("--count", type=int, default=10)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--algos", default="exact,tw,nd")
    be.add_argument("--jobs", type=int, default=1)
    be.set_defaults(func=run_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="grundy: %(message)s",
                        level=logging.WARNING if args.quiet else logging.INFO, force=True)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (GrundyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
