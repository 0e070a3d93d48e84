"""3-CNF formulas turned into graphs of clique-width at most 8.

Vertex numbering: ``xP[i]``, ``xN[i]`` for ``i = 1..n`` (interleaved), then
per clause ``j``: ``c[j]``, ``d[j]`` and the literal vertices ``x[i,j]`` in
variable order, then ``u``. Support cliques follow, grouped by the vertex
they support in id order, smallest clique first; the first member of each
clique is the one joined to the supported vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..coloring import GrundyColoring
from ..cwexpr import Intro, Join, Rename, Union
from ..errors import InvalidArgument
from ..graph import Graph, _attach_clique_supports


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument("need at least one variable")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise InvalidArgument(f"clause {c} must have exactly three literals")
            if any(l == 0 or abs(l) > self.n for l in c):
                raise InvalidArgument(f"clause {c} has a literal outside 1..{self.n}")
            if len({abs(l) for l in c}) != 3:
                raise InvalidArgument(f"clause {c} repeats a variable")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs_cnf(text: str) -> CnfFormula:
    n = None
    declared = None
    literals: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InvalidArgument(f"bad problem line {line!r}")
            n, declared = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise InvalidArgument("clause before the problem line")
        try:
            literals.extend(int(tok) for tok in line.split())
        except ValueError:
            raise InvalidArgument(f"bad clause line {line!r}") from None
    if n is None:
        raise InvalidArgument("missing 'p cnf' line")
    clauses = []
    cur: list[int] = []
    for lit in literals:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if declared is not None and declared != len(clauses):
        raise InvalidArgument(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def format_dimacs_cnf(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.n} {phi.m}"]
    lines += [" ".join(map(str, c)) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def sat_target(phi: CnfFormula) -> int:
    return 10 * phi.n + 10 * phi.m + 1


@dataclass
class SatReduction:
    graph: Graph
    target: int
    gadget_index: dict[str, int]
    formula: CnfFormula
    supports: dict[int, list[tuple[int, list[int]]]] = field(default_factory=dict)  # v -> [(size, members)]

    def vertex(self, name: str) -> int:
        return self.gadget_index[name]


def _support_sets(phi: CnfFormula) -> dict[str, list[int]]:
    n, m = phi.n, phi.m
    out: dict[str, list[int]] = {}
    for i in range(1, n + 1):
        out[f"xP[{i}]"] = out[f"xN[{i}]"] = list(range(1, 2 * i - 1))
    for j, clause in enumerate(phi.clauses, start=1):
        for i in sorted(abs(l) for l in clause):
            evens = {2 * a for a in range(1, n + 1)}
            out[f"x[{i},{j}]"] = sorted((evens | {2 * i - 1, 2 * n + 1, 2 * n + 2}) - {2 * i})
        out[f"c[{j}]"] = list(range(1, 2 * n + 1))
        out[f"d[{j}]"] = list(range(1, 2 * n + 4)) + list(range(2 * n + 5, 2 * n + 4 + j))
    out["u"] = list(range(1, 2 * n + 5)) + list(range(2 * n + 5 + m, 10 * n + 10 * m + 1))
    return out


def build_sat_reduction(phi: CnfFormula) -> SatReduction:
    n = phi.n
    g = Graph()
    idx: dict[str, int] = {}

    def new(name: str) -> int:
        v = g.add_vertex(name)
        idx[name] = v
        return v

    for i in range(1, n + 1):
        g.add_edge(new(f"xP[{i}]"), new(f"xN[{i}]"))
    for j, clause in enumerate(phi.clauses, start=1):
        c = new(f"c[{j}]")
        g.add_edge(c, new(f"d[{j}]"))
        for lit in sorted(clause, key=abs):
            i = abs(lit)
            x = new(f"x[{i},{j}]")
            g.add_edge(x, c)
            side = "P" if lit > 0 else "N"
            for i2 in range(1, n + 1):
                g.add_edge(x, idx[f"x{side}[{i2}]"])
    u = new("u")
    for j in range(1, phi.m + 1):
        g.add_edge(u, idx[f"d[{j}]"])
    sets = _support_sets(phi)
    names = sorted(idx, key=idx.__getitem__)
    supports = {}
    for name in names:
        v = idx[name]
        supports[v] = _attach_clique_supports(g, v, sets[name])
    assert g.degree(u) == 10 * n + 10 * phi.m
    return SatReduction(g, sat_target(phi), idx, phi, supports)


def _fill_clique(colors: list[int], members: list[int], connector_color: int) -> None:
    size = len(members)
    if not 1 <= connector_color <= size:
        raise AssertionError("connector color exceeds its clique")
    colors[members[0]] = connector_color
    rest = [c for c in range(1, size + 1) if c != connector_color]
    for v, c in zip(members[1:], rest):
        colors[v] = c


def _color_supports(red: SatReduction, colors: list[int], v: int) -> None:
    """Give the connectors of ``v`` the colors it still misses below its own."""
    g = red.graph
    cliques = red.supports[v]
    connectors = {members[0] for _, members in cliques}
    have = {colors[u] for u in g.adj[v] if u not in connectors}
    missing = [c for c in range(colors[v] - 1, 0, -1) if c not in have]
    free = sorted(range(len(cliques)), key=lambda a: cliques[a][0])
    for c in missing:
        pick = next((a for a in free if cliques[a][0] >= c), None)
        if pick is None:
            raise AssertionError(f"no support clique can supply color {c}")
        free.remove(pick)
        _fill_clique(colors, cliques[pick][1], c)
    for a in free:
        _fill_clique(colors, cliques[a][1], 1)


def sat_witness_coloring(phi: CnfFormula, assignment: Sequence[bool],
                         red: SatReduction | None = None) -> GrundyColoring:
    """A Grundy coloring with ``10n + 10m + 1`` colors from a satisfying assignment."""
    if len(assignment) != phi.n:
        raise InvalidArgument(f"assignment needs {phi.n} values")
    if not phi.satisfied_by(assignment):
        raise InvalidArgument("assignment does not satisfy the formula")
    red = red or build_sat_reduction(phi)
    idx = red.gadget_index
    n = phi.n
    colors = [0] * red.graph.n
    for i in range(1, n + 1):
        hi, lo = (f"xP[{i}]", f"xN[{i}]") if assignment[i - 1] else (f"xN[{i}]", f"xP[{i}]")
        colors[idx[hi]], colors[idx[lo]] = 2 * i, 2 * i - 1
    for j, clause in enumerate(phi.clauses, start=1):
        lits = sorted(clause, key=abs)
        good = next(l for l in lits if assignment[abs(l) - 1] == (l > 0))
        others = [l for l in lits if l != good]
        colors[idx[f"x[{abs(good)},{j}]"]] = 2 * n + 3
        colors[idx[f"x[{abs(others[0])},{j}]"]] = 2 * n + 1
        colors[idx[f"x[{abs(others[1])},{j}]"]] = 2 * n + 2
        colors[idx[f"c[{j}]"]] = 2 * n + 4
        colors[idx[f"d[{j}]"]] = 2 * n + 4 + j
    colors[idx["u"]] = sat_target(phi)
    for v in red.supports:
        _color_supports(red, colors, v)
    assert all(colors)
    return GrundyColoring(tuple(colors))


# labels: 0 junk, 1 = all xN, 2 = all xP, 3/4 working, 5 = all d, 6/7 support cliques
def _with_supports(red: SatReduction, v: int, label: int):
    e = Intro(label, v)
    for _, members in red.supports[v]:
        inner = None
        for w in members[1:]:
            if inner is None:
                inner = Intro(6, w)
            else:
                inner = Rename(7, 6, Join(6, 7, Union((inner, Intro(7, w)))))
        connector = Intro(7, members[0])
        piece = connector if inner is None else Rename(6, 0, Join(6, 7, Union((inner, connector))))
        e = Rename(7, 0, Join(7, label, Union((e, piece))))
    return e


def build_cw8_expression(phi: CnfFormula, red: SatReduction | None = None):
    """Clique-width expression with labels 0..7 for the reduction graph, vertex ids included."""
    red = red or build_sat_reduction(phi)
    idx = red.gadget_index
    e = None

    def add(part):
        return part if e is None else Union((e, part))

    for i in range(1, phi.n + 1):
        pair = Join(3, 4, Union((_with_supports(red, idx[f"xN[{i}]"], 3),
                                 _with_supports(red, idx[f"xP[{i}]"], 4))))
        e = Rename(4, 2, Rename(3, 1, add(pair)))
    for j, clause in enumerate(phi.clauses, start=1):
        cd = Join(3, 4, Union((_with_supports(red, idx[f"c[{j}]"], 3),
                               _with_supports(red, idx[f"d[{j}]"], 4))))
        e = add(Rename(4, 5, cd))
        for lit in sorted(clause, key=abs):
            side = 2 if lit > 0 else 1
            lit_v = _with_supports(red, idx[f"x[{abs(lit)},{j}]"], 4)
            e = Rename(4, 0, Join(4, side, Join(4, 3, Union((e, lit_v)))))
        e = Rename(3, 0, e)
    e = Join(3, 5, add(_with_supports(red, idx["u"], 3)))
    return e


def all_sign_patterns(variables: Iterable[int] = (1, 2, 3)) -> CnfFormula:
    """The unsatisfiable formula with every sign pattern over three variables."""
    a, b, c = variables
    clauses = tuple((sa * a, sb * b, sc * c) for sa in (1, -1) for sb in (1, -1) for sc in (1, -1))
    return CnfFormula(max(variables), clauses)
