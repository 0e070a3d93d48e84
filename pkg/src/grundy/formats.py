"""Text formats for graphs, colorings, targets, decompositions and manifests.

Graph files::

    c any comment
    p edge <n> <m>
    e <u> <v>            1-based endpoints
    c tag <v> <string>   1-based vertex, role tag

Colorings are JSON objects ``{"0": 1, "1": 2, ...}`` keyed by 0-based vertex.
Decompositions are lines ``bags: [[...], ...]`` and ``edges: [[i, j], ...]``
over 0-based vertices and bag indices; a path decomposition may say
``kind: path`` (edges then optional) and ``important: {"v": bag, ...}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .coloring import GrundyColoring, TargetSpec
from .decompositions import AnyDecomposition, PathDecomposition, TreeDecomposition
from .errors import InvalidArgument
from .graph import Graph


def format_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count()}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    lines += [f"c tag {v + 1} {g.tags[v]}" for v in sorted(g.tags)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    g: Graph | None = None
    declared_m = None
    tags: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "c":
                if len(parts) >= 4 and parts[1] == "tag":
                    tags[int(parts[2]) - 1] = line.split(None, 3)[3]
                continue
            if parts[0] == "p":
                if g is not None or len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise InvalidArgument(f"line {lineno}: bad problem line")
                g = Graph(int(parts[2]))
                declared_m = int(parts[3])
                continue
            if parts[0] == "e":
                if g is None:
                    raise InvalidArgument(f"line {lineno}: edge before problem line")
                if len(parts) != 3:
                    raise InvalidArgument(f"line {lineno}: edge line needs two endpoints")
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
                g.add_edge(u, v)
                continue
        except ValueError:
            raise InvalidArgument(f"line {lineno}: expected integers") from None
        except InvalidArgument as exc:
            if str(exc).startswith("line "):
                raise
            raise InvalidArgument(f"line {lineno}: {exc}") from None
        raise InvalidArgument(f"line {lineno}: unknown line type {parts[0]!r}")
    if g is None:
        raise InvalidArgument("missing 'p edge' line")
    if declared_m is not None and declared_m != g.edge_count():
        raise InvalidArgument(f"header declares {declared_m} edges, found {g.edge_count()}")
    for v, tag in tags.items():
        if not 0 <= v < g.n:
            raise InvalidArgument(f"tag for unknown vertex {v + 1}")
        g.tags[v] = tag
    return g


def format_coloring(c: GrundyColoring) -> str:
    return json.dumps({str(v): int(col) for v, col in enumerate(c.colors)}) + "\n"


def parse_coloring(text: str, n: int | None = None) -> GrundyColoring:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"coloring is not JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise InvalidArgument("coloring must be a JSON object")
    try:
        mapping = {int(k): int(v) for k, v in raw.items()}
    except (TypeError, ValueError):
        raise InvalidArgument("coloring keys and values must be integers") from None
    size = n if n is not None else (max(mapping) + 1 if mapping else 0)
    extra = [v for v in mapping if not 0 <= v < size]
    if extra:
        raise InvalidArgument(f"coloring names unknown vertices {sorted(extra)[:5]}")
    return GrundyColoring.from_mapping(mapping, size)


def format_targets(spec: TargetSpec) -> str:
    return json.dumps({"target": spec.target, "vertices": sorted(spec.vertices)}) + "\n"


def parse_targets(text: str) -> TargetSpec:
    try:
        raw = json.loads(text)
        return TargetSpec(frozenset(int(v) for v in raw["vertices"]), int(raw["target"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
        raise InvalidArgument("targets must be JSON with 'target' and 'vertices'") from None


def format_decomposition(d: AnyDecomposition) -> str:
    lines = []
    if isinstance(d, PathDecomposition):
        lines.append("kind: path")
    lines.append("bags: " + json.dumps([sorted(b) for b in d.bags]))
    lines.append("edges: " + json.dumps([list(e) for e in d.edges]))
    if isinstance(d, PathDecomposition) and d.important:
        lines.append("important: " + json.dumps({str(v): i for v, i in sorted(d.important.items())}))
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> AnyDecomposition:
    fields: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise InvalidArgument(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        try:
            fields[key] = value.strip() if key == "kind" else json.loads(value)
        except json.JSONDecodeError:
            raise InvalidArgument(f"line {lineno}: bad JSON for {key!r}") from None
    if "bags" not in fields:
        raise InvalidArgument("decomposition needs a 'bags' line")
    try:
        bags = [frozenset(int(v) for v in b) for b in fields["bags"]]
        edges = [(int(a), int(b)) for a, b in fields.get("edges", [])]
    except (TypeError, ValueError):
        raise InvalidArgument("bags must be lists of integers, edges pairs of integers") from None
    if fields.get("kind") == "path":
        pd = PathDecomposition(bags)
        if edges and sorted(tuple(sorted(e)) for e in edges) != pd.edges:
            raise InvalidArgument("a path decomposition's edges must join consecutive bags")
        if "important" in fields:
            pd.important = {int(v): int(i) for v, i in fields["important"].items()}
        return pd
    return TreeDecomposition(bags, edges)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc.strerror}") from None


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


def format_manifest(entries: dict) -> str:
    return json.dumps(entries, indent=2, sort_keys=True) + "\n"


def parse_edges_file(text: str) -> list[tuple[int, int, int, int]]:
    """Multicolored clique edges, one ``i x i2 y`` per line (parts 1-based, indices 0-based)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise InvalidArgument(f"line {lineno}: expected 'i x i2 y'")
        try:
            out.append(tuple(int(p) for p in parts))
        except ValueError:
            raise InvalidArgument(f"line {lineno}: expected integers") from None
    return out
