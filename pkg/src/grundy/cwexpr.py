"""Clique-width expressions: construction nodes, evaluation, s-expression text.

Text form::

    (intro LABEL [VERTEX])
    (union E1 E2 ...)
    (join A B E)
    (rename FROM TO E)

Either every ``intro`` names its vertex id or none does; in the latter case
vertices are numbered in left-to-right order of the ``intro`` leaves.
A join whose label is empty in scope adds nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidArgument
from .graph import Graph


@dataclass(frozen=True)
class Intro:
    label: int
    vertex: int | None = None


@dataclass(frozen=True, eq=False)
class Union:
    parts: tuple


@dataclass(frozen=True, eq=False)
class Join:
    a: int
    b: int
    child: object


@dataclass(frozen=True, eq=False)
class Rename:
    src: int
    dst: int
    child: object


CwExpr = object  # Intro | Union | Join | Rename


def _children(e) -> tuple:
    if isinstance(e, Intro):
        return ()
    if isinstance(e, Union):
        return e.parts
    if isinstance(e, (Join, Rename)):
        return (e.child,)
    raise InvalidArgument(f"not a clique-width expression node: {e!r}")


def _postorder(e):
    """Nodes in postorder without recursion."""
    out = []
    stack = [(e, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        stack.append((node, True))
        for c in reversed(_children(node)):
            stack.append((c, False))
    return out


def labels_used(e) -> set[int]:
    used: set[int] = set()
    for node in _postorder(e):
        if isinstance(node, Intro):
            used.add(node.label)
        elif isinstance(node, Join):
            used.update((node.a, node.b))
        elif isinstance(node, Rename):
            used.update((node.src, node.dst))
    return used


def join_labels(e) -> set[int]:
    """Every label that appears as an argument of some join."""
    out: set[int] = set()
    for node in _postorder(e):
        if isinstance(node, Join):
            out.update((node.a, node.b))
    return out


def eval_cw_expression(e) -> tuple[Graph, int]:
    """Build the graph of ``e``; also return the number of labels it mentions."""
    nodes = _postorder(e)
    intros = [nd for nd in nodes if isinstance(nd, Intro)]
    named = [nd.vertex is not None for nd in intros]
    if any(named) and not all(named):
        raise InvalidArgument("either every intro names its vertex or none does")
    if all(named) and intros:
        ids = sorted(nd.vertex for nd in intros)
        if ids != list(range(len(intros))):
            raise InvalidArgument("intro vertex ids must be exactly 0..N-1")
    g = Graph(len(intros))
    next_id = 0
    # each result is a dict label -> set of vertices; consumed exactly once
    results: list[dict[int, set[int]]] = []
    for node in nodes:
        if isinstance(node, Intro):
            if node.label < 0:
                raise InvalidArgument("labels must be non-negative")
            if node.vertex is None:
                v, next_id = next_id, next_id + 1
            else:
                v = node.vertex
            results.append({node.label: {v}})
        elif isinstance(node, Union):
            if not node.parts:
                raise InvalidArgument("union needs at least one operand")
            parts = results[-len(node.parts):]
            del results[-len(node.parts):]
            merged = max(parts, key=lambda p: sum(map(len, p.values())))
            for p in parts:
                if p is merged:
                    continue
                for lab, vs in p.items():
                    merged.setdefault(lab, set()).update(vs)
            results.append(merged)
        elif isinstance(node, Join):
            if node.a == node.b:
                raise InvalidArgument(f"join needs distinct labels, got {node.a}")
            cur = results[-1]
            for u in cur.get(node.a, ()):
                for v in cur.get(node.b, ()):
                    g.add_edge(u, v)
        elif isinstance(node, Rename):
            if node.src == node.dst:
                raise InvalidArgument(f"rename needs distinct labels, got {node.src}")
            cur = results[-1]
            moved = cur.pop(node.src, None)
            if moved:
                cur.setdefault(node.dst, set()).update(moved)
    return g, len(labels_used(e))


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_sexpr(text: str):
    tokens = _TOKEN.findall(text)
    stack: list[list] = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) < 2:
                raise InvalidArgument("unbalanced ')'")
            items = stack.pop()
            stack[-1].append(_build(items))
        else:
            stack[-1].append(tok)
    if len(stack) != 1 or len(stack[0]) != 1:
        raise InvalidArgument("expected exactly one expression")
    return stack[0][0]


def _int(tok) -> int:
    try:
        return int(tok)
    except (TypeError, ValueError):
        raise InvalidArgument(f"expected an integer, got {tok!r}") from None


def _build(items: list):
    if not items:
        raise InvalidArgument("empty expression")
    head, args = items[0], items[1:]
    if head == "intro" and len(args) in (1, 2):
        return Intro(_int(args[0]), _int(args[1]) if len(args) == 2 else None)
    if head == "union" and args and all(not isinstance(a, str) for a in args):
        return Union(tuple(args))
    if head == "join" and len(args) == 3 and not isinstance(args[2], str):
        return Join(_int(args[0]), _int(args[1]), args[2])
    if head == "rename" and len(args) == 3 and not isinstance(args[2], str):
        return Rename(_int(args[0]), _int(args[1]), args[2])
    raise InvalidArgument(f"malformed node ({head} ...)")


def to_sexpr(e) -> str:
    out: list[str] = []
    stack: list = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            out.append(node)
        elif isinstance(node, Intro):
            out.append(f"(intro {node.label})" if node.vertex is None
                       else f"(intro {node.label} {node.vertex})")
        elif isinstance(node, Union):
            out.append("(union")
            stack.append(")")
            for p in reversed(node.parts):
                stack.append(p)
                stack.append(" ")
        elif isinstance(node, Join):
            out.append(f"(join {node.a} {node.b} ")
            stack.extend([")", node.child])
        elif isinstance(node, Rename):
            out.append(f"(rename {node.src} {node.dst} ")
            stack.extend([")", node.child])
        else:
            raise InvalidArgument(f"not a clique-width expression node: {node!r}")
    return "".join(out)
