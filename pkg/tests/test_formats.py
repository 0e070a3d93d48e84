from __future__ import annotations

import pytest

from grundy.coloring import GrundyColoring, TargetSpec
from grundy.decompositions import PathDecomposition, TreeDecomposition
from grundy.errors import InvalidArgument
from grundy.formats import (format_coloring, format_decomposition, format_graph, format_manifest,
                            format_targets, parse_coloring, parse_decomposition, parse_edges_file,
                            parse_graph, parse_targets, read_text)
from grundy.generators import random_graph
from grundy.graph import Graph


def test_graph_round_trip():
    for seed in range(10):
        g = random_graph(12, 0.3, seed)
        g.tags[3] = "support tree"
        h = parse_graph(format_graph(g))
        assert h == g and h.tags == {3: "support tree"}
        assert format_graph(h) == format_graph(g)


def test_graph_format_layout():
    text = format_graph(Graph(3, [(0, 1), (1, 2)]))
    assert text == "p edge 3 2\ne 1 2\ne 2 3\n"
    assert parse_graph("c hello\n\np edge 2 1\ne 2 1\n") == Graph(2, [(0, 1)])


@pytest.mark.parametrize("text,needle", [
    ("e 1 2\n", "line 1"),
    ("p edge 2 1\ne 1 x\n", "line 2"),
    ("p edge 2 1\ne 1 3\n", "line 2"),
    ("p edge 2 1\ne 1\n", "line 2"),
    ("p edge 2 1\nq 1 2\n", "line 2"),
    ("p edge 2 1\np edge 2 1\n", "line 2"),
    ("p edge 3 2\ne 1 2\n", "declares 2"),
    ("", "missing"),
])
def test_graph_errors(text, needle):
    with pytest.raises(InvalidArgument, match=needle):
        parse_graph(text)


def test_coloring_round_trip_and_errors():
    c = GrundyColoring((1, 2, 1, 3))
    assert parse_coloring(format_coloring(c), 4) == c
    assert format_coloring(c) == '{"0": 1, "1": 2, "2": 1, "3": 3}\n'
    for bad in ("[1, 2]", "{nope", '{"a": 1}', '{"5": 1}'):
        with pytest.raises(InvalidArgument):
            parse_coloring(bad, 4)


def test_targets_round_trip():
    spec = TargetSpec(frozenset({4, 1, 9}), 6)
    assert parse_targets(format_targets(spec)) == spec
    with pytest.raises(InvalidArgument):
        parse_targets('{"target": 2}')


def test_decomposition_round_trip():
    pd = PathDecomposition([{0, 1}, {1, 2}, {2, 3}], {1: 0, 3: 2})
    back = parse_decomposition(format_decomposition(pd))
    assert isinstance(back, PathDecomposition)
    assert back.bags == pd.bags and back.important == pd.important
    td = TreeDecomposition([{0, 1}, {1, 2}, {1, 3}], [(0, 1), (0, 2)])
    back = parse_decomposition(format_decomposition(td))
    assert not isinstance(back, PathDecomposition)
    assert back.bags == td.bags and sorted(back.edges) == sorted(td.edges)


@pytest.mark.parametrize("text", ["edges: []\n", "bags [[0]]\n", "bags: [[0]\n",
                                  "kind: path\nbags: [[0], [1], [2]]\nedges: [[0, 2], [1, 2]]\n",
                                  "bags: [[\"x\"]]\n"])
def test_decomposition_errors(text):
    with pytest.raises(InvalidArgument):
        parse_decomposition(text)


def test_edges_file_and_manifest(tmp_path):
    assert parse_edges_file("# a comment\n1 0 2 1\n\n2 0 3 1  # trailing\n") == [(1, 0, 2, 1),
                                                                           (2, 0, 3, 1)]
    with pytest.raises(InvalidArgument, match="line 1"):
        parse_edges_file("1 0 2\n")
    assert format_manifest({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'
    with pytest.raises(InvalidArgument):
        read_text(tmp_path / "missing.gr")
