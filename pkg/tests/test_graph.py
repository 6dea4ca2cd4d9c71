import re

import pytest

from fcalc.errors import PreconditionError
from fcalc.graph import (
    CLOSING_EDGES,
    PrincipleGraph,
    Principle,
    ImplicationEdge,
    build,
    check_equivalence,
    export_dot,
    path,
)


def test_build_matches_data_file():
    g = build()
    assert len(g.nodes) == 31
    assert len(g.edges) == 41
    pairs = {(e.src, e.dst) for e in g.edges}
    assert len(pairs) == len(g.edges)  # no duplicates


def test_named_edges_present():
    g = build()
    assert g.edge("AP&CCC", "MCP").provenance.startswith("Theorem 1")
    assert g.edge("ADT", "CVT").provenance.startswith("Theorem 5")
    assert ("I1", "I2") in {(e.src, e.dst) for e in g.edges}


def test_circle_memberships():
    g = build()
    assert set(g.nodes["MCP"].circles) == {1, 2, 4}
    assert set(g.nodes["UAS"].circles) == {4, 5}
    assert set(g.nodes["RT"].circles) == {3}


def test_path_examples():
    g = build()
    chain = path(g, "MVT", "CVT")
    assert len(chain) == 3
    assert chain[0].src == "MVT" and chain[-1].dst == "CVT"
    for e1, e2 in zip(chain, chain[1:]):
        assert e1.dst == e2.src
    assert path(g, "MCP", "MCP") == []
    assert len(path(g, "I1", "I2")) == 1
    with pytest.raises(PreconditionError):
        path(g, "MCP", "NOPE")


def test_path_deterministic():
    g = build()
    first = [(e.src, e.dst) for e in path(g, "MVT", "CVT")]
    again = [(e.src, e.dst) for e in path(g, "MVT", "CVT")]
    assert first == again


def test_every_pair_connected():
    g = build()
    ids = list(g.nodes)
    for src in ids:
        for dst in ids:
            chain = path(g, src, dst)
            if src != dst:
                assert chain[0].src == src and chain[-1].dst == dst


def test_check_equivalence():
    g = build()
    assert check_equivalence(g)
    single = PrincipleGraph([Principle("A", "alone", (1,))], [])
    assert check_equivalence(single)


def test_removing_any_closing_edge_breaks_equivalence():
    g = build()
    for src, dst in CLOSING_EDGES:
        assert not check_equivalence(g.without_edge(src, dst))


def test_removing_redundant_edge_keeps_equivalence():
    g = build()
    # EVT is fed by both BWP and ES, so one feeder is redundant
    assert check_equivalence(g.without_edge("ES", "EVT"))


def test_export_dot_structure():
    g = build()
    dot = export_dot(g)
    assert '"MVT" -> "TT_L"' in dot
    node_lines = re.findall(r'^\s*"[^"]+";$', dot, flags=re.M)
    assert len(node_lines) == len(g.nodes)
    edge_lines = re.findall(r'^\s*"[^"]+" -> "[^"]+" \[label="[^"]*"\];$', dot, flags=re.M)
    assert len(edge_lines) == len(g.edges)


def test_export_dot_parses_as_digraph():
    # minimal grammar: 'digraph' name '{' (node | edge)* '}'
    dot = export_dot(build())
    tokens = re.findall(r'"[^"]*"|\[label="[^"]*"\]|->|\{|\}|;|digraph|\w+', dot)
    assert tokens[0] == "digraph"
    assert tokens[2] == "{"
    assert tokens[-1] == "}"
    body = tokens[3:-1]
    i = 0
    statements = 0
    while i < len(body):
        assert body[i].startswith('"')
        if body[i + 1] == "->":
            assert body[i + 2].startswith('"')
            assert body[i + 3].startswith("[label=")
            assert body[i + 4] == ";"
            i += 5
        else:
            assert body[i + 1] == ";"
            i += 2
        statements += 1
    assert statements == len(build().nodes) + len(build().edges)


def test_rejects_duplicate_edges_and_unknown_nodes():
    nodes = [Principle("A", "a", (1,)), Principle("B", "b", (1,))]
    edge = ImplicationEdge("A", "B", "Theorem 1")
    with pytest.raises(PreconditionError):
        PrincipleGraph(nodes, [edge, edge])
    with pytest.raises(PreconditionError):
        PrincipleGraph(nodes, [ImplicationEdge("A", "Z", "Theorem 1")])
