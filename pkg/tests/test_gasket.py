import pytest

from sierpile.errors import DomainError
from sierpile.gasket import (VertexAddr, build_graph, canonical, contract_sinks, corner_addr, cut_addr,
                             display_xy, parse_sinks, reflect, rotate, spellings, subtriangle_embed)


@pytest.mark.parametrize("n", range(6))
def test_sizes(n):
    g = build_graph(n)
    assert len(g.vertices) == 3 * (3 ** n + 1) // 2
    assert len(g.edges) == 3 ** (n + 1)
    deg = [len(x) for x in g.nbr]
    assert sorted(g.index[c] for c in g.corners) == sorted(i for i, d in enumerate(deg) if d == 2)
    assert all(d == 4 for i, d in enumerate(deg) if g.vertices[i] not in g.corners)


def test_canonical_spelling():
    assert canonical("LR", "l") == ("LL", "r")
    assert spellings("L", "r") == [("L", "r"), ("R", "l")]
    assert VertexAddr.parse("R:l") == VertexAddr.parse("L:r")
    assert str(VertexAddr.parse("R:l")) == "L:r"


def test_special_vertices():
    assert corner_addr(2, "t") == VertexAddr.parse("UU:t")
    assert cut_addr(2, "t") == VertexAddr.parse("LR:r")
    x, y = display_xy(VertexAddr.parse("U:t"))
    assert x == pytest.approx(0.5) and y == pytest.approx(3 ** 0.5 / 2)


def test_symmetries_are_automorphisms():
    g = build_graph(3)
    edges = {frozenset((g.vertices[a], g.vertices[b])) for a, b in g.edges}
    for f in (lambda v: rotate(g, v), lambda v: reflect(g, 1, v), lambda v: reflect(g, 2, v)):
        assert {frozenset(map(f, e)) for e in edges} == edges
    v = VertexAddr.parse("LLL:r")
    assert rotate(g, v, 3) == v
    assert reflect(g, 1, VertexAddr.parse("LLL:l")) == VertexAddr.parse("LLL:l")


def test_subtriangle_embed():
    g = build_graph(2)
    assert subtriangle_embed(g, "U", VertexAddr.parse("L:t")) == VertexAddr.parse("UL:t")


def test_sinks():
    assert parse_sinks("two") == ("r", "t")
    assert parse_sinks("t,l") == ("l", "t")
    with pytest.raises(DomainError):
        parse_sinks("")
    cg = contract_sinks(build_graph(2), "two")
    assert len(cg) == 13
    assert sum(cg.multi_edges.values()) == 4
    assert all(d == len(js) + len(s) for d, js, s in zip(cg.deg, cg.nbr, cg.sink_edges))
