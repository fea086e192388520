import pytest

from sierpile.gasket import build_graph, corner_addr
from sierpile.oracle import (bareiss_det, looping_at_vertex, class_counts, descendants, enumerate_forests, kirchhoff_count,
                             lerw, loop_erase, mc_looping_constant, wilson_sample, forest_edges)
from sierpile.sandpile import default_rng


def test_loop_erase_unit():
    assert loop_erase(["a", "b", "a", "c"]) == ["a", "c"]


def test_bareiss():
    assert bareiss_det([[2, -1], [-1, 2]]) == 3
    assert bareiss_det([[0, 1], [1, 0]]) == -1


def test_kirchhoff():
    assert kirchhoff_count(build_graph(0)) == 3
    assert kirchhoff_count(build_graph(1)) == 54
    assert kirchhoff_count(build_graph(2)) == 524880


def test_class_counts():
    assert class_counts(1) == {"T": 54, "S1": 30, "S2": 30, "S3": 30, "R": 50}
    assert class_counts(0) == {"T": 3, "S1": 1, "S2": 1, "S3": 1, "R": 1}


def test_lerw_simple_path():
    g = build_graph(3)
    rng = default_rng(5)
    tg = [g.index[corner_addr(3, "t")]]
    for _ in range(100):
        s = lerw(g, int(rng.integers(len(g.vertices))), tg, rng)
        assert len(set(s.path)) == len(s.path)


def test_wilson_spanning():
    g = build_graph(2)
    rng = default_rng(2)
    roots = [g.index[corner_addr(2, c)] for c in ("r", "t")]
    parent = wilson_sample(g, roots, rng)
    assert len(forest_edges(parent)) == len(g.vertices) - 2
    assert sum(descendants(g, forest_edges(parent), roots)) > 0


def test_mc_deterministic():
    a = mc_looping_constant(2, samples=10 ** 4, seed=4)
    b = mc_looping_constant(2, samples=10 ** 4, seed=4)
    assert a == b



@pytest.mark.slow
def test_mc_zeta_at_cut_point():
    """Neighbours of the bottom cut point of SG_2 on the LERW to {r, t}: Monte Carlo vs enumeration."""
    from sierpile.gasket import cut_addr
    from sierpile.oracle import looping_at_vertex
    g = build_graph(2)
    v = cut_addr(2, "t")
    exact = looping_at_vertex(2, v)
    rng = default_rng(17)
    tg = [g.index[corner_addr(2, c)] for c in ("r", "t")]
    i = g.index[v]
    xs = []
    for _ in range(10 ** 5):
        path = set(lerw(g, i, tg, rng).path)
        xs.append(sum(1 for j in g.nbr[i] if j in path))
    m = sum(xs) / len(xs)
    se = (sum((x - m) ** 2 for x in xs) / len(xs) / len(xs)) ** 0.5
    assert abs(m - float(exact)) <= 3 * se, (m, exact, se)


def test_looping_average_equals_descendant_average():
    """Per vertex the two differ, but averaged over SG_1 they agree exactly."""
    from sierpile.expectations import looping_constant
    g = build_graph(1)
    avg = sum(looping_at_vertex(1, v) for v in g.vertices) / len(g.vertices)
    assert avg == looping_constant(1)
