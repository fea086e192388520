from fractions import Fraction as F

import pytest

from sierpile.gasket import VertexAddr
from sierpile.heights import (corner_probs, cut_laws_closed, cutpoint_probs, desc_to_height,
                              local_cut_laws, matrix_power_2x2, root_probs, root_probs_closed,
                              vertex_probs)


def test_level1_values():
    p1, p2 = corner_probs(1)
    assert p1.probs[:2] == (F(7, 9), F(2, 9))
    assert p2.probs[:2] == (F(4, 5), F(1, 5))
    e2, eb, e3 = root_probs(1, "exact")
    assert e2.probs[:3] == (0, F(1, 5), F(4, 5))
    assert e3.probs[:3] == (F(12, 25), F(6, 25), F(7, 25))


@pytest.mark.parametrize("n", range(9))
def test_closed_forms(n):
    assert corner_probs(n) == corner_probs(n, "closed")
    assert root_probs(n) == root_probs(n, "closed")
    assert corner_probs(n)[0][0] - F(11, 14) == -F(5, 42) * F(1, 15) ** n
    if n >= 1:
        assert local_cut_laws(n) == cut_laws_closed(n)


def test_printed_root_table_differs():
    assert root_probs_closed(2, printed=True) != root_probs_closed(2)


@pytest.mark.parametrize("n", range(11))
def test_matrix_power(n):
    assert matrix_power_2x2(n) == matrix_power_2x2(n, closed=False)


def test_desc_to_height():
    h = desc_to_height((F(11, 14), F(3, 14)), 2)
    assert h.probs == (F(11, 28), F(17, 28))
    assert sum(h.probs) == 1


def test_vertex_probs_are_laws():
    for cls in ("T", "S1", "S2", "S3", "R"):
        vp = vertex_probs(3, cls)
        for v, d in vp.table.items():
            assert sum(d.probs) == 1 and d.is_valid()


def test_cutpoints_agree_with_vertex_table():
    vp = vertex_probs(2, "S2")
    for v, d in cutpoint_probs(2, "S2").items():
        assert vp[v] == d


def test_symmetric_classes():
    a = vertex_probs(2, "T")
    assert a[VertexAddr.parse("LU:t")] == a[VertexAddr.parse("RU:t")]
