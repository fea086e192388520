from fractions import Fraction as F

import pytest

from sierpile.expectations import (M, check_eigenpairs, dbar_closed, expected_desc, expected_desc_total,
                                   expected_heights, limit_report, local_dbar_telescoped, looping_constant,
                                   looping_limit, _local_dbar)
from sierpile.oracle import enumerate_forests
from sierpile.recurrence import berlekamp_massey, geometric_coefficient


def test_matrix():
    assert check_eigenpairs()
    assert all(sum(r) == 450 for r in M)


@pytest.mark.parametrize("n", range(9))
def test_local_closed_forms(n):
    ld = _local_dbar(n)
    for which in (0, 1, 2):
        assert tuple(r[which] for r in ld) == dbar_closed(n, which)
    assert expected_desc_total(n, "local") == dbar_closed(n, "total")


def test_printed_closed_forms_have_misprints():
    assert dbar_closed(3, 1, printed=True) != dbar_closed(3, 1)
    assert dbar_closed(3, 2, printed=True) != dbar_closed(3, 2)


def test_exact_matches_enumeration():
    for cls in ("T", "S2", "R"):
        en = enumerate_forests(1, cls)
        a = ["T", "S1", "S2", "S3", "R"].index(cls)
        assert en.mean_des_total(include_corners=False) == expected_desc_total(1)[a]


def test_heights_sum_to_vertex_count():
    for sink, k in (("one", 1), ("two", 2), ("three", 3)):
        rep = expected_heights(3, sink)
        assert sum(rep.w) == 42 - k


def test_recurrence_tools():
    seq = [3 ** n + 2 * 5 ** n for n in range(10)]
    assert berlekamp_massey(seq) == [8, -15]
    assert geometric_coefficient(seq, 3) == 1


def test_limits():
    rep = limit_report("one")
    assert rep.w[0] == F(10957, 161856)
    assert rep.zeta == looping_limit() == F(635, 432)
    assert rep.wbar == (rep.zeta + 3) / 2
    loc = limit_report("one", "local")
    assert loc.zeta == F(7259, 5616)
    assert loc.wbar == F(24107, 11232)


def test_looping_constant_small():
    assert looping_constant(1) > 0
