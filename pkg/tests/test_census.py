from fractions import Fraction

import pytest

from sierpile.census import (CensusState, counts_closed, counts_from_table, counts_recursive,
                             decomposition_table, glue, partition)


def test_small_values():
    assert counts_recursive(0) == CensusState(0, 3, 1, 1)
    assert counts_recursive(1) == CensusState(1, 54, 30, 50)
    st = counts_recursive(2)
    assert (st.tau, st.sigma, st.rho) == (524880, 486000, 1350000)


@pytest.mark.parametrize("n", range(9))
def test_closed_form(n):
    assert counts_recursive(n) == counts_closed(n)


def test_squared_rho_variant_is_wrong():
    assert counts_recursive(2, rho_cubic=False).rho == 984600
    assert counts_recursive(2, rho_cubic=False).rho != counts_closed(2).rho


def test_decomposition_tables():
    assert [len(decomposition_table(c)) for c in ("T", "S2", "R")] == [6, 8, 26]
    assert sum(e.weight for e in decomposition_table("T")) == 6
    assert sum(e.weight for e in decomposition_table("S2")) == 10
    assert sum(e.weight for e in decomposition_table("R")) == 50
    for n in range(1, 6):
        assert counts_from_table(counts_recursive(n - 1)) == counts_recursive(n)


def test_glue_partitions():
    for cls in ("T", "S1", "S2", "S3", "R"):
        for e in decomposition_table(cls):
            assert glue(e.children) == cls
    assert set(partition("S2")) == {frozenset("t"), frozenset("lr")}
