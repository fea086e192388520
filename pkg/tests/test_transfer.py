from fractions import Fraction

from sierpile import transfer as T


def test_type_closure():
    types, trans = T.type_system()
    assert len(types) == 52


def test_class_weights_sum_to_one():
    for cls, w in T.class_weights().items():
        assert sum(w.values()) == 1


def test_shape_fractions():
    for n in range(5):
        tot = sum(T.shape_fraction(s, n) for s in T.TREE_SHAPES)
        assert tot == 1


def test_ensemble_table_rows_are_laws():
    for cls in ("T", "S2", "R"):
        tab = T.ensemble_table(3, cls)
        for row in tab:
            s = sum(row)
            assert s in (0, 1)


def test_float_matches_exact():
    a = T.ensemble_table(3, "S2")
    b = T.ensemble_table(3, "S2", exact=False)
    for r, q in zip(a, b):
        for x, y in zip(r, q):
            assert abs(float(x) - y) < 1e-12
