import pytest

from sierpile.errors import ContractViolation
from sierpile.gasket import build_graph, contract_sinks
from sierpile.sandpile import (SandpileConfig, default_rng, group_add, identity_element, is_recurrent,
                               markov_step, max_stable, recurrent_configs, run_chain, sandpile_to_tree,
                               stabilize, tree_to_sandpile, zero_config)
from sierpile.verify import check_worked_example


@pytest.fixture(scope="module")
def g1():
    return contract_sinks(build_graph(1), "one")


def test_stabilize_order_independent(g1):
    c = SandpileConfig(g1, (5, 3, 7, 2, 4))
    a = stabilize(c)
    b = stabilize(c, order=[4, 3, 2, 1, 0])
    assert a == b and a[0].is_stable()


def test_recurrent_count(g1):
    assert len(recurrent_configs(g1)) == 54
    assert is_recurrent(max_stable(g1))
    assert not is_recurrent(zero_config(g1))


def test_group(g1):
    e = identity_element(g1)
    assert is_recurrent(e)
    for c in recurrent_configs(g1)[:10]:
        assert group_add(c, e) == c
    with pytest.raises(ContractViolation):
        group_add(zero_config(g1), e)


def test_bijection_roundtrip_level2():
    cg = contract_sinks(build_graph(2), "two")
    rng = default_rng(3)
    c = max_stable(cg)
    for _ in range(200):
        c = markov_step(c, rng)
        assert tree_to_sandpile(sandpile_to_tree(c)) == c


def test_chain_deterministic(g1):
    a = run_chain(max_stable(g1), 500, default_rng(11))
    b = run_chain(max_stable(g1), 500, default_rng(11))
    assert a == b


def test_json_roundtrip():
    cg = contract_sinks(build_graph(2), "three")
    c = max_stable(cg)
    assert SandpileConfig.from_json(c.to_json()) == c


def test_worked_example():
    assert check_worked_example()[0] == "PASS"
