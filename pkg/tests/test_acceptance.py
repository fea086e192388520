"""
Acceptance criteria 1-10.  Each test records one PASS/FAIL line; the lines are
printed in the pytest terminal summary (and directly when this file is run as
a script).
"""

import time
from fractions import Fraction as F

import pytest

from sierpile import census, expectations, gasket, heights, oracle, sandpile, verify

RESULTS = {}

PUBLISHED_W = (F(10957, 161856), F(649680671, 4222984896), F(1448254439, 4222984896),
               F(1839170699, 4222984896))
PUBLISHED_WBAR = F(24107, 11232)
PUBLISHED_ZETA = F(7259, 5616)


def record(k, ok, detail):
    RESULTS[k] = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {detail}"
    print(RESULTS[k])
    assert ok, detail


def test_criterion_01_census():
    t0 = time.time()
    want = {0: (3, 1, 1), 1: (54, 30, 50), 2: (524880, 486000, 1350000)}
    ok = all((lambda s: (s.tau, s.sigma, s.rho))(census.counts_recursive(n)) == v for n, v in want.items())
    ok = ok and all(census.counts_recursive(n) == census.counts_closed(n) for n in range(9))
    dt = time.time() - t0
    record(1, ok and dt < 1, f"census table n<=2 and recursion = closed form n<=8 ({dt:.2f}s)")


def test_criterion_02_oracle_concordance():
    t0 = time.time()
    status, detail = verify.check_oracle_level1()
    t1 = oracle.kirchhoff_count(gasket.build_graph(1))
    t2 = oracle.kirchhoff_count(gasket.build_graph(2))
    dt = time.time() - t0
    ok = status == "PASS" and (t1, t2) == (54, 524880) and dt < 10
    record(2, ok, f"{detail}; Kirchhoff tau_1={t1}, tau_2={t2} ({dt:.2f}s)")


def test_criterion_03_burning_bijection():
    t0 = time.time()
    cg = gasket.contract_sinks(gasket.build_graph(1), "one")
    trees = [sandpile.tree_from_edges(cg, es) for es in verify.spanning_trees(cg)]
    images = [sandpile.tree_to_sandpile(t) for t in trees]
    rec = sandpile.recurrent_configs(cg)          # exhaustive scan of the stable configurations
    ok = (len(trees) == 54
          and len({c.chips for c in images}) == 54
          and all(sandpile.is_recurrent(c) for c in images)
          and all(sandpile.sandpile_to_tree(c) == t for c, t in zip(images, trees))
          and len(rec) == 54)
    dt = time.time() - t0
    record(3, ok and dt < 30, f"{len(trees)} trees, injective images, all recurrent, inverse ok, "
                              f"|recurrent|={len(rec)} ({dt:.2f}s)")


def test_criterion_04_burning_replay():
    status, detail = verify.check_burning_replay(1)
    record(4, status == "PASS", detail)


def test_criterion_05_closed_forms():
    status, detail = verify.check_corner_root_cut(8)
    record(5, status == "PASS", "corner, root and cut-point laws; p1(0) - 11/14 = -(5/42) 15^-n; " + detail)


def test_criterion_06_mean_height_limits():
    t0 = time.time()
    lines = []
    ok = True
    for sink in ("one", "two", "three"):
        rep = expectations.limit_report(sink)
        good = rep.w == PUBLISHED_W and rep.wbar == PUBLISHED_WBAR
        ok = ok and good
        lines.append(f"{sink}: w={tuple(str(x) for x in rep.w)}, mean={rep.wbar}")
    loc = [expectations.limit_report(s, "local") for s in ("one", "two", "three")]
    loc_ok = all(r.w == PUBLISHED_W and r.wbar == PUBLISHED_WBAR for r in loc)
    dt = time.time() - t0
    detail = (f"library limits vs tabulated {PUBLISHED_WBAR}: " + "; ".join(lines)
              + f" | local scheme reproduces the tabulated values: {loc_ok} ({dt:.2f}s)")
    record(6, ok and dt < 5, detail)


@pytest.mark.slow
def test_criterion_07_looping_constant():
    t0 = time.time()
    zeta = expectations.looping_limit()
    rep = expectations.limit_report("one")
    ident = rep.wbar == (zeta + 3) / 2
    mean, se = oracle.mc_looping_constant(3, ("r", "t"), 10 ** 6, seed=0)
    exact = float(expectations.looping_constant(3))
    z = (mean - exact) / se
    z_local = (mean - float(expectations.looping_constant(3, "local"))) / se
    dt = time.time() - t0
    ok = zeta == PUBLISHED_ZETA and ident and abs(z) <= 3 and dt < 120
    record(7, ok, f"looping_limit()={zeta} (tabulated {PUBLISHED_ZETA}; local scheme "
                  f"{expectations.looping_limit('local')}); wbar=(zeta+3)/2: {ident}; "
                  f"SG_3 MC {mean:.5f}+-{se:.5f} vs exact {exact:.5f}, z={z:+.2f} "
                  f"(local scheme z={z_local:+.1f}) ({dt:.1f}s)")


def test_criterion_08_matrix_facts():
    status, detail = verify.check_matrix_facts()
    record(8, status == "PASS", detail)


@pytest.mark.slow
def test_criterion_09_stationarity():
    status, detail = verify.check_chain_uniform(10 ** 6, seed=0, alpha=1e-3)
    record(9, status == "PASS", "SG_1 sink t, 10^6 steps: " + detail)


def test_criterion_10_rho_erratum():
    good = census.counts_recursive(2, rho_cubic=True)
    bad = census.counts_recursive(2, rho_cubic=False)
    closed = census.counts_closed(2)
    ok = good.rho == closed.rho and bad.rho != closed.rho
    record(10, ok, f"cubic variant rho_2={good.rho} = closed form; squared variant {bad.rho} fails")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
