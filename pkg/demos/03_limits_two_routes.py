"""
Density limits: the exact transfer recursion against the classical local
scheme, with Monte Carlo as referee.

The local scheme propagates only the laws at corners, roots and cut points and
reproduces the familiar tabulated constants (zeta = 7259/5616, mean height
24107/11232).  Exhaustive enumeration already shows that its cut-point inputs
are not the true laws at level 1, and the exact recursion, which tracks how
each copy's forest connects to its corners, gives different limits.  Loop-erased
random walks decide between them.

Run:  python demos/03_limits_two_routes.py
"""

from sierpile import expectations, heights, oracle

e2, _, _ = heights.root_probs(1, "exact")
l2, _, _ = heights.root_probs(1, "recursion")
print("root law at n=1, exact:", e2.as_strings()[:3], " local:", l2.as_strings()[:3])

for method in ("exact", "local"):
    rep = expectations.limit_report("one", method)
    print(f"{method:5s}: zeta = {rep.zeta} ({float(rep.zeta):.6f}), mean height = {rep.wbar} "
          f"({float(rep.wbar):.6f})")

for n in (2, 3, 4):
    mean, se = oracle.mc_looping_constant(n, samples=10 ** 6, seed=n)
    ex = float(expectations.looping_constant(n))
    lo = float(expectations.looping_constant(n, "local"))
    print(f"SG_{n}: MC {mean:.5f} +- {se:.5f}   exact {ex:.5f} (z={(mean - ex) / se:+.1f})   "
          f"local {lo:.5f} (z={(mean - lo) / se:+.1f})")
