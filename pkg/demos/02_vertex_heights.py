"""
Per-vertex descendant and height laws, and a heatmap table.

Run:  python demos/02_vertex_heights.py [level]
Writes heatmap_S2.csv (display coordinates) in the current directory.
"""

import csv
import sys

from sierpile import gasket, heights

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3

# Corner laws converge geometrically: p1(0) - 11/14 = -(5/42) 15^-n.
for k in range(4):
    p1, p2 = heights.corner_probs(k)
    print(f"n={k}: P(des(corner)=0) = {p1[0]}, minus 11/14: {p1[0] - heights.F(11, 14)}")

# Whole-graph descendant laws for two-component forests with t isolated.
vp = heights.vertex_probs(n, "S2")
g = gasket.build_graph(n)
v = gasket.cut_addr(n, "t")
d = vp[v]
print(f"bottom cut point {v} in SG_{n}: des law {d.as_strings()}")
print(f"height law: {heights.desc_to_height(d, g.degree(v)).as_strings()}")

with open("heatmap_S2.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["x", "y", "k", "probability"])
    for x, y, k, p in vp.heatmap_rows():
        w.writerow([f"{x:.6f}", f"{y:.6f}", k, float(p)])
print("wrote heatmap_S2.csv")
