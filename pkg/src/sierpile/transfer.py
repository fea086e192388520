"""
Exact transfer recursion for neighbouring-descendant distributions.

The number of neighbouring descendants of a vertex is *not* determined by the
sub-forest inside the copy of SG_{n-1} that contains it: a vertex of one
component can be a neighbour of a vertex of another component of the same
copy, and whether it is a descendant depends on how the two components are
joined outside the copy.  The recursion therefore tracks, for every forest
in a copy, a *type* with

  * the refined class of the forest: the corner partition plus, for spanning
    trees, the shape of the skeleton joining the three corners (TY: a branch
    point strictly inside; Tl / Tr / Tt: the path between the other two corners
    passes through that corner),
  * for each component: its corner set, the corner through which the path to
    the root leaves the component (the root corner itself if the component
    contains a root), and the corner of the same copy through which that path
    first re-enters the copy ('' if it never does).

Conditional on the type, the sub-forests in the three copies are independent
and uniform, which makes the recursion exact.  A handful of closed-form facts
keep it cheap: the refined-shape fractions within a class are
    P(Tm | T) = 3^{-(n+1)} for each m in {l, r, t},  P(TY | T) = 1 - 3^{-n},
and P(child classes | parent class) is the normalized decomposition weight
(1/6 for trees; 1/10 or 3/10 for two components; 1/50 or 3/50 for three).
"""

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np
from gmpy2 import mpq

from .census import BOUNDARY, CLASSES, ISOLATED, _UnionFind, decomposition_table, partition
from .errors import DomainError, check_level
from .gasket import COPIES, CORNERS, LETTER, VertexAddr, build_graph, canonical, corner_addr

KMAX = 5                         # descendant counts 0..4
SHAPES = ("TY", "Tl", "Tr", "Tt", "Sl", "Sr", "St", "R")
TREE_SHAPES = ("TY", "Tl", "Tr", "Tt")
CUT_PAIRS = ((("L", "r"), ("R", "l")), (("L", "t"), ("U", "l")), (("R", "t"), ("U", "r")))
SIX = ("l", "r", "t", "bc", "lc", "rc")


def base_class(shape):
    """Forest class of a refined shape (S-shapes are named by the isolated corner)."""
    if shape[0] == "T":
        return "T"
    if shape == "R":
        return "R"
    return {v: k for k, v in ISOLATED.items()}[shape[1]]


def shape_fraction(shape, n):
    """P(refined shape | class) on SG_n."""
    if shape == "TY":
        return 1 - Fraction(1, 3 ** n)
    if shape[0] == "T":
        return Fraction(1, 3 ** (n + 1))
    return Fraction(1)


def class_weights():
    """P(child classes (L, R, U) | parent class), from the decomposition table."""
    out = {}
    for cls in CLASSES:
        entries = decomposition_table(cls)
        tot = sum(e.weight for e in entries)
        out[cls] = {e.children: Fraction(e.weight, tot) for e in entries}
    return out


# ------------------------------------------------------------ skeletons

def _skeleton_edges(shape):
    """Edges of a minimal forest of the given shape on the corners (plus a centre)."""
    if shape == "TY":
        return [("c*", x) for x in CORNERS]
    if shape[0] == "T":
        m = shape[1]
        return [(m, x) for x in CORNERS if x != m]
    if shape[0] == "S":
        a, b = [x for x in CORNERS if x != shape[1]]
        return [(a, b)]
    return []


def _boundary_forest(combo):
    adj = defaultdict(list)
    for d, shape in zip(COPIES, combo):
        for a, b in _skeleton_edges(shape):
            na = BOUNDARY[d].get(a, d + a)
            nb = BOUNDARY[d].get(b, d + b)
            adj[na].append(nb)
            adj[nb].append(na)
    return adj


def _path(adj, a, b):
    prev = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                stack.append(y)
    if b not in prev:
        return None
    p = [b]
    while p[-1] != a:
        p.append(prev[p[-1]])
    return p[::-1]


@lru_cache(maxsize=None)
def shape_table():
    """Parent refined shape -> list of (L, R, U) child shapes."""
    weights = class_weights()
    tab = defaultdict(list)
    for combo in product(SHAPES, repeat=3):
        classes = tuple(base_class(s) for s in combo)
        parent = None
        for cls, w in weights.items():
            if classes in w:
                parent = cls
        if parent is None:
            continue
        if parent == "T":
            adj = _boundary_forest(combo)
            parent = "TY"
            for m in CORNERS:
                a, b = [x for x in CORNERS if x != m]
                if m in _path(adj, a, b):
                    parent = "T" + m
        elif parent != "R":
            parent = "S" + ISOLATED[parent]
        tab[parent].append(combo)
    return dict(tab)


# ------------------------------------------------------------ types

def make_type(shape, comps):
    """Canonical type: (shape, sorted tuple of (corner-set, exit, attach))."""
    return (shape, tuple(sorted(("".join(sorted(c)), e, a or "") for c, e, a in comps)))


def ensemble(cls, roots=None):
    """
    (shapes, components) describing forests of class `cls` rooted at `roots`
    (one corner per component).  Defaults: trees rooted at the top corner;
    S2 = {t} | {l, r} rooted at r; S1 and S3 are its images under the rotation
    (S1: {l} | {r, t} rooted at t, S3: {r} | {l, t} rooted at l); R rooted at
    its corners.
    """
    if cls not in CLASSES:
        raise DomainError(f"unknown forest class {cls!r}")
    default = {"T": ("t",), "S1": ("l", "t"), "S2": ("t", "r"), "S3": ("r", "l"), "R": ("l", "r", "t")}
    roots = tuple(default[cls] if roots is None else roots)
    parts = partition(cls)
    comps = []
    for p in parts:
        r = [x for x in roots if x in p]
        if len(r) != 1:
            raise DomainError(f"roots {roots} must pick exactly one corner per component of {cls}")
        comps.append(("".join(sorted(p)), r[0], None))
    if cls == "T":
        shapes = TREE_SHAPES
    elif cls == "R":
        shapes = ("R",)
    else:
        shapes = ("S" + ISOLATED[cls],)
    return shapes, comps


def _children(ptype, combo):
    """Child types of the three copies given the parent type and child shapes."""
    _, comps = ptype
    adj = _boundary_forest(combo)
    parent = {}
    for _, e, a in comps:
        parent[e] = a or None
        stack = [e]
        seen = {e}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen and y not in parent:
                    seen.add(y)
                    parent[y] = x
                    stack.append(y)

    def depth(x):
        k = 0
        while parent[x] is not None:
            x = parent[x]
            k += 1
        return k

    out = []
    for d, shape in zip(COPIES, combo):
        inv = {v: k for k, v in BOUNDARY[d].items()}
        items = []
        for comp in partition(base_class(shape)):
            nodes = [BOUNDARY[d][x] for x in comp]
            ex = min(nodes, key=depth)
            x = parent[ex]
            tgt = None
            while x is not None:
                if x in inv:
                    tgt = inv[x]
                    break
                x = parent[x]
            items.append((comp, inv[ex], tgt))
        out.append(make_type(shape, items))
    return tuple(out)


def _all_seeds():
    seeds = []
    for cls in CLASSES:
        parts = partition(cls)
        for roots in product(*[sorted(p) for p in parts]):
            shapes, comps = ensemble(cls, roots)
            seeds.extend(make_type(s, comps) for s in shapes)
    return seeds


@lru_cache(maxsize=None)
def type_system():
    """
    Closure of all rooted types under the decomposition.  Returns
    (types, transitions) where transitions[type] is a list of
    (child shapes, child types, P(child classes | parent class)).
    """
    weights = class_weights()
    tab = shape_table()
    types = set()
    trans = {}
    todo = _all_seeds()
    while todo:
        pt = todo.pop()
        if pt in types:
            continue
        types.add(pt)
        cls = base_class(pt[0])
        trans[pt] = []
        for combo in tab[pt[0]]:
            ch = _children(pt, combo)
            w = weights[cls][tuple(base_class(s) for s in combo)]
            trans[pt].append((combo, ch, w))
            todo.extend(ch)
    return tuple(sorted(types)), trans


# ------------------------------------------------------------ level 0

_E0 = (("l", "r"), ("l", "t"), ("r", "t"))


def _shape_of(es):
    uf = _UnionFind()
    for a, b in es:
        if not uf.union(a, b):
            return None
    groups = defaultdict(set)
    for x in CORNERS:
        groups[uf.find(x)].add(x)
    parts = {frozenset(g) for g in groups.values()}
    for cls in CLASSES:
        if set(partition(cls)) == parts:
            break
    if cls == "T":
        deg = defaultdict(int)
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        return "T" + [x for x in CORNERS if deg[x] == 2][0]
    return "R" if cls == "R" else "S" + ISOLATED[cls]


def _augmented_des(ptype, es):
    """des on the triangle, with each component's exit linked to its re-entry corner."""
    adj = defaultdict(list)
    for a, b in es:
        adj[a].append(b)
        adj[b].append(a)
    par = {}
    for _, e, a in ptype[1]:
        par[e] = a or None
        stack = [e]
        seen = {e}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    par[y] = x
                    stack.append(y)

    def ancestors(y):
        s = set()
        y = par[y]
        while y is not None:
            if y in s:
                raise ArithmeticError("cyclic re-entry links")
            s.add(y)
            y = par[y]
        return s

    anc = {y: ancestors(y) for y in CORNERS}
    return {v: sum(1 for y in CORNERS if y != v and v in anc[y]) for v in CORNERS}


def level0(ptype):
    """Corner descendant distributions on SG_0 for one type: {corner: tuple of 5 Fractions}."""
    res = {v: [0] * KMAX for v in CORNERS}
    tot = 0
    for m in range(8):
        es = [_E0[i] for i in range(3) if m >> i & 1]
        if _shape_of(es) != ptype[0]:
            continue
        tot += 1
        for v, k in _augmented_des(ptype, es).items():
            res[v][k] += 1
    return {v: tuple(Fraction(x, max(tot, 1)) for x in res[v]) for v in CORNERS}


def conv(a, b):
    out = [0] * KMAX
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y and i + j < KMAX:
                    out[i + j] += x * y
    return out


# ------------------------------------------------------------ grouped transitions

@lru_cache(maxsize=None)
def _grouped():
    """
    For each parent type, the transition weights collected by what they multiply,
    as polynomials in x = 3^{-n} (n = parent level), to be divided by the parent
    shape fraction:
      corner[c][child] ; whole[child] ; cut[(child1, c1, child2, c2)]
    Weights are ids into the returned list of distinct polynomials, each given
    as its coefficients of 1, x, x^2, x^3.
    """
    types, trans = type_system()
    poly = {"TY": (1, -3), "Tl": (0, 1), "Tr": (0, 1), "Tt": (0, 1)}
    polys = {}

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    out = {}
    for pt in types:
        corner = {c: defaultdict(lambda: [Fraction(0)] * 4) for c in CORNERS}
        whole = defaultdict(lambda: [Fraction(0)] * 4)
        cut = defaultdict(lambda: [Fraction(0)] * 4)
        for combo, ch, w in trans[pt]:
            p = [w]
            for s in combo:
                p = pmul(p, poly.get(s, (1,)))
            p = p + [0] * (4 - len(p))

            def add(acc):
                for k in range(4):
                    acc[k] += p[k]
            for c in CORNERS:
                add(corner[c][ch[COPIES.index(LETTER[c])]])
            for t in ch:
                add(whole[t])
            for (d1, c1), (d2, c2) in CUT_PAIRS:
                add(cut[(ch[COPIES.index(d1)], c1, ch[COPIES.index(d2)], c2)])
        def frz(d):
            return {k: polys.setdefault(tuple(v), len(polys)) for k, v in d.items()}
        out[pt] = ({c: frz(v) for c, v in corner.items()}, frz(whole), frz(cut))
    return out, tuple(sorted(polys, key=polys.get))


def _eval(p, x):
    return p[0] + x * (p[1] + x * (p[2] + x * p[3]))


def aggregate(N, numeric=Fraction):
    """
    Level-by-level aggregated statistics for every type, n = 0..N:
      hist[n] = (corner, dbar) with corner[type][c] the descendant distribution
      of corner c and dbar[type][k] the expected number of non-corner vertices
      with k neighbouring descendants.
    `numeric=float` gives a fast floating-point version.
    """
    types, _ = type_system()
    grouped, polys = _grouped()
    zero = numeric(0)
    lv = {pt: level0(pt) for pt in types}
    cor = {pt: {c: [numeric(x) for x in lv[pt][c]] for c in CORNERS} for pt in types}
    dbar = {pt: [zero] * KMAX for pt in types}
    hist = [(cor, dbar)]
    for n in range(1, N + 1):
        x = Fraction(1, 3 ** n)
        vals = [_eval(p, x) for p in polys]
        wt = {s: [numeric(v / shape_fraction(s, n)) for v in vals] for s in SHAPES}
        convs = {}
        ncor, ndbar = {}, {}
        for pt in types:
            gc, gw, gx = grouped[pt]
            w_of = wt[pt[0]]
            ac = {c: [zero] * KMAX for c in CORNERS}
            ad = [zero] * KMAX
            for c in CORNERS:
                acc = ac[c]
                for t, p in gc[c].items():
                    w = w_of[p]
                    if w:
                        src = cor[t][c]
                        for k in range(KMAX):
                            acc[k] += w * src[k]
            for t, p in gw.items():
                w = w_of[p]
                if w:
                    src = dbar[t]
                    for k in range(KMAX):
                        ad[k] += w * src[k]
            for key, p in gx.items():
                w = w_of[p]
                if w:
                    cv = convs.get(key)
                    if cv is None:
                        t1, c1, t2, c2 = key
                        cv = convs[key] = conv(cor[t1][c1], cor[t2][c2])
                    for k in range(KMAX):
                        ad[k] += w * cv[k]
            ncor[pt] = ac
            ndbar[pt] = ad
        cor, dbar = ncor, ndbar
        hist.append((cor, dbar))
    return hist


def mix_aggregate(hist, n, cls, roots=None, numeric=Fraction):
    """(dbar, corner distributions) of the uniform forest of class `cls` on SG_n."""
    shapes, comps = ensemble(cls, roots)
    tot = sum(shape_fraction(s, n) for s in shapes)
    cor, dbar = hist[n]
    D = [0] * KMAX
    C = {c: [0] * KMAX for c in CORNERS}
    for s in shapes:
        w = numeric(shape_fraction(s, n) / tot)
        if not w:
            continue
        pt = make_type(s, comps)
        for k in range(KMAX):
            D[k] += w * dbar[pt][k]
            for c in CORNERS:
                C[c][k] += w * cor[pt][c][k]
    return D, C


# ------------------------------------------------------------ per-vertex tables

@lru_cache(maxsize=None)
def _embedding(n):
    """
    Index bookkeeping for assembling SG_n from three copies of SG_{n-1}:
    for each copy, (child indices, parent indices) of the non-corner vertices
    of the copy; corner positions; cut-point positions.
    """
    g0, g1 = build_graph(n - 1), build_graph(n)
    corners0 = set(g0.corners)
    copies = {}
    for d in COPIES:
        src, dst = [], []
        for i, v in enumerate(g0.vertices):
            if v in corners0:
                continue
            src.append(i)
            dst.append(g1.index[VertexAddr(*canonical(d + v.word, v.corner))])
        copies[d] = (np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64))
    corner_pos = {c: (g0.index[corner_addr(n - 1, c)], g1.index[corner_addr(n, c)]) for c in CORNERS}
    cuts = []
    for (d1, c1), (d2, c2) in CUT_PAIRS:
        v = VertexAddr(*canonical(d1 + LETTER[c1] * (n - 1), c1))
        cuts.append((d1, c1, d2, c2, g0.index[corner_addr(n - 1, c1)],
                     g0.index[corner_addr(n - 1, c2)], g1.index[v]))
    return copies, corner_pos, cuts


@lru_cache(maxsize=4)
def vertex_tables(N, numeric=mpq):
    """
    Per-vertex descendant distributions for each type on SG_N.  Returns a dict
    type -> array of shape (|V_N|, 5), aligned with build_graph(N).vertices.
    `numeric` is mpq (exact, default) or float.  Results are cached: do not
    modify the returned arrays.
    """
    check_level(N, default=8)
    types, trans = type_system()
    dtype = float if numeric is float else object
    g0 = build_graph(0)
    tab = {}
    for pt in types:
        arr = np.zeros((3, KMAX), dtype=dtype)
        if dtype is object:
            arr[:] = numeric(0)
        for c, dist in level0(pt).items():
            arr[g0.index[corner_addr(0, c)]] = [numeric(x) for x in dist]
        tab[pt] = arr
    for n in range(1, N + 1):
        copies, corner_pos, cuts = _embedding(n)
        f_child = {s: shape_fraction(s, n - 1) for s in SHAPES}
        size = len(build_graph(n).vertices)
        new = {}
        for pt in types:
            fp = shape_fraction(pt[0], n)
            # collect weights per (copy, child type) and per cut pair of child types
            wcopy = {d: defaultdict(Fraction) for d in COPIES}
            wcut = [defaultdict(Fraction) for _ in cuts]
            for combo, ch, w in trans[pt]:
                for s in combo:
                    w *= f_child[s]
                if not w:
                    continue
                w /= fp
                for d, t in zip(COPIES, ch):
                    wcopy[d][t] += w
                for m, (d1, _, d2, *_rest) in enumerate(cuts):
                    wcut[m][(ch[COPIES.index(d1)], ch[COPIES.index(d2)])] += w
            out = np.zeros((size, KMAX), dtype=dtype)
            if dtype is object:
                out[:] = numeric(0)
            for d in COPIES:
                src, dst = copies[d]
                acc = None
                for t, w in wcopy[d].items():
                    term = tab[t][src] * numeric(w)
                    acc = term if acc is None else acc + term
                if acc is not None:
                    out[dst] = acc
            for c in CORNERS:
                i0, i1 = corner_pos[c]
                d = LETTER[c]
                acc = out[i1] * 0
                for t, w in wcopy[d].items():
                    acc = acc + tab[t][i0] * numeric(w)
                out[i1] = acc
            for m, (d1, c1, d2, c2, j1, j2, pos) in enumerate(cuts):
                acc = [numeric(0)] * KMAX
                for (t1, t2), w in wcut[m].items():
                    cv = conv(list(tab[t1][j1]), list(tab[t2][j2]))
                    for k in range(KMAX):
                        acc[k] += numeric(w) * cv[k]
                out[pos] = acc
            new[pt] = out
        tab = new
    return tab


def to_fraction(x):
    return Fraction(int(x.numerator), int(x.denominator))


def ensemble_table(N, cls, roots=None, exact=True):
    """
    Per-vertex descendant distributions (|V_N| x 5 array) of the uniform
    class-`cls` forest: Fractions if `exact`, floats otherwise.
    """
    shapes, comps = ensemble(cls, roots)
    numeric = mpq if exact else float
    tab = vertex_tables(N, numeric)
    tot = sum(shape_fraction(s, N) for s in shapes)
    acc = None
    for s in shapes:
        w = shape_fraction(s, N) / tot
        if not w:
            continue
        term = tab[make_type(s, comps)] * numeric(w)
        acc = term if acc is None else acc + term
    if exact:
        acc = np.vectorize(to_fraction, otypes=[object])(acc)
    return acc
