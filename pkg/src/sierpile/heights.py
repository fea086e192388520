"""
Distributions of the number of neighbouring descendants, per vertex and per
forest class, and their conversion to sandpile height probabilities.

Two methods are offered wherever they differ:

``method="exact"`` (default)
    The type-tracking transfer recursion of :mod:`sierpile.transfer`.  Agrees
    with exhaustive enumeration at every vertex.

``method="local"``
    The classical scheme that treats the descendant count of a vertex as a
    function of the sub-forest in its own copy only: the 2x2 corner recursion,
    the 3x3 root recursion, cut-point convolutions and the copy-wise
    combination rules.  Corner probabilities are exact; root, cut-point and
    interior values are not (they differ from enumeration from level 1 or 2 on),
    but this method reproduces the classical closed forms and is kept for that
    purpose.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .census import CLASSES
from .errors import DomainError, check_level
from .gasket import CORNERS, VertexAddr, build_graph, corner_addr, cut_addr, reflect, rotate
from . import transfer

F = Fraction
KMAX = transfer.KMAX


@dataclass(frozen=True)
class DescDist:
    """P(des = k), k = 0..4, exact rationals."""
    probs: tuple

    def __post_init__(self):
        p = tuple(F(x) for x in self.probs)
        if len(p) < KMAX:
            p = p + (F(0),) * (KMAX - len(p))
        if len(p) != KMAX:
            raise DomainError("a DescDist has entries for k = 0..4")
        object.__setattr__(self, "probs", p)

    def __getitem__(self, k):
        return self.probs[k] if 0 <= k < KMAX else F(0)

    def is_valid(self, degree=4):
        return (all(x >= 0 for x in self.probs) and sum(self.probs) == 1
                and all(x == 0 for x in self.probs[degree + 1:]))

    def mean(self):
        return sum(k * x for k, x in enumerate(self.probs))

    def as_strings(self):
        return [str(x) for x in self.probs]


@dataclass(frozen=True)
class HeightDist:
    """P(height = k), k = 0..deg-1."""
    probs: tuple

    def mean(self):
        return sum(k * x for k, x in enumerate(self.probs))

    def as_strings(self):
        return [str(x) for x in self.probs]


@dataclass
class VertexProbMap:
    n: int
    cls: str
    table: dict           # VertexAddr -> DescDist, non-root vertices
    method: str = "exact"
    roots: tuple = ()

    def __getitem__(self, v):
        if isinstance(v, str):
            v = VertexAddr.parse(v)
        try:
            return self.table[v]
        except KeyError:
            raise DomainError(f"{v} is a root or not a vertex of SG_{self.n}")

    def to_json(self):
        return {"level": self.n, "class": self.cls, "method": self.method, "roots": list(self.roots),
                "table": {str(v): d.as_strings() for v, d in sorted(self.table.items())}}

    def heatmap_rows(self):
        """(x, y, k, probability) rows in display coordinates."""
        from .gasket import display_xy
        rows = []
        for v, d in sorted(self.table.items()):
            x, y = display_xy(v)
            for k in range(KMAX):
                rows.append((x, y, k, d[k]))
        return rows


def desc_to_height(d, degree):
    """P(height = k) = sum_{j <= k} P(des = j) / (degree - j)."""
    if not isinstance(d, DescDist):
        d = DescDist(tuple(d))
    if any(d[k] for k in range(degree + 1, KMAX)) or d[degree]:
        raise DomainError("a non-root vertex has at most degree - 1 descendants")
    out = []
    acc = F(0)
    for k in range(degree):
        acc += d[k] / (degree - k)
        out.append(acc)
    return HeightDist(tuple(out))


# ------------------------------------------------------------ corners

BASE = ((F(2, 3), F(1, 3)), (F(3, 5), F(2, 5)))


def matrix_power_2x2(n, closed=True):
    """[[2/3, 1/3], [3/5, 2/5]]^n, by the diagonalized closed form or by repeated products."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if closed:
        s = F(1, 14 * 15 ** n)
        return ((s * (3 ** (n + 2) * 5 ** n + 5), s * (-5 * (1 - 15 ** n))),
                (s * (-9 * (1 - 15 ** n)), s * (3 ** n * 5 ** (n + 1) + 9)))
    m = ((F(1), F(0)), (F(0), F(1)))
    for _ in range(n):
        m = tuple(tuple(sum(m[i][k] * BASE[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return m


def corner_probs(n, method="recursion"):
    """
    (p1, p2): descendant laws of a non-root corner in a spanning tree (p1) and
    of the non-root corner of the two-corner component in a two-component
    forest (p2).  `method` is "recursion" or "closed".
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if method == "recursion":
        p1, p2 = (F(2, 3), F(1, 3)), (F(1), F(0))
        for _ in range(n):
            p1, p2 = (tuple(F(2, 3) * a + F(1, 3) * b for a, b in zip(p1, p2)),
                      tuple(F(3, 5) * a + F(2, 5) * b for a, b in zip(p1, p2)))
    elif method == "closed":
        q = F(1, 15 ** n)
        a = F(11, 14) - F(5, 42) * q
        b = F(11, 14) + F(3, 14) * q
        p1, p2 = (a, 1 - a), (b, 1 - b)
    else:
        raise DomainError(f"unknown method {method!r}")
    return DescDist(p1), DescDist(p2)


# ------------------------------------------------------------ roots

def root_probs(n, method="recursion"):
    """
    (eta2, eta2bar, eta3) of the classical root recursion: eta2 for the root
    (right corner) of the two-corner component of an S2 forest, eta2bar for
    the isolated top corner, eta3 for a corner of a three-component forest.

    method: "recursion" | "closed" (the tabulated closed forms; the eta3 row
    uses the signs that actually solve the recursion) | "exact" (the true laws,
    from the transfer recursion).
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if method == "recursion":
        e2, eb, e3 = (F(0), F(1), F(0)), (F(1), F(0), F(0)), (F(1), F(0), F(0))
        d = (F(0), F(0), F(1))
        for _ in range(n):
            e2, eb, e3 = (tuple(F(12, 30) * e2[k] + F(18, 30) * d[k] for k in range(3)),
                          tuple(F(6, 30) * e2[k] + F(12, 30) * eb[k] + F(9, 30) * e3[k] + F(3, 30) * d[k]
                                for k in range(3)),
                          tuple(F(14, 50) * e2[k] + F(12, 50) * eb[k] + F(12, 50) * e3[k] + F(12, 50) * d[k]
                                for k in range(3)))
        return DescDist(e2), DescDist(eb), DescDist(e3)
    if method == "closed":
        return root_probs_closed(n)
    if method == "exact":
        hist = _hist(n)
        _, cs = transfer.mix_aggregate(hist, n, "S2", ("t", "r"))
        _, cr = transfer.mix_aggregate(hist, n, "R")
        return DescDist(cs["r"]), DescDist(cs["t"]), DescDist(cr["t"])
    raise DomainError(f"unknown method {method!r}")


def root_probs_closed(n, printed=False):
    """
    Tabulated closed forms in a = (3/5)^n, b = (2/5)^n, c = (1/25)^n.
    `printed=True` uses the eta3 row exactly as usually printed, whose (1/25)^n
    terms carry the wrong signs.
    """
    a, b, c = F(3, 5) ** n, F(2, 5) ** n, F(1, 25) ** n
    e2 = (F(0), b, 1 - b)
    eb = (F(33, 28) * a - F(5, 28) * c,
          F(39, 28) * a - F(29, 18) * b + F(55, 252) * c,
          1 - F(18, 7) * a + F(29, 18) * b - F(5, 126) * c)
    s = -1 if printed else 1
    e3 = (F(11, 14) * a + s * F(3, 14) * c,
          F(39, 42) * a - F(28, 42) * b - s * F(11, 42) * c,
          1 - F(12, 7) * a + F(2, 3) * b + s * F(1, 21) * c)
    return DescDist(e2), DescDist(eb), DescDist(e3)


# ------------------------------------------------------------ cut points

def _g(p, k):
    return p[k] if 0 <= k < len(p) else F(0)


def _cv(a, b, k):
    return sum(_g(a, i) * _g(b, k - i) for i in range(k + 1))


def local_cut_laws(n):
    """
    The six classical cut-point laws at level n >= 1, keyed
      Tb (tree, bottom cut), Tl (tree, side cuts), Sb, Sr, Sl (S2 forest:
      bottom, right-side, left-side cut), Rb (three components, any cut).
    """
    if n < 1:
        raise DomainError("cut points exist only for level >= 1")
    p1, p2 = (d.probs for d in corner_probs(n - 1))
    e2, eb, e3 = (d.probs for d in root_probs(n - 1))
    K = range(KMAX)
    g, cv = _g, _cv
    out = {
        "Tb": [F(2, 3) * sum(g(p1, i) * (g(e2, k - i) + g(eb, k - i)) / 2 for i in range(k + 1))
               + F(1, 3) * g(p1, k - 2) for k in K],
        "Tl": [F(1, 6) * (sum(2 * g(p1, i) * g(eb, k - i) + g(p1, i) * g(e2, k - i) for i in range(k + 1))
                          + 2 * g(p1, k - 2) + g(p2, k - 2)) for k in K],
        "Sb": [F(1, 10) * (sum(2 * g(p1, i) * g(eb, k - i) + 2 * g(p1, i) * g(e2, k - i)
                               + g(p2, i) * g(e2, k - i) for i in range(k + 1)) + 2 * g(p2, k - 2))
               + F(3, 10) * g(p1, k - 2) for k in K],
        "Sr": [F(1, 10) * sum(2 * g(p1, i) * g(eb, k - i) + 2 * g(p1, i) * g(e2, k - i)
                              + g(p2, i) * g(e2, k - i) + 2 * g(p2, i) * g(eb, k - i) for i in range(k + 1))
               + F(3, 10) * cv(p1, e3, k) for k in K],
        "Sl": [F(1, 10) * (sum(2 * g(p1, i) * g(eb, k - i) + g(p1, i) * g(e2, k - i)
                               + g(p2, i) * g(e2, k - i) + 2 * g(p2, i) * g(eb, k - i) for i in range(k + 1))
                           + g(p2, k - 2))
               + F(3, 10) * cv(p1, e3, k) for k in K],
        "Rb": [F(3, 50) * sum(4 * g(p1, i) * g(e3, k - i) + 2 * g(p1, i) * g(eb, k - i)
                              + 4 * g(p2, i) * g(e3, k - i) + 2 * g(p1, i) * g(e2, k - i) for i in range(k + 1))
               + F(1, 50) * sum(8 * g(p2, i) * g(eb, k - i) + 6 * g(p2, i) * g(e2, k - i) for i in range(k + 1))
               for k in K],
    }
    return {key: DescDist(v) for key, v in out.items()}


def _P(s):
    return tuple(tuple(F(x) for x in row.split()) for row in s.strip().split("\n"))


# coefficients of P(des = k), k = 0..3, in the basis m_n below
CUT_MATRICES = {
    "Tb": _P("""0 605/1176 0 0 -1375/588 0 3125/1176
0 110/147 -605/1512 0 2375/2646 1375/1512 -15625/2646
11/14 -375/392 55/189 -25/14 5375/1323 -1375/756 40625/10584
3/14 -15/49 55/504 25/14 -4625/1764 1375/1512 -3125/5292"""),
    "Tl": _P("""0 605/1176 0 0 -1375/588 0 3125/1176
0 110/147 -275/378 0 2375/2646 625/378 -15625/2646
11/14 -375/392 100/189 -20/21 5375/1323 -625/189 40625/10584
3/14 -15/49 25/126 20/21 -4625/1764 625/378 -3125/5292"""),
    "Sb": _P("""0 121/392 0 0 -275/196 0 625/392
0 22/49 -11/252 0 475/882 85/63 -3125/882
11/14 -225/392 2/63 -2/7 1075/441 -170/63 8125/3528
3/14 -9/49 1/84 2/7 -925/588 85/63 -625/1764"""),
    "Sr": _P("""0 363/392 0 0 -110/392 0 -1625/392
0 66/49 -77/72 0 95/882 -25/72 8125/882
11/14 -675/392 7/9 -2/7 215/441 25/36 -21125/3528
3/14 -27/49 7/24 2/7 -185/588 -25/72 1625/1764"""),
    "Sl": _P("""0 363/392 0 0 -110/392 0 -1625/392
0 66/49 -319/252 0 95/882 25/252 8125/882
11/14 -675/392 58/63 3/14 215/441 -25/126 -21125/3528
3/14 -27/49 29/84 -3/14 -185/588 25/252 1625/1764"""),
    "Rb": _P("""0 363/392 0 0 814/392 0 195/392
0 66/49 -2629/2520 0 -703/882 -227/168 -325/294
11/14 -675/392 239/315 57/70 -1591/441 227/84 845/1176
3/14 -27/49 239/840 -57/70 1369/588 -227/168 -65/588"""),
}


def m_basis(n):
    """m_n = (1, (3/5)^n, (2/5)^n, (1/15)^n, (1/25)^n, (2/75)^n, (1/375)^n)."""
    return tuple(F(b) ** n for b in (1, F(3, 5), F(2, 5), F(1, 15), F(1, 25), F(2, 75), F(1, 375)))


def cut_laws_closed(n):
    m = m_basis(n)
    return {key: DescDist(tuple(sum(a * b for a, b in zip(row, m)) for row in mat))
            for key, mat in CUT_MATRICES.items()}


# which classical law sits at which cut point (named by the opposite corner)
CUT_KEYS = {
    "T": {"t": "Tb", "l": "Tl", "r": "Tl"},
    "S2": {"t": "Sb", "l": "Sr", "r": "Sl"},
    "R": {"t": "Rb", "l": "Rb", "r": "Rb"},
}


def cutpoint_probs(n, cls, method="exact", roots=None):
    """
    {cut point address: DescDist} for class `cls` on SG_n (n >= 1).
    method: "exact" | "local" (convolution formulas) | "closed" (the m_n
    coefficient matrices; agrees with "local").
    """
    if n < 1:
        raise DomainError("cut points exist only for level >= 1")
    if cls not in CLASSES:
        raise DomainError(f"unknown forest class {cls!r}")
    if method == "exact":
        tab = vertex_probs(n, cls, "exact", roots)
        return {cut_addr(n, c): tab[cut_addr(n, c)] for c in CORNERS}
    if method not in ("local", "closed"):
        raise DomainError(f"unknown method {method!r}")
    if roots is not None:
        raise DomainError("the local cut-point formulas use the default rootings only")
    laws = local_cut_laws(n) if method == "local" else cut_laws_closed(n)
    g = build_graph(n)
    if cls in ("S1", "S3"):
        base = {cut_addr(n, c): laws[k] for c, k in CUT_KEYS["S2"].items()}
        times = 1 if cls == "S1" else 2
        return {v: base[rotate(g, v, times)] for v in (cut_addr(n, c) for c in CORNERS)}
    return {cut_addr(n, c): laws[k] for c, k in CUT_KEYS[cls].items()}


# ------------------------------------------------------------ whole graph

@lru_cache(maxsize=4)
def _hist(n):
    return transfer.aggregate(n)


def _root_corners(cls, roots):
    shapes, comps = transfer.ensemble(cls, roots)
    return tuple(sorted(e for _, e, _ in comps))


def vertex_probs(n, cls, method="exact", roots=None):
    """
    VertexProbMap of descendant laws for every non-root vertex of SG_n.
    `roots` (exact method only) picks one root corner per component; the
    defaults are top for trees, S2 = {t} | {l, r} rooted at r with S1/S3 the
    rotated images, and the three corners for R.
    """
    check_level(n, default=8)
    if cls not in CLASSES:
        raise DomainError(f"unknown forest class {cls!r}")
    if method == "exact":
        rts = _root_corners(cls, roots)
        g = build_graph(n)
        arr = transfer.ensemble_table(n, cls, roots)
        skip = {corner_addr(n, c) for c in rts}
        table = {v: DescDist(tuple(arr[i])) for i, v in enumerate(g.vertices) if v not in skip}
        return VertexProbMap(n, cls, table, "exact", rts)
    if method == "local":
        if roots is not None:
            raise DomainError("the local method uses the default rootings only")
        if n < 1:
            raise DomainError("the local method starts at level 1")
        maps = _local_maps(n)
        rts = _root_corners(cls, None)
        g = build_graph(n)
        if cls in ("S1", "S3"):
            p2 = maps["S2"]
            times = 1 if cls == "S1" else 2
            table = {v: p2[rotate(g, v, times)] for v in g.vertices
                     if rotate(g, v, times) in p2}
        else:
            table = dict(maps[cls])
        table = {v: d for v, d in table.items() if v not in {corner_addr(n, c) for c in rts}}
        return VertexProbMap(n, cls, table, "local", rts)
    raise DomainError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def _local_maps(n):
    """
    The copy-wise combination rules: maps "T", "S2", "R" from every vertex of
    SG_n except the roots of the respective class.  Compositions p o g mean
    v -> p(g(v)); all maps on the right-hand side live on level n - 1.
    """
    g = build_graph(n)
    p1c, p2c = corner_probs(n)
    cuts = local_cut_laws(n)
    bnd = {
        "T": {corner_addr(n, "l"): p1c, corner_addr(n, "r"): p1c},
        "S2": {corner_addr(n, "l"): p2c},
        "R": {},
    }
    for cls in ("T", "S2", "R"):
        for c, key in CUT_KEYS[cls].items():
            bnd[cls][cut_addr(n, c)] = cuts[key]
    if n == 1:
        return bnd
    prev = _local_maps(n - 1)
    h = build_graph(n - 1)
    P1, P2, P3 = prev["T"], prev["S2"], prev["R"]

    def r(u):
        return rotate(h, u)

    def ri(u):
        return rotate(h, u, 2)

    def m(i):
        return lambda u: reflect(h, i, u)

    def mix(terms, den):
        def f(u):
            acc = [F(0)] * KMAX
            for w, p, gmap in terms:
                d = p[gmap(u)]
                for k in range(KMAX):
                    acc[k] += w * d[k]
            return DescDist(tuple(x / den for x in acc))
        return f

    ident = lambda u: u  # noqa: E731
    rules = {
        "T": {
            "L": mix([(3, P1, ident), (1, P1, ri), (1, P2, ident), (1, P2, ri)], 6),
            "R": mix([(3, P1, ident), (1, P1, r), (1, P2, r), (1, P2, m(2))], 6),
            "U": mix([(4, P1, ident), (1, P2, r), (1, P2, ri)], 6),
        },
        "S2": {
            "L": mix([(1, P1, ident), (5, P1, ri), (3, P2, ident), (1, P2, ri)], 10),
            "R": mix([(6, P1, ri), (3, P2, ident), (1, P2, lambda u: r(m(1)(u)))], 10),
            "U": mix([(1, P1, ident), (3, P2, ident), (1, P2, ri), (1, P2, r), (1, P2, m(2)),
                      (3, P3, ident)], 10),
        },
    }
    p3L = mix([(12, P3, ident), (12, P1, r), (7, P2, m(2)), (7, P2, lambda u: ri(m(3)(u))),
               (6, P2, lambda u: r(m(1)(u))), (6, P2, r)], 50)
    out = {k: dict(v) for k, v in bnd.items()}
    border = set(g.corners) | set(g.cut_points)
    for v in g.vertices:
        if v in border:
            continue
        d = v.word[0]
        u = VertexAddr.make(v.word[1:], v.corner)
        for cls in ("T", "S2"):
            out[cls][v] = rules[cls][d](u)
        # p3 on the R and U copies is p3 on the L copy composed with a rotation of SG_n
        w = v if d == "L" else rotate(g, v, 1 if d == "R" else 2)
        out["R"][v] = p3L(VertexAddr.make(w.word[1:], w.corner))
    return out
