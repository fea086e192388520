"""
Expected numbers of vertices with a given number of neighbouring descendants
(D-bar), expected height counts (W-bar), the looping constant and their
density limits.

Class order in all 5-vectors: (T, S1, S2, S3, R).

As in :mod:`sierpile.heights`, ``method="exact"`` (default) uses the transfer
recursion and ``method="local"`` the classical scheme
    Dbar_n = (M / 150) Dbar_{n-1} + e_n,
with e_n the summed classical cut-point laws.  The classical scheme is
internally consistent (its closed forms and eigen-structure check out) but its
inputs are not the true cut-point laws, so its limits differ from the exact ones
except for the k = 0 density.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2

from . import transfer
from .census import CLASSES
from .errors import DomainError, check_level
from .gasket import CORNERS, parse_sinks
from .heights import corner_probs, desc_to_height, local_cut_laws, root_probs
from .recurrence import geometric_coefficient

F = Fraction

M = ((300, 50, 50, 50, 0),
     (195, 150, 30, 30, 45),
     (195, 30, 150, 30, 45),
     (195, 30, 30, 150, 45),
     (108, 78, 78, 78, 108))

EIGENPAIRS = (
    (450, (1, 1, 1, 1, 1)),
    (150, (-1, 1, 1, 1, 3)),
    (120, (0, -1, 0, 1, 0)),
    (120, (0, -1, 1, 0, 0)),
    (18, (125, -235, -235, -235, 461)),
)

# sink choice -> (class, roots) ensembles averaged with equal weight
SINK_ENSEMBLES = {
    ("t",): [("T", ("t",))],
    ("r", "t"): [("S2", ("t", "r")), ("S3", ("r", "t"))],
    ("l", "r", "t"): [("R", ("l", "r", "t"))],
}

LIMIT_TERMS = 21          # n = 0..20; recurrences found have order <= 10


def matvec(m, v):
    return tuple(sum(F(a) * b for a, b in zip(row, v)) for row in m)


def check_eigenpairs():
    return all(matvec(M, v) == tuple(F(lam * x) for x in v) for lam, v in EIGENPAIRS)


def size(n):
    """|V_n| = (3/2)(3^n + 1)."""
    return 3 * (3 ** n + 1) // 2


def _sink_key(sink):
    s = parse_sinks(sink)
    if s not in SINK_ENSEMBLES:
        raise DomainError(f"sink choice {sink!r} must be one (t), two (r, t) or three corners")
    return s


# ------------------------------------------------------------ exact route

@lru_cache(maxsize=4)
def _exact_hist(N):
    return transfer.aggregate(N, gmpy2.mpq)


def _hist_for(n):
    # one shared history long enough for limit extraction
    return _exact_hist(max(n, LIMIT_TERMS - 1))


def _q(x):
    return F(int(x.numerator), int(x.denominator))


def _exact_stats(n, ensembles):
    """Averaged (dbar[0..4], corner laws) over a list of (class, roots) ensembles."""
    hist = _hist_for(n)
    D = [F(0)] * 5
    C = {c: [F(0)] * 5 for c in CORNERS}
    w = F(1, len(ensembles))
    for cls, roots in ensembles:
        d, cc = transfer.mix_aggregate(hist, n, cls, roots, numeric=gmpy2.mpq)
        for k in range(5):
            D[k] += w * _q(d[k])
            for c in CORNERS:
                C[c][k] += w * _q(cc[c][k])
    return D, C


# ------------------------------------------------------------ local route

def local_e(n):
    """e_n(class, i): summed classical cut-point laws, as 5 class vectors over i = 0..4."""
    c = local_cut_laws(n)
    T = [c["Tb"][i] + 2 * c["Tl"][i] for i in range(5)]
    S = [c["Sb"][i] + c["Sr"][i] + c["Sl"][i] for i in range(5)]
    R = [3 * c["Rb"][i] for i in range(5)]
    return [T, S, S, S, R]


@lru_cache(maxsize=None)
def _local_dbar(n):
    """Local-route D-bar: tuple over classes of tuples over i."""
    if n == 0:
        return tuple((F(0),) * 5 for _ in CLASSES)
    prev = _local_dbar(n - 1)
    e = local_e(n)
    out = []
    for a in range(5):
        out.append(tuple(sum(F(M[a][b], 150) * prev[b][i] for b in range(5)) + e[a][i] for i in range(5)))
    return tuple(out)


def local_dbar_telescoped(n, i):
    """sum_{j=0}^{n-1} (M/150)^j e_{n-j}(., i)."""
    acc = (F(0),) * 5
    for j in range(n):
        v = tuple(e[i] for e in local_e(n - j))
        for _ in range(j):
            v = tuple(x / 150 for x in matvec(M, v))
        acc = tuple(a + b for a, b in zip(acc, v))
    return acc


# ------------------------------------------------------------ public API

def expected_desc(n, i, method="exact"):
    """
    Dbar_n^i per class (T, S1, S2, S3, R): expected number of non-corner
    vertices of SG_n with i neighbouring descendants.
    """
    check_level(n, default=40, what="level")
    if not 0 <= i <= 4:
        raise DomainError("i ranges over 0..4")
    if method == "local":
        return tuple(row[i] for row in _local_dbar(n))
    if method != "exact":
        raise DomainError(f"unknown method {method!r}")
    return tuple(_exact_stats(n, [(cls, None)])[0][i] for cls in CLASSES)


def expected_desc_total(n, method="exact"):
    """Dbar_n = sum_i i Dbar_n^i per class."""
    vecs = [expected_desc(n, i, method) for i in range(5)]
    return tuple(sum(i * vecs[i][a] for i in range(5)) for a in range(5))


@dataclass
class HeightReport:
    n: int
    sink: tuple
    w: tuple              # expected number of non-sink vertices with height 0..3
    total: Fraction       # expected total number of chips
    include_corners: bool
    method: str

    def as_dict(self):
        return {"level": self.n, "sinks": list(self.sink), "method": self.method,
                "include_corners": self.include_corners,
                "W": [str(x) for x in self.w], "W_total": str(self.total)}


def _stats(n, sink, method):
    ens = SINK_ENSEMBLES[sink]
    if method == "exact":
        return _exact_stats(n, ens)
    if method != "local":
        raise DomainError(f"unknown method {method!r}")
    D = [F(0)] * 5
    row = {"T": 0, "S1": 1, "S2": 2, "S3": 3, "R": 4}
    for cls, _ in ens:
        for k in range(5):
            D[k] += _local_dbar(n)[row[cls]][k] / len(ens)
    p1, p2 = corner_probs(n)
    e2, eb, e3 = root_probs(n)
    if sink == ("t",):
        C = {"l": p1.probs, "r": p1.probs, "t": _TREE_ROOT}
    elif sink == ("r", "t"):
        C = {"l": p2.probs, "r": _avg(e2.probs, eb.probs), "t": _avg(e2.probs, eb.probs)}
    else:
        C = {c: e3.probs for c in CORNERS}
    return D, C


def _avg(a, b):
    return tuple((x + y) / 2 for x, y in zip(a, b))


# the root of a spanning tree has both neighbours as descendants
_TREE_ROOT = (F(0), F(0), F(1), F(0), F(0))


def expected_heights(n, sink="one", method="exact", include_corners=True):
    """
    Expected number of vertices at each height 0..3 (and expected total chips)
    under the uniform recurrent sandpile on SG_n with the given sinks.
    include_corners=False counts non-corner vertices only.
    """
    check_level(n, default=40)
    if n < 1:
        raise DomainError("level must be >= 1")
    sink = _sink_key(sink)
    D, C = _stats(n, sink, method)
    w = [F(0)] * 4
    for i in range(4):
        w[i] = sum(D[j] / (4 - j) for j in range(i + 1))
    if include_corners:
        for c in CORNERS:
            if c in sink:
                continue
            h = desc_to_height(tuple(C[c][:3]), 2)
            for k, p in enumerate(h.probs):
                w[k] += p
    total = sum(k * x for k, x in enumerate(w))
    return HeightReport(n, sink, tuple(w), total, include_corners, method)


def looping_constant(n, method="exact"):
    """
    Average over all vertices of SG_n (sinks included) of the expected number
    of neighbouring descendants in the uniform spanning forest rooted at the
    right and top corners; equal to the average number of neighbours of the
    start visited by the loop-erased walk to those corners.
    """
    check_level(n, default=40)
    D, C = _stats(n, ("r", "t"), method)
    tot = sum(k * x for k, x in enumerate(D))
    tot += sum(k * C[c][k] for c in CORNERS for k in range(len(C[c])))
    return tot / size(n)


def density_limit(seq):
    """lim s_n / |V_n| for a sequence s_0, s_1, ... with a simple 3^n term."""
    return geometric_coefficient(seq, 3) * F(2, 3)


@dataclass
class LimitReport:
    w: tuple                   # limits of W_n^i / |V_n|, i = 0..3
    wbar: Fraction             # limit of mean height
    zeta: Fraction             # looping constant (limit)
    dbar: tuple                # limits of Dbar_n^i / |V_n|, i = 0..4
    dbar_total: Fraction       # limit of Dbar_n / |V_n|
    sink: tuple = ("t",)
    method: str = "exact"
    per_class_total: dict = field(default_factory=dict)

    def as_dict(self):
        return {"sink": list(self.sink), "method": self.method,
                "w": [str(x) for x in self.w], "mean_height": str(self.wbar),
                "zeta": str(self.zeta), "dbar": [str(x) for x in self.dbar],
                "dbar_total": str(self.dbar_total),
                "per_class_total": {k: str(v) for k, v in self.per_class_total.items()}}


@lru_cache(maxsize=None)
def limit_report(sink="one", method="exact"):
    """Density limits, extracted exactly from the 3^n coefficients of the closed forms."""
    sink = _sink_key(sink)
    N = LIMIT_TERMS
    seqs = [_stats(n, sink, method)[0] for n in range(N)]
    dl = tuple(density_limit([s[k] for s in seqs]) for k in range(5))
    w = tuple(sum(dl[j] / (4 - j) for j in range(i + 1)) for i in range(4))
    wbar = sum(i * x for i, x in enumerate(w))
    zeta = looping_limit(method)
    per_class = {}
    for cls in CLASSES:
        if method == "exact":
            s = [sum(k * x for k, x in enumerate(_exact_stats(n, [(cls, None)])[0])) for n in range(N)]
        else:
            row = CLASSES.index(cls)
            s = [sum(k * x for k, x in enumerate(_local_dbar(n)[row])) for n in range(N)]
        per_class[cls] = density_limit(s)
    return LimitReport(w, wbar, zeta, dl, sum(k * x for k, x in enumerate(dl)), sink, method, per_class)


@lru_cache(maxsize=None)
def looping_limit(method="exact"):
    """lim looping_constant(n)."""
    return density_limit([looping_constant(n, method) * size(n) for n in range(LIMIT_TERMS)])


# ------------------------------------------------------------ tabulated closed forms

def _row(s):
    return tuple(F(x) for x in s.split())


DBAR_BASES = {
    0: (F(3), F(1), F(3, 5), F(3, 25), F(1, 25), F(1, 375)),
    1: (F(3), F(1), F(3, 5), F(2, 5), F(3, 25), F(1, 25), F(2, 75), F(1, 375)),
    2: (F(3), F(1), F(3, 5), F(2, 5), F(1, 15), F(3, 25), F(1, 25), F(2, 75), F(1, 375)),
    "total": (F(3), F(1), F(3, 5), F(2, 5), F(3, 25), F(1, 15), F(1, 25)),
}

# rows per class (T, S1, S2, S3, R), as usually printed
DBAR_PRINTED = {
    0: [_row("10957/26976 -9567/16456 0 2875/11616 0 -334375/4624136")]
    + [_row("10957/26976 9567/16456 -363/392 -5405/11616 55/196 13954125/113291332")] * 3
    + [_row("10957/26976 28701/16456 -363/196 10603/11616 -99/98 -45504405/226582664")],
    1: [_row("22747599/58652568 -2120933/5405796 0 2035/22932 -101875/426888 0 -175375/28716156 "
             "1671875/10404306")]
    + [_row("22737599/58652568 2120933/5405796 -66/49 1529/2548 191525/426888 -95/882 -960865/9572052 "
            "-23256875/84968499")] * 3
    + [_row("22737599/58652568 2120933/1801932 -132/49 6017/7644 -375715/426888 19/49 1238333/3190684 "
            "25280225/56645666")],
    2: [_row("33273907/58652568 -8427329/18920286 0 -370/5733 5/21 -43375/213444 0 175375/14358078 "
             "-4346875/41617224")]
    + [_row("33273907/58652568 -18085244/9460143 675/392 -278/637 -3/14 81545/213444 -215/441 "
            "960865/4786026 60467875/339873996")] * 3
    + [_row("33273907/58652568 -3043507/900966 675/196 -1094/1911 0 -159967/213444 0 -1238333/1595342 "
            "-65728585/226582664")],
    "total": [_row("7259/3744 -769/504 0 -185/1638 -125/2016 -5/21 0")]
    + [_row("7259/3744 -2579/504 15/4 -139/182 235/2016 3/14 -5/36")] * 3
    + [_row("7259/3744 -209/24 15/2 -547/546 -461/2016 0 1/2")],
}


def dbar_closed(n, which, printed=False):
    """
    Tabulated closed forms of the local-route Dbar_n^which (which = 0, 1, 2 or
    "total") per class.  Two misprints are repaired unless printed=True: the
    leading coefficient of the tree row for i = 1 (22747599 -> 22737599) and
    the (1/25)^n coefficient of the R row for i = 2 (0 -> 86/49).
    """
    rows = [list(r) for r in DBAR_PRINTED[which]]
    if not printed:
        if which == 1:
            rows[0][0] = F(22737599, 58652568)
        if which == 2:
            rows[4][6] = F(86, 49)
    base = DBAR_BASES[which]
    return tuple(sum(c * b ** n for c, b in zip(r, base)) for r in rows)
