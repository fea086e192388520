"""
Exact counts of spanning trees (tau), two-component forests separating a given
corner (sigma) and three-component forests separating all corners (rho) on SG_n,
together with the decomposition table of a level-n forest into three level-(n-1)
forests.

Forest classes use the corner that is isolated:
    T   spanning tree
    S1  left corner alone, {r, t} together
    S2  top corner alone,  {l, r} together
    S3  right corner alone, {l, t} together
    R   three components, one corner each
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import isqrt

from .errors import DomainError, check_level
from .gasket import COPIES, CORNERS

CLASSES = ("T", "S1", "S2", "S3", "R")
ISOLATED = {"S1": "l", "S2": "t", "S3": "r"}
CLASS_OF_ISOLATED = {v: k for k, v in ISOLATED.items()}

# how the three corners of each copy sit among the six boundary points of SG_1:
# outer corners l, r, t and cut points bc (bottom), lc (left side), rc (right side)
BOUNDARY = {
    "L": {"l": "l", "r": "bc", "t": "lc"},
    "R": {"l": "bc", "r": "r", "t": "rc"},
    "U": {"l": "lc", "r": "rc", "t": "t"},
}


def partition(cls):
    """Corner partition of a forest class, as a tuple of frozensets."""
    if cls == "T":
        return (frozenset(CORNERS),)
    if cls == "R":
        return tuple(frozenset(c) for c in CORNERS)
    if cls in ISOLATED:
        c = ISOLATED[cls]
        return (frozenset(c), frozenset(x for x in CORNERS if x != c))
    raise DomainError(f"unknown forest class {cls!r}")


def class_of_partition(parts):
    parts = {frozenset(p) for p in parts}
    for cls in CLASSES:
        if set(partition(cls)) == parts:
            return cls
    return None


@dataclass(frozen=True)
class CensusState:
    n: int
    tau: int
    sigma: int
    rho: int

    def as_strings(self):
        return {"n": self.n, "tau": str(self.tau), "sigma": str(self.sigma), "rho": str(self.rho)}


def counts_recursive(n, rho_cubic=True):
    """
    (tau_n, sigma_n, rho_n) from
        tau'   = 6 tau^2 sigma
        sigma' = 7 tau sigma^2 + tau^2 rho
        rho'   = 14 sigma^3 + 12 tau sigma rho
    `rho_cubic=False` uses 14 sigma^2 in the last line instead (kept only to
    show that it is inconsistent with the closed forms).
    """
    check_level(n, default=8)
    t, s, r = 3, 1, 1
    for _ in range(n):
        t, s, r = (6 * t * t * s,
                   7 * t * s * s + t * t * r,
                   (14 * s ** 3 if rho_cubic else 14 * s ** 2) + 12 * t * s * r)
    return CensusState(n, t, s, r)


def _exact_root(num, den):
    """Square root of num/den as an integer, or None if it is not one."""
    if num % den:
        return None
    q = num // den
    r = isqrt(q)
    return r if r * r == q else None


def counts_closed(n):
    """
    Closed forms
        tau_n   = 3 (3/5)^{n/2} 540^{(3^n-1)/4}
        sigma_n = (5/3)^{n/2} 540^{(3^n-1)/4}
        rho_n   = (5/3)^{3n/2} 540^{(3^n-1)/4}
    evaluated through their squares, which are rational:
        tau^2 = 9 (3/5)^n 540^{(3^n-1)/2}, sigma^2 = (5/3)^n 540^{...}, rho^2 = (5/3)^{3n} 540^{...}.
    """
    check_level(n, default=8)
    big = 540 ** ((3 ** n - 1) // 2)
    tau = _exact_root(9 * 3 ** n * big, 5 ** n)
    sigma = _exact_root(5 ** n * big, 3 ** n)
    rho = _exact_root(5 ** (3 * n) * big, 3 ** (3 * n))
    if None in (tau, sigma, rho):
        raise ArithmeticError(f"closed form is not an integer at n={n}")
    return CensusState(n, tau, sigma, rho)


# ------------------------------------------------------------ decomposition

class _UnionFind:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[a] = b
        return True


def glue(children):
    """
    Parent class obtained by placing forests of classes `children` (for copies
    L, R, U) side by side, or None if the union has a cycle or a component
    without a corner of SG_n.
    """
    uf = _UnionFind()
    for d, cls in zip(COPIES, children):
        for comp in partition(cls):
            cs = sorted(comp)
            for a in cs[1:]:
                if not uf.union(BOUNDARY[d][cs[0]], BOUNDARY[d][a]):
                    return None
    groups = defaultdict(set)
    for x in ("l", "r", "t", "bc", "lc", "rc"):
        groups[uf.find(x)].add(x)
    if any(not (g & set(CORNERS)) for g in groups.values()):
        return None
    return class_of_partition(g & set(CORNERS) for g in groups.values())


@dataclass(frozen=True)
class DecompositionEntry:
    children: tuple        # classes of the L, R, U copies (in each copy's own labels)
    monomial: str          # e.g. "tau*tau*sigma"
    weight: int            # relative weight once tau*rho = 3 sigma^2 is used

    def product(self, st):
        val = {"T": st.tau, "R": st.rho}
        out = 1
        for c in self.children:
            out *= val.get(c, st.sigma)
        return out


def _monomial(children):
    name = {"T": "tau", "R": "rho"}
    return "*".join(sorted(name.get(c, "sigma") for c in children))


@lru_cache(maxsize=None)
def _table():
    tab = defaultdict(list)
    for children in product(CLASSES, repeat=3):
        parent = glue(children)
        if parent is None:
            continue
        mono = _monomial(children)
        # tau*rho = 3 sigma^2 turns every monomial into a multiple of the basic one
        weight = 3 if mono in ("rho*tau*tau", "rho*sigma*tau") else 1
        tab[parent].append(DecompositionEntry(children, mono, weight))
    return {k: tuple(v) for k, v in tab.items()}


def decomposition_table(cls):
    """All (L, R, U) child-class combinations producing a forest of class `cls`."""
    if cls not in CLASSES:
        raise DomainError(f"unknown forest class {cls!r}")
    return _table()[cls]


def counts_from_table(st):
    """One recursion step driven by the decomposition table."""
    tot = {c: sum(e.product(st) for e in decomposition_table(c)) for c in CLASSES}
    for s in ("S1", "S3"):
        if tot[s] != tot["S2"]:
            raise ArithmeticError("asymmetric two-component counts")
    return CensusState(st.n + 1, tot["T"], tot["S2"], tot["R"])
