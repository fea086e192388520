"""
Independent ground truth: exhaustive forest enumeration at levels <= 2,
Kirchhoff tree counts, Wilson's algorithm and loop-erased random walks.
Nothing here uses the recursions of census / heights / transfer.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .census import CLASSES, ISOLATED, partition
from .errors import CapacityError, DomainError
from .gasket import COPIES, CORNERS, VertexAddr, build_graph, corner_addr, parse_sinks

F = Fraction


# ------------------------------------------------------------ helpers

def _components(nv, edges):
    """Union-find labels, or None if `edges` contains a cycle."""
    p = list(range(nv))

    def find(x):
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return None
        p[ra] = rb
    return [find(x) for x in range(nv)]


def classify_forest(g, edges):
    """Forest class of an edge subset of SG_n (None if not a spanning forest of a class)."""
    lab = _components(len(g.vertices), edges)
    if lab is None:
        return None
    cidx = {c: g.index[corner_addr(g.level, c)] for c in CORNERS}
    comps = {}
    for x in range(len(g.vertices)):
        comps.setdefault(lab[x], set())
    for c, i in cidx.items():
        comps[lab[i]].add(c)
    if any(not s for s in comps.values()):
        return None
    parts = {frozenset(s) for s in comps.values()}
    for cls in CLASSES:
        if set(partition(cls)) == parts:
            return cls
    return None


def descendants(g, edges, roots):
    """
    des(v) for every vertex of SG_n in the forest `edges` rooted at the corner
    indices `roots` (a root's descendants are its neighbours in its component).
    """
    n = len(g.vertices)
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    tin = [-1] * n
    tout = [0] * n
    clock = 0
    for r in roots:
        stack = [(r, 0)]
        tin[r] = clock
        clock += 1
        while stack:
            x, k = stack[-1]
            if k < len(adj[x]):
                stack[-1] = (x, k + 1)
                y = adj[x][k]
                if tin[y] < 0:
                    tin[y] = clock
                    clock += 1
                    stack.append((y, 0))
            else:
                tout[x] = clock
                stack.pop()
    if min(tin) < 0:
        raise DomainError("some vertex is not connected to a root")
    return [sum(1 for y in g.nbr[v] if tin[v] < tin[y] < tout[v]) for v in range(n)]


def _default_roots(cls):
    from .transfer import ensemble
    _, comps = ensemble(cls)
    return tuple(e for _, e, _ in comps)


@dataclass
class ForestEnumeration:
    level: int
    cls: str
    roots: tuple
    count: int
    tallies: dict          # VertexAddr -> Counter of des values

    def desc_dist(self, v):
        if isinstance(v, str):
            v = VertexAddr.parse(v)
        t = self.tallies[v]
        return tuple(F(t.get(k, 0), self.count) for k in range(5))

    def mean_des_total(self, include_corners=True):
        g = build_graph(self.level)
        cs = set(g.corners)
        tot = F(0)
        for v, t in self.tallies.items():
            if include_corners or v not in cs:
                tot += F(sum(k * c for k, c in t.items()), self.count)
        return tot


def _level1_forests():
    g = build_graph(1)
    out = {c: [] for c in CLASSES}
    E = g.edges
    for m in range(1 << len(E)):
        es = [E[i] for i in range(len(E)) if m >> i & 1]
        cls = classify_forest(g, es)
        if cls is not None:
            out[cls].append(es)
    return out


def _level2_forests(cls):
    """All class-`cls` forests of SG_2, assembled from forests of the three copies."""
    from .census import decomposition_table
    g1, g2 = build_graph(1), build_graph(2)
    per = _level1_forests()
    emb = {}
    for d in COPIES:
        emb[d] = [g2.index[VertexAddr.make(d + v.word, v.corner)] for v in g1.vertices]
    for entry in decomposition_table(cls):
        lists = []
        for d, c in zip(COPIES, entry.children):
            lists.append([[(emb[d][a], emb[d][b]) for a, b in es] for es in per[c]])
        for a, b, c in product(*lists):
            yield a + b + c


def enumerate_forests(level, cls, roots=None):
    """
    Exhaustive enumeration of class-`cls` spanning forests of SG_level
    (level <= 2) with per-vertex descendant tallies under the given rooting.
    Level 1 classifies all 512 edge subsets directly; level 2 glues forests of
    the three copies (every forest of SG_2 restricts to a forest of each copy
    whose components all contain a corner).
    """
    if level > 2:
        raise CapacityError("exhaustive enumeration is limited to level <= 2")
    if cls not in CLASSES:
        raise DomainError(f"unknown forest class {cls!r}")
    g = build_graph(level)
    roots = tuple(_default_roots(cls) if roots is None else roots)
    ridx = [g.index[corner_addr(level, c)] for c in roots]
    if level == 0:
        E = g.edges
        forests = []
        for m in range(1 << len(E)):
            es = [E[i] for i in range(len(E)) if m >> i & 1]
            if classify_forest(g, es) == cls:
                forests.append(es)
    elif level == 1:
        forests = _level1_forests()[cls]
    else:
        forests = _level2_forests(cls)
    tallies = [Counter() for _ in g.vertices]
    count = 0
    for es in forests:
        count += 1
        for v, k in enumerate(descendants(g, es, ridx)):
            tallies[v][k] += 1
    return ForestEnumeration(level, cls, roots, count,
                             {v: tallies[i] for i, v in enumerate(g.vertices)})


def looping_at_vertex(level, v, sinks=("r", "t")):
    """
    Exact expected number of neighbours of v on the loop-erased walk from v to
    the sink corners (level <= 2), by enumerating every spanning forest in which
    each component holds exactly one sink corner.  The walk's law is that of the
    forest path from v to its root.  This per-vertex quantity differs from the
    mean number of neighbouring descendants; only their averages over all
    vertices coincide.
    """
    if level > 2:
        raise CapacityError("exhaustive enumeration is limited to level <= 2")
    g = build_graph(level)
    if isinstance(v, str):
        v = VertexAddr.parse(v)
    i = g.index[v]
    sinks = set(parse_sinks(sinks))
    roots = {g.index[corner_addr(level, c)] for c in sinks}
    classes = [c for c in CLASSES if all(len(set(p) & sinks) == 1 for p in partition(c))]
    total, count = 0, 0
    for cls in classes:
        forests = _level1_forests()[cls] if level == 1 else _level2_forests(cls)
        for es in forests:
            adj = {}
            for a, b in es:
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
            # depth-first search from v; the unique root reached gives the path
            prev = {i: None}
            stack = [i]
            while stack:
                x = stack.pop()
                for y in adj.get(x, ()):
                    if y not in prev:
                        prev[y] = x
                        stack.append(y)
            r = next(x for x in prev if x in roots)
            on_path = set()
            while r is not None:
                on_path.add(r)
                r = prev[r]
            total += sum(1 for j in g.nbr[i] if j in on_path)
            count += 1
    return F(total, count)


def class_counts(level):
    if level > 1:
        raise CapacityError("direct edge-subset classification is limited to level <= 1")
    if level == 1:
        return {c: len(v) for c, v in _level1_forests().items()}
    return {c: enumerate_forests(0, c).count for c in CLASSES}


# ------------------------------------------------------------ matrix-tree

def bareiss_det(m):
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def kirchhoff_count(g, merged=()):
    """
    Number of spanning trees of SG_n with the corners in `merged` identified
    (one vertex); with nothing merged the reduced Laplacian drops vertex 0.
    """
    merged = parse_sinks(merged) if merged else ()
    sidx = {g.index[corner_addr(g.level, c)] for c in merged}
    keep = [i for i in range(len(g.vertices)) if i not in sidx]
    if not sidx:
        keep = keep[1:]
    pos = {i: k for k, i in enumerate(keep)}
    L = [[0] * len(keep) for _ in keep]
    for i in keep:
        L[pos[i]][pos[i]] = len(g.nbr[i])
        for j in g.nbr[i]:
            if j in pos:
                L[pos[i]][pos[j]] -= 1
    return bareiss_det(L)


# ------------------------------------------------------------ random walks

@dataclass
class LerwSample:
    start: int
    targets: frozenset
    path: list
    seed: object = None


def loop_erase(walk):
    """Chronological loop erasure of a vertex sequence."""
    path = []
    where = {}
    for x in walk:
        if x in where:
            k = where[x]
            for y in path[k + 1:]:
                del where[y]
            path = path[:k + 1]
        else:
            where[x] = len(path)
            path.append(x)
    return path


def lerw(g, start, targets, rng, seed=None):
    """Loop-erased simple random walk on graph `g` (SgGraph) from `start` until it hits `targets`."""
    targets = frozenset(targets)
    x = start
    walk = [x]
    while x not in targets:
        nb = g.nbr[x]
        x = nb[int(rng.integers(len(nb)))]
        walk.append(x)
    path = loop_erase(walk)
    assert path[0] == start and path[-1] in targets and len(set(path)) == len(path)
    return LerwSample(start, targets, path, seed)


def wilson_sample(g, roots, rng):
    """
    Uniform spanning forest of SG_n rooted at the vertex indices `roots`
    (each component contains exactly one root).  Returns parent pointers
    (-1 at roots).
    """
    if not roots:
        raise DomainError("Wilson's algorithm needs at least one root")
    n = len(g.vertices)
    in_tree = [False] * n
    parent = [-1] * n
    for r in roots:
        in_tree[r] = True
    nxt = [-1] * n
    for v in range(n):
        u = v
        while not in_tree[u]:
            nb = g.nbr[u]
            nxt[u] = nb[int(rng.integers(len(nb)))]
            u = nxt[u]
        u = v
        while not in_tree[u]:
            parent[u] = nxt[u]
            in_tree[u] = True
            u = nxt[u]
    return parent


def forest_edges(parent):
    return [(v, p) for v, p in enumerate(parent) if p >= 0]


# ------------------------------------------------------------ fast Monte Carlo

def _numba_kernels():
    import numba

    @numba.njit(cache=True)
    def lerw_zeta(nbr, deg, targets, nsamples, seed):
        """
        For uniform start vertices, the number of neighbours of the start lying
        on the loop-erased walk to the target set.  Returns (sum, sum of squares).
        """
        np.random.seed(seed)
        n = deg.shape[0]
        where = np.full(n, -1, np.int64)
        path = np.empty(n, np.int64)
        s = 0.0
        s2 = 0.0
        for _ in range(nsamples):
            v = np.random.randint(n)
            ln = 0
            x = v
            path[0] = x
            where[x] = 0
            ln = 1
            while not targets[x]:
                x = nbr[x, np.random.randint(deg[x])]
                if where[x] >= 0:
                    k = where[x]
                    for j in range(k + 1, ln):
                        where[path[j]] = -1
                    ln = k + 1
                else:
                    where[x] = ln
                    path[ln] = x
                    ln += 1
            c = 0
            for j in range(deg[v]):
                if where[nbr[v, j]] >= 0:
                    c += 1
            for j in range(ln):
                where[path[j]] = -1
            s += c
            s2 += c * c
        return s, s2

    return lerw_zeta


_KERNELS = None


def mc_looping_constant(level, sinks=("r", "t"), samples=10 ** 6, seed=0):
    """
    Monte Carlo estimate of the average (over uniform start vertices, sinks
    included) number of neighbours of the start visited by the loop-erased
    walk to the sinks.  Returns (mean, standard error).
    """
    global _KERNELS
    if _KERNELS is None:
        _KERNELS = _numba_kernels()
    g = build_graph(level)
    n = len(g.vertices)
    nbr = np.zeros((n, 4), dtype=np.int64)
    deg = np.array([len(x) for x in g.nbr], dtype=np.int64)
    for i, js in enumerate(g.nbr):
        nbr[i, :len(js)] = js
    tg = np.zeros(n, dtype=np.bool_)
    for c in parse_sinks(sinks):
        tg[g.index[corner_addr(level, c)]] = True
    # the kernel's generator is seeded from the package's counter-based stream
    from .sandpile import default_rng
    kseed = int(default_rng(seed).integers(2 ** 31 - 1))
    s, s2 = _KERNELS(nbr, deg, tg, int(samples), kseed)
    mean = s / samples
    var = s2 / samples - mean * mean
    return mean, (var / samples) ** 0.5


def isolated_of(cls):
    return ISOLATED.get(cls)
