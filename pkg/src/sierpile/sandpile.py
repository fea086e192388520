"""
Abelian sandpile dynamics on a sink-contracted gasket graph, and the burning
bijection between recurrent configurations and spanning trees.

Configurations are tuples of chip counts aligned with ``graph.vertices`` of a
:class:`~sierpile.gasket.ContractedGraph`.
"""

from collections import deque
from dataclasses import dataclass
from itertools import product
import json

import numpy as np

from .errors import ContractViolation, DomainError
from .gasket import ContractedGraph, VertexAddr, build_graph, contract_sinks

SINK = -1


@dataclass(frozen=True)
class SandpileConfig:
    graph: ContractedGraph
    chips: tuple

    def __post_init__(self):
        if len(self.chips) != len(self.graph.vertices):
            raise DomainError("chip vector does not match the non-sink vertex set")
        if any(c < 0 for c in self.chips):
            raise DomainError("chip counts must be nonnegative")

    def is_stable(self):
        return all(c < d for c, d in zip(self.chips, self.graph.deg))

    def as_dict(self):
        return {v: c for v, c in zip(self.graph.vertices, self.chips)}

    def to_json(self):
        return {"graph_level": self.graph.level, "sinks": list(self.graph.sinks),
                "chips": {str(v): c for v, c in zip(self.graph.vertices, self.chips)}}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        g = contract_sinks(build_graph(obj["graph_level"]), tuple(obj["sinks"]))
        chips = [0] * len(g.vertices)
        for k, c in obj["chips"].items():
            chips[g.index[VertexAddr.parse(k)]] = int(c)
        return cls(g, tuple(chips))

    def __add__(self, other):
        if other.graph is not self.graph:
            raise DomainError("configurations live on different graphs")
        return SandpileConfig(self.graph, tuple(a + b for a, b in zip(self.chips, other.chips)))


@dataclass(frozen=True)
class Odometer:
    counts: tuple


def max_stable(g):
    return SandpileConfig(g, tuple(d - 1 for d in g.deg))


def zero_config(g):
    return SandpileConfig(g, (0,) * len(g.vertices))


def _stabilize_list(h, nbr, deg, start=None):
    """In-place FIFO stabilization of list `h`; returns per-vertex toppling counts."""
    n = len(h)
    odo = [0] * n
    queue = deque(range(n) if start is None else start)
    queued = [False] * n
    for i in queue:
        queued[i] = True
    while queue:
        x = queue.popleft()
        queued[x] = False
        if h[x] < deg[x]:
            continue
        q = h[x] // deg[x]
        h[x] -= q * deg[x]
        odo[x] += q
        for y in nbr[x]:
            h[y] += q
            if h[y] >= deg[y] and not queued[y]:
                queued[y] = True
                queue.append(y)
    return odo


def stabilize(c, order=None):
    """
    Stabilize a configuration.  Unstable vertices are processed first-in first-out
    and topple in bulk (floor(chips/deg) at once).  `order` optionally fixes the
    initial scan order, which must not change the result.
    """
    g = c.graph
    h = list(c.chips)
    odo = _stabilize_list(h, g.nbr, g.deg, order)
    return SandpileConfig(g, tuple(h)), Odometer(tuple(odo))


def laplacian_apply(g, counts):
    """Chip change -Delta * counts (vector aligned with g.vertices)."""
    out = [-d * k for d, k in zip(g.deg, counts)]
    for i, js in enumerate(g.nbr):
        for j in js:
            out[j] += counts[i]
    return out


def is_recurrent(c):
    """Burning test: add b_i at every sink neighbour; recurrent iff each vertex topples once."""
    g = c.graph
    if not c.is_stable():
        return False
    h = [x + len(s) for x, s in zip(c.chips, g.sink_edges)]
    odo = _stabilize_list(h, g.nbr, g.deg)
    return tuple(h) == c.chips and all(k == 1 for k in odo)


def stable_configs(g):
    for chips in product(*[range(d) for d in g.deg]):
        yield SandpileConfig(g, chips)


def recurrent_configs(g):
    """All recurrent configurations by exhaustive scan of the stable ones (small graphs)."""
    return [c for c in stable_configs(g) if is_recurrent(c)]


def group_add(a, b):
    if not (is_recurrent(a) and is_recurrent(b)):
        raise ContractViolation("group_add expects recurrent configurations")
    return stabilize(a + b)[0]


def identity_element(g):
    """e = ((s_max - (2 s_max)°) + s_max)°."""
    smax = max_stable(g)
    twice = stabilize(smax + smax)[0]
    diff = SandpileConfig(g, tuple(a - b for a, b in zip(smax.chips, twice.chips)))
    return stabilize(diff + smax)[0]


def markov_step(c, rng):
    """Add a chip at a uniformly chosen non-sink vertex and stabilize."""
    g = c.graph
    if not c.is_stable():
        raise ContractViolation("markov_step expects a stable configuration")
    if not g.vertices:
        return c
    v = int(rng.integers(len(g.vertices)))
    h = list(c.chips)
    h[v] += 1
    _stabilize_list(h, g.nbr, g.deg, [v])
    return SandpileConfig(g, tuple(h))


def run_chain(c, steps, rng, burn_in=0, chunk=65536):
    """
    Run the sandpile Markov chain and tally visited states after burn-in.
    Returns (final configuration, dict chips-tuple -> visit count).
    """
    g = c.graph
    nbr, deg = g.nbr, g.deg
    h = list(c.chips)
    counts = {}
    done = 0
    total = burn_in + steps
    while done < total:
        m = min(chunk, total - done)
        picks = rng.integers(len(h), size=m).tolist()
        for v in picks:
            h[v] += 1
            if h[v] >= deg[v]:
                _stabilize_list(h, nbr, deg, [v])
            done += 1
            if done > burn_in:
                key = tuple(h)
                counts[key] = counts.get(key, 0) + 1
    return SandpileConfig(g, tuple(h)), counts


# ------------------------------------------------------------ burning bijection

@dataclass(frozen=True)
class RootedSpanningTree:
    """
    parent[i] is the index of the next vertex towards the sink, or SINK; for a
    sink edge, sink_slot[i] says which of the b_i parallel edges is used.
    """
    graph: ContractedGraph
    parent: tuple
    sink_slot: tuple

    def depth(self):
        out = [None] * len(self.parent)

        def walk(i):
            path = []
            while i != SINK and out[i] is None:
                path.append(i)
                if len(path) > len(self.parent):
                    raise ContractViolation("parent pointers contain a cycle")
                i = self.parent[i]
            base = 0 if i == SINK else out[i]
            for k, j in enumerate(reversed(path)):
                out[j] = base + k + 1
        for i in range(len(self.parent)):
            walk(i)
        return out

    def edges(self):
        V = self.graph.vertices
        out = []
        for i, p in enumerate(self.parent):
            if p == SINK:
                out.append((V[i], "sink:" + self.graph.sink_edges[i][self.sink_slot[i]]))
            else:
                out.append((V[i], V[p]))
        return out


def edge_order(g, i):
    """
    Edges at non-sink vertex i in the fixed total order: far endpoint address
    ascending, then the parallel sink edges by index.  Items are (target, slot).
    """
    return [(j, 0) for j in g.nbr[i]] + [(SINK, k) for k in range(len(g.sink_edges[i]))]


def _level_of(lvl, e):
    return 0 if e[0] == SINK else lvl[e[0]]


def tree_to_sandpile(t):
    """sigma_T(v) = deg(v) - 1 - a_T(v) - b_T(v)."""
    g = t.graph
    lvl = t.depth()
    chips = []
    for i in range(len(g.vertices)):
        li = lvl[i]
        mine = (t.parent[i], t.sink_slot[i] if t.parent[i] == SINK else 0)
        order = edge_order(g, i)
        a = sum(1 for e in order if _level_of(lvl, e) < li - 1)
        closer = [e for e in order if _level_of(lvl, e) == li - 1]
        b = closer.index(mine)
        chips.append(g.deg[i] - 1 - a - b)
    return SandpileConfig(g, tuple(chips))


def sandpile_to_tree(c):
    """
    Inverse of tree_to_sandpile by layered burning: in round t every unburnt
    vertex whose chip count is at least its number of unburnt neighbours
    burns; its parent is the (b+1)-th edge, in the fixed order, among the edges
    to round t-1, with b = deg - 1 - a - chips.
    """
    g = c.graph
    if not is_recurrent(c):
        raise ContractViolation("sandpile_to_tree expects a recurrent configuration")
    n = len(g.vertices)
    lvl = [None] * n
    parent = [None] * n
    slot = [0] * n
    unburnt = [len(js) for js in g.nbr]
    remaining = set(range(n))
    t = 0
    while remaining:
        t += 1
        new = [i for i in sorted(remaining) if c.chips[i] >= unburnt[i]]
        if not new:
            raise ContractViolation("burning stalled")
        for i in new:
            lvl[i] = t
        for i in new:
            order = edge_order(g, i)
            a = sum(1 for e in order if e[0] == SINK and t >= 2
                    or e[0] != SINK and lvl[e[0]] is not None and lvl[e[0]] < t - 1)
            cand = [e for e in order if (e[0] == SINK and t == 1)
                    or (e[0] != SINK and lvl[e[0]] == t - 1)]
            b = g.deg[i] - 1 - a - c.chips[i]
            parent[i], slot[i] = cand[b]
        for i in new:
            remaining.discard(i)
            for j in g.nbr[i]:
                unburnt[j] -= 1
    return RootedSpanningTree(g, tuple(parent), tuple(slot))


def descendant_count(t, v):
    """Number of neighbours y of v whose path to the sink passes through v."""
    g = t.graph
    i = g.index[v] if not isinstance(v, int) else v
    return sum(1 for j in g.nbr[i] if _passes(t, j, i))


def _passes(t, j, i):
    while j != SINK:
        if j == i:
            return True
        j = t.parent[j]
    return False


def descendant_counts(t):
    """des(T, v) for every non-sink vertex, in O(|V| depth)."""
    g = t.graph
    anc = [set() for _ in g.vertices]
    for j in range(len(g.vertices)):
        k = t.parent[j]
        while k != SINK:
            anc[j].add(k)
            k = t.parent[k]
    return [sum(1 for j in g.nbr[i] if i in anc[j]) for i in range(len(g.vertices))]


def trees_from_edges(g, edge_sets):
    """Convert undirected spanning trees of the contracted graph into rooted trees."""
    for es in edge_sets:
        yield tree_from_edges(g, es)


def tree_from_edges(g, es):
    """
    `es` is a collection of (i, j) index pairs among non-sink vertices and
    (i, SINK, slot) sink edges.
    """
    n = len(g.vertices)
    adj = [[] for _ in range(n)]
    parent = [None] * n
    slot = [0] * n
    frontier = []
    for e in es:
        if e[1] == SINK:
            i, _, k = e
            parent[i] = SINK
            slot[i] = k
            frontier.append(i)
        else:
            i, j = e
            adj[i].append(j)
            adj[j].append(i)
    while frontier:
        x = frontier.pop()
        for y in adj[x]:
            if parent[y] is None:
                parent[y] = x
                frontier.append(y)
    if any(p is None for p in parent):
        raise ContractViolation("edge set is not a spanning tree of the contracted graph")
    return RootedSpanningTree(g, tuple(parent), tuple(slot))


def default_rng(seed, stream=0):
    """Counter-based generator (Philox) for `seed`; `stream` selects an independent stream."""
    ss = np.random.SeedSequence(int(seed))
    if stream:
        ss = ss.spawn(stream + 1)[stream]
    return np.random.Generator(np.random.Philox(ss))
