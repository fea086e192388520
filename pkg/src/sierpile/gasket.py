"""
Level-n Sierpinski gasket graphs SG_n with a symbolic vertex addressing scheme.

A vertex is named by a word over {L, R, U} (which sub-triangle to descend into:
lower-left, lower-right, upper) followed by a corner label l, r or t of the
smallest triangle reached.  The string form is ``"LRU:t"``.

Vertices shared by two neighbouring triangles have two raw spellings.  The
gluing table is

    corner r of an L-triangle  ==  corner l of the sibling R-triangle
    corner t of an L-triangle  ==  corner l of the sibling U-triangle
    corner t of an R-triangle  ==  corner r of the sibling U-triangle

and a trailing run of the letter that matches the corner can be moved freely
(corner l of L...L is corner l of the enclosing triangle, and so on).  The
canonical spelling is the lexicographically smaller of the two.

Orientation: l = (0, 0), r = (1, 0), t = (1/2, sqrt(3)/2) for the unit-side
triangle.  The rotation maps l -> t -> r -> l (clockwise), and the reflection
with axis i fixes corner i where corners are numbered 1 = l, 2 = t, 3 = r.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
import json
import math

from .errors import DomainError, check_level

CORNERS = ("l", "r", "t")
COPIES = ("L", "R", "U")
LETTER = {"l": "L", "r": "R", "t": "U"}
CORNER_OF = {v: k for k, v in LETTER.items()}
CORNER_NAMES = {"left": "l", "right": "r", "top": "t"}


def corner_label(x):
    """Accept l/r/t or left/right/top."""
    x = CORNER_NAMES.get(x, x)
    if x not in LETTER:
        raise DomainError(f"bad corner label {x!r}")
    return x

# (letter of the small triangle, its corner) -> same point in the sibling triangle
_GLUE = {
    ("L", "r"): ("R", "l"), ("R", "l"): ("L", "r"),
    ("L", "t"): ("U", "l"), ("U", "l"): ("L", "t"),
    ("R", "t"): ("U", "r"), ("U", "r"): ("R", "t"),
}

# symmetry maps as (letter permutation, corner permutation)
_ROT = {"L": "U", "U": "R", "R": "L"}
_REFL = {
    1: {"L": "L", "R": "U", "U": "R"},   # fixes the left corner, swaps top and right
    2: {"L": "R", "R": "L", "U": "U"},   # fixes the top corner, swaps left and right
    3: {"L": "U", "U": "L", "R": "R"},   # fixes the right corner, swaps left and top
}
AXIS_CORNER = {1: "l", 2: "t", 3: "r"}


def _corner_map(letter_map):
    return {CORNER_OF[a]: CORNER_OF[b] for a, b in letter_map.items()}


def canonical(word, corner):
    """Canonical (word, corner) spelling of a raw address."""
    if corner not in LETTER:
        raise DomainError(f"bad corner label {corner!r}")
    c = LETTER[corner]
    k = len(word)
    while k > 0 and word[k - 1] == c:
        k -= 1
    if k == 0:
        return word, corner
    other, corner2 = _GLUE[(word[k - 1], corner)]
    alt = word[:k - 1] + other + LETTER[corner2] * (len(word) - k)
    return min((word, corner), (alt, corner2))


def spellings(word, corner):
    """All raw spellings of the vertex (one or two)."""
    w, c = canonical(word, corner)
    out = {(w, c)}
    L = LETTER[c]
    k = len(w)
    while k > 0 and w[k - 1] == L:
        k -= 1
    if k > 0:
        other, c2 = _GLUE[(w[k - 1], c)]
        out.add((w[:k - 1] + other + LETTER[c2] * (len(w) - k), c2))
    return sorted(out)


@dataclass(frozen=True, order=True)
class VertexAddr:
    """Canonical address of a vertex of SG_level."""
    word: str
    corner: str

    def __post_init__(self):
        if any(ch not in "LRU" for ch in self.word):
            raise DomainError(f"bad address word {self.word!r}")
        if canonical(self.word, self.corner) != (self.word, self.corner):
            raise DomainError(f"{self.word}:{self.corner} is not canonical; use VertexAddr.make")

    @property
    def level(self):
        return len(self.word)

    @classmethod
    def make(cls, word, corner):
        corner = corner_label(corner)
        return cls(*canonical(word, corner))

    @classmethod
    def parse(cls, text):
        try:
            word, corner = text.strip().split(":")
        except ValueError:
            raise DomainError(f"cannot parse vertex address {text!r} (expected e.g. 'LRU:t')")
        if any(ch not in "LRU" for ch in word) or corner not in LETTER:
            raise DomainError(f"cannot parse vertex address {text!r}")
        return cls.make(word, corner)

    def __str__(self):
        return f"{self.word}:{self.corner}"

    def __repr__(self):
        return f"VertexAddr('{self}')"


def corner_addr(n, c):
    return VertexAddr(LETTER[c] * n, c)


def cut_addr(n, opposite):
    """Cut point of SG_n (n >= 1) lying opposite corner `opposite`."""
    if n < 1:
        raise DomainError("cut points exist only for level >= 1")
    if opposite == "l":
        return VertexAddr.make("R" + "U" * (n - 1), "t")
    if opposite == "r":
        return VertexAddr.make("L" + "U" * (n - 1), "t")
    return VertexAddr.make("L" + "R" * (n - 1), "r")


def display_xy(v):
    """Planar coordinates in the unit-side triangle (display only)."""
    off = {"L": (0.0, 0.0), "R": (0.5, 0.0), "U": (0.25, math.sqrt(3) / 4)}
    cxy = {"l": (0.0, 0.0), "r": (1.0, 0.0), "t": (0.5, math.sqrt(3) / 2)}
    x = y = 0.0
    s = 1.0
    for ch in v.word:
        dx, dy = off[ch]
        x += s * dx
        y += s * dy
        s /= 2
    cx, cy = cxy[v.corner]
    return x + s * cx, y + s * cy


class SgGraph:
    """
    Level-n gasket graph.  Vertices are kept sorted; `index` maps an address to
    its position and `nbr[i]` lists neighbour positions (sorted by address).
    """

    def __init__(self, level):
        self.level = level
        verts = set()
        edges = set()
        for t in product(COPIES, repeat=level):
            w = "".join(t)
            a, b, c = (canonical(w, x) for x in CORNERS)
            verts.update((a, b, c))
            edges.update({tuple(sorted(p)) for p in ((a, b), (a, c), (b, c))})
        self.vertices = tuple(VertexAddr(*v) for v in sorted(verts))
        self.index = {v: i for i, v in enumerate(self.vertices)}
        raw = {(v.word, v.corner): i for i, v in enumerate(self.vertices)}
        nbr = [[] for _ in self.vertices]
        self.edges = []
        for a, b in sorted(edges):
            i, j = raw[a], raw[b]
            nbr[i].append(j)
            nbr[j].append(i)
            self.edges.append((i, j))
        self.nbr = tuple(tuple(sorted(x)) for x in nbr)
        self.corners = tuple(corner_addr(level, c) for c in CORNERS)
        self.cut_points = tuple(cut_addr(level, c) for c in CORNERS) if level >= 1 else ()

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def __repr__(self):
        return f"SgGraph(level={self.level}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    @property
    def adjacency(self):
        V = self.vertices
        return {V[i]: tuple(V[j] for j in js) for i, js in enumerate(self.nbr)}

    def neighbors(self, v):
        return tuple(self.vertices[j] for j in self.nbr[self._idx(v)])

    def degree(self, v):
        return len(self.nbr[self._idx(v)])

    def _idx(self, v):
        if isinstance(v, str):
            v = VertexAddr.parse(v)
        try:
            return self.index[v]
        except KeyError:
            raise DomainError(f"{v} is not a vertex of SG_{self.level}")

    def to_json(self):
        V = self.vertices
        return {
            "level": self.level,
            "vertices": [str(v) for v in V],
            "edges": [[str(V[i]), str(V[j])] for i, j in self.edges],
            "corners": [str(v) for v in self.corners],
            "cut_points": [str(v) for v in self.cut_points],
        }


@lru_cache(maxsize=16)
def build_graph(level):
    """SG_level (cached; graphs are immutable)."""
    check_level(level)
    return SgGraph(level)


def _map_vertex(g, v, letters):
    if isinstance(v, str):
        v = VertexAddr.parse(v)
    if v not in g:
        raise DomainError(f"{v} is not a vertex of SG_{g.level}")
    corners = _corner_map(letters)
    word = "".join(letters[ch] for ch in v.word)
    return VertexAddr.make(word, corners[v.corner])


def rotate(g, v, times=1):
    """Image of v under the rotation l -> t -> r -> l, applied `times` times (mod 3)."""
    if isinstance(v, str):
        v = VertexAddr.parse(v)
    if v not in g:
        raise DomainError(f"{v} is not a vertex of SG_{g.level}")
    for _ in range(times % 3):
        v = _map_vertex(g, v, _ROT)
    return v


def reflect(g, axis, v):
    """Image of v under the mirror through corner 1 = l, 2 = t or 3 = r."""
    if axis not in _REFL:
        raise DomainError(f"reflection axis must be 1, 2 or 3, got {axis!r}")
    return _map_vertex(g, v, _REFL[axis])


def subtriangle_embed(g, which, v):
    """Embed vertex v of SG_{n-1} into copy `which` (L, R or U) of g = SG_n."""
    if which not in COPIES:
        raise DomainError(f"copy must be one of L, R, U, got {which!r}")
    if isinstance(v, str):
        v = VertexAddr.parse(v)
    if g.level < 1 or v.level != g.level - 1:
        raise DomainError(f"cannot embed a level-{v.level} vertex into SG_{g.level}")
    return VertexAddr.make(which + v.word, v.corner)


# ---------------------------------------------------------------- sinks

def parse_sinks(s):
    """Normalize a sink specification to a sorted tuple of corner labels."""
    presets = {"one": ("t",), "two": ("r", "t"), "three": ("l", "r", "t")}
    if isinstance(s, str):
        if s in presets:
            return presets[s]
        s = s.replace(",", " ").split()
    out = tuple(sorted({corner_label(x) for x in s}))
    if not out:
        raise DomainError(f"bad sink specification {s!r}")
    return out


class ContractedGraph:
    """
    SG_n with the sink corners identified into one sink vertex.

    Non-sink vertices keep their degree; `sink_edges[i]` lists, for each parallel
    edge from vertex i to the sink, the sink corner it goes to (sorted), so
    b_i = len(sink_edges[i]).
    """

    def __init__(self, base, sinks):
        self.base = base
        self.sinks = parse_sinks(sinks)
        sink_addr = {corner_addr(base.level, c): c for c in self.sinks}
        sidx = {base.index[a]: c for a, c in sink_addr.items()}
        keep = [i for i in range(len(base.vertices)) if i not in sidx]
        pos = {i: k for k, i in enumerate(keep)}
        self.vertices = tuple(base.vertices[i] for i in keep)
        self.index = {v: k for k, v in enumerate(self.vertices)}
        self.nbr = tuple(tuple(pos[j] for j in base.nbr[i] if j in pos) for i in keep)
        self.sink_edges = tuple(tuple(sorted(sidx[j] for j in base.nbr[i] if j in sidx))
                                for i in keep)
        self.deg = tuple(len(base.nbr[i]) for i in keep)

    @property
    def level(self):
        return self.base.level

    @property
    def multi_edges(self):
        return {v: len(s) for v, s in zip(self.vertices, self.sink_edges) if s}

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ContractedGraph(level={self.level}, sinks={self.sinks}, |V\\S|={len(self)})"


def contract_sinks(g, sinks):
    """Cached per (graph, normalized sink set), so equal specifications share one object."""
    return _contract(g, parse_sinks(sinks))


@lru_cache(maxsize=64)
def _contract(g, sinks):
    return ContractedGraph(g, sinks)


def graph_json(level):
    return json.dumps(build_graph(level).to_json())
