"""Finite T0 spaces as posets given by their Hasse diagrams.

Points are strings; internally every poset keeps integer arrays of covers
so that posets with hundreds of thousands of points stay cheap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import _autsearch
from .complexes import SimplicialComplex, SimplicialMap, simplex_name


class PosetError(ValueError):
    pass


class FinitePoset:
    """A finite poset stored as its cover relation ``(x, y)``: y covers x."""

    def __init__(self, points, covers, check=True):
        self.points = tuple(sorted(set(points)))
        if len(self.points) != len(tuple(points)):
            raise PosetError("duplicate point names")
        self.index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        try:
            pairs = sorted({(self.index[a], self.index[b]) for a, b in covers})
        except KeyError as exc:
            raise PosetError(f"cover mentions unknown point {exc}") from None
        self.covers = tuple((self.points[a], self.points[b]) for a, b in pairs)
        self._lo = np.array([a for a, _ in pairs], dtype=np.int64)
        self._hi = np.array([b for _, b in pairs], dtype=np.int64)
        self.up = [[] for _ in range(n)]
        self.down = [[] for _ in range(n)]
        for a, b in pairs:
            if a == b:
                raise PosetError(f"point {self.points[a]!r} covers itself")
            self.up[a].append(b)
            self.down[b].append(a)
        self.topo = self._topological_order()
        self._height = None
        self._depth = None
        self._downsets = None
        if check:
            self._check_reduced()

    # ---- construction helpers -------------------------------------------

    @classmethod
    def from_relations(cls, points, relations):
        """Poset generated by ``x <= y`` pairs; covers are the transitive reduction."""
        pts = sorted(set(points))
        idx = {p: i for i, p in enumerate(pts)}
        above = [set() for _ in pts]
        for a, b in relations:
            if a != b:
                above[idx[a]].add(idx[b])
        # transitive closure by DFS from every point
        closure = []
        for s in range(len(pts)):
            seen, stack = set(), list(above[s])
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(above[x])
            if s in seen:
                raise PosetError("relations contain a cycle")
            closure.append(seen)
        covers = []
        for a in range(len(pts)):
            for b in closure[a]:
                if not any(b in closure[c] for c in closure[a] if c != b):
                    covers.append((pts[a], pts[b]))
        return cls(pts, covers, check=False)

    def _topological_order(self):
        n = len(self.points)
        indeg = [len(d) for d in self.down]
        ready = [i for i in range(n) if indeg[i] == 0]
        order = []
        while ready:
            nxt = []
            for x in ready:
                order.append(x)
                for y in self.up[x]:
                    indeg[y] -= 1
                    if indeg[y] == 0:
                        nxt.append(y)
            ready = sorted(nxt)
        if len(order) != n:
            raise PosetError("cover relation has a cycle")
        return order

    def _check_reduced(self):
        ds = self.downsets()
        for y in range(len(self.points)):
            lows = self.down[y]
            for x in lows:
                if any(x in ds[z] for z in lows if z != x):
                    raise PosetError(f"cover ({self.points[x]!r}, {self.points[y]!r}) is implied by transitivity")

    # ---- order data -----------------------------------------------------

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.points == other.points and self.covers == other.covers

    def __hash__(self):
        return hash((self.points, self.covers))

    def __repr__(self):
        return f"FinitePoset({len(self.points)} points, {len(self.covers)} covers)"

    def downsets(self):
        """Strict down-set of every point, as a list of sets of indices."""
        if self._downsets is None:
            ds = [None] * len(self.points)
            for y in self.topo:
                s = set()
                for x in self.down[y]:
                    s.add(x)
                    s |= ds[x]
                ds[y] = s
            self._downsets = ds
        return self._downsets

    def leq(self, a, b):
        i, j = self.index[a], self.index[b]
        return i == j or i in self.downsets()[j]

    def heights(self):
        """Number of covers in the longest chain ending at each point."""
        if self._height is None:
            h = [0] * len(self.points)
            for y in self.topo:
                for x in self.down[y]:
                    h[y] = max(h[y], h[x] + 1)
            self._height = h
        return self._height

    def depths(self):
        """Number of covers in the longest chain starting at each point."""
        if self._depth is None:
            d = [0] * len(self.points)
            for x in reversed(self.topo):
                for y in self.up[x]:
                    d[x] = max(d[x], d[y] + 1)
            self._depth = d
        return self._depth

    def max_chain_cardinality(self):
        return max(self.heights(), default=-1) + 1

    def minimal_points(self):
        return [self.points[i] for i in range(len(self.points)) if not self.down[i]]

    def maximal_points(self):
        return [self.points[i] for i in range(len(self.points)) if not self.up[i]]

    def signature(self, i):
        return (len(self.down[i]), len(self.up[i]), self.heights()[i], self.depths()[i])

    # ---- serialisation ----------------------------------------------------

    def to_json(self):
        return {"points": list(self.points), "covers": [list(c) for c in self.covers]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["points"], [tuple(c) for c in data["covers"]])
        except KeyError as exc:
            raise PosetError(f"poset JSON lacks {exc}") from None

    def to_dot(self, name="hasse"):
        """Hasse diagram in DOT, one rank per height, edges pointing upwards."""
        h = self.heights()
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
        for p in self.points:
            lines.append(f'  "{p}";')
        for level in range(self.max_chain_cardinality()):
            members = " ".join(f'"{self.points[i]}";' for i in range(len(self.points)) if h[i] == level)
            lines.append(f"  {{ rank=same; {members} }}")
        for a, b in self.covers:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def relabel(self, mapping):
        f = lambda p: mapping.get(p, p)
        return FinitePoset([f(p) for p in self.points], [(f(a), f(b)) for a, b in self.covers], check=False)

    def prefixed(self, prefix):
        return self.relabel({p: prefix + p for p in self.points})


@dataclass(frozen=True)
class PosetMap(SimplicialMap):
    """A map of points; automorphisms preserve the cover relation."""

    def is_automorphism_of(self, X: FinitePoset) -> bool:
        m = self.as_dict()
        if sorted(m) != list(X.points) or sorted(m.values()) != list(X.points):
            return False
        covers = set(X.covers)
        return all((m[a], m[b]) in covers for a, b in X.covers)


# ---------------------------------------------------------------------------
# functors between complexes and posets


def face_poset(K: SimplicialComplex) -> FinitePoset:
    """Simplices of K ordered by inclusion; points are named ``"(a,b,...)"``."""
    covers = []
    for s in K.simplices:
        if len(s) > 1:
            name = simplex_name(s)
            for i in range(len(s)):
                covers.append((simplex_name(s[:i] + s[i + 1:]), name))
    return FinitePoset([simplex_name(s) for s in K.simplices], covers, check=False)


def chains(X: FinitePoset, max_card=None):
    """Non-empty chains as tuples of indices in increasing order, by cardinality."""
    ds = X.downsets()
    out = [[(i,) for i in range(len(X.points))]]
    while max_card is None or len(out) < max_card:
        nxt = [(x,) + c for c in out[-1] for x in sorted(ds[c[0]])]
        if not nxt:
            break
        out.append(nxt)
    return out


def order_complex(X: FinitePoset) -> SimplicialComplex:
    """Simplicial complex of the non-empty chains of X."""
    pts = X.points
    simplices = set()
    for level in chains(X):
        for c in level:
            simplices.add(tuple(sorted(pts[i] for i in c)))
    return SimplicialComplex(pts, simplices)


def order_complex_skeleton(X: FinitePoset, top=2):
    """Chains of cardinality 1..top+1 as integer arrays (vertex = point index).

    Row ``k`` of the result is an array of shape (n_k, k+1), each row sorted
    increasingly by point index (the simplex orientation).
    """
    n = len(X.points)
    ds = X.downsets()
    counts = np.fromiter((len(s) for s in ds), dtype=np.int64, count=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    below = np.fromiter((x for s in ds for x in sorted(s)), dtype=np.int64, count=int(indptr[-1]))
    out = [np.arange(n, dtype=np.int64).reshape(-1, 1)]
    cur = out[0]
    for _ in range(top):
        # extend every chain downwards from its minimum
        mins = cur[:, 0]
        reps = counts[mins]
        rows = np.repeat(np.arange(len(cur)), reps)
        starts = np.repeat(indptr[mins], reps)
        offs = np.arange(len(rows)) - np.repeat(np.cumsum(reps) - reps, reps)
        new_min = below[starts + offs]
        cur = np.column_stack([new_min, cur[rows]])
        out.append(cur)
    return [np.sort(c, axis=1) for c in out]


# ---------------------------------------------------------------------------
# beat points and automorphisms


def beat_points(X: FinitePoset):
    return [X.points[i] for i in range(len(X.points)) if len(X.up[i]) == 1 or len(X.down[i]) == 1]


def is_minimal(X: FinitePoset) -> bool:
    return not beat_points(X)


def poset_graph(X: FinitePoset):
    n = len(X.points)
    lo, hi = X._lo, X._hi
    arcs = np.concatenate([np.column_stack([lo, hi]), np.column_stack([hi, lo])]) if len(lo) else np.zeros((0, 2))
    types = np.concatenate([np.zeros(len(lo), np.int64), np.ones(len(lo), np.int64)])
    colors = _autsearch.initial_colors([X.signature(i) for i in range(n)])
    return _autsearch.ColoredGraph(n, arcs, types, colors)


def poset_automorphisms(X: FinitePoset, node_budget=None):
    """All order automorphisms, pruned by (down-degree, up-degree, height, depth)."""
    if not X.points:
        return [PosetMap(())]
    pts = X.points
    out = []
    for perm in _autsearch.automorphisms(poset_graph(X), node_budget=node_budget):
        out.append(PosetMap(tuple((pts[i], pts[int(perm[i])]) for i in range(len(pts)))))
    return sorted(out, key=lambda m: [w for _, w in m.pairs])


# ---------------------------------------------------------------------------
# wedges, joins and the W spaces


def disjoint_union(X: FinitePoset, Y: FinitePoset) -> FinitePoset:
    if set(X.points) & set(Y.points):
        raise PosetError("disjoint union needs disjoint point names")
    return FinitePoset(X.points + Y.points, X.covers + Y.covers, check=False)


def wedge(X: FinitePoset, x0, Y: FinitePoset, y0) -> FinitePoset:
    """X and Y with y0 identified to x0 (which keeps its name).

    Y's other points must not clash with X's. When only one point is shared
    the union of both cover relations is already transitively reduced: a
    chain leaving X can only return through the same wedge point.
    """
    if x0 not in X.index or y0 not in Y.index:
        raise PosetError("wedge points must belong to their posets")
    ren = lambda p: x0 if p == y0 else p
    clash = (set(Y.points) - {y0}) & set(X.points)
    if clash:
        raise PosetError(f"wedge summands share points {sorted(clash)[:5]}")
    pts = list(X.points) + [p for p in Y.points if p != y0]
    covers = list(X.covers) + [(ren(a), ren(b)) for a, b in Y.covers]
    return FinitePoset(pts, covers, check=False)


def non_hausdorff_join(X: FinitePoset, Y: FinitePoset) -> FinitePoset:
    """X below Y: every point of X is below every point of Y.

    Point names are prefixed with ``0:`` and ``1:`` when they clash.
    """
    if set(X.points) & set(Y.points):
        X, Y = X.prefixed("0:"), Y.prefixed("1:")
    covers = list(X.covers) + list(Y.covers)
    covers += [(a, b) for a in X.maximal_points() for b in Y.minimal_points()]
    return FinitePoset(X.points + Y.points, covers, check=False)


def _w2_data():
    text = resources.files("symrealize").joinpath("data/w2.json").read_text()
    return json.loads(text)


def w2_poset():
    """The 17-point rigid weakly contractible space W_2 and its point a."""
    data = _w2_data()
    return FinitePoset(data["points"], [tuple(c) for c in data["covers"]]), data["base"]


L1_BOTTOM = "m1"  # where a new copy is attached when stacking
L1_TOP = "m9"  # where the next copy is attached


def l1_poset() -> FinitePoset:
    """L_1: the 9-point half of W_2 lying above its wedge point (m1..m9)."""
    data = _w2_data()
    upper = {f"m{i}" for i in range(1, 10)}
    covers = [tuple(c) for c in data["covers"] if c[0] in upper and c[1] in upper]
    return FinitePoset(sorted(upper), covers)


def wk_poset(k: int):
    """W_k: W_2 with k-2 further copies of L_1 stacked on top.

    Copy j (j >= 3) is named ``L{j}:m*``; its corner m1 is glued to the
    corner m9 of the copy below, so each step adds 8 points and 2 to the
    height. Returns ``(poset, a)``.
    """
    if k < 2:
        raise PosetError("W_k needs k >= 2")
    X, a = w2_poset()
    top = L1_TOP
    L = l1_poset()
    for j in range(3, k + 1):
        copy = L.prefixed(f"L{j}:")
        X = wedge(X, top, copy, f"L{j}:{L1_BOTTOM}")
        top = f"L{j}:{L1_TOP}"
    return X, a


def auto_level(X: FinitePoset) -> int:
    """Smallest l >= 2 whose W_l has longer maximal chains than X."""
    target = X.max_chain_cardinality()
    l = 2
    while 2 * l + 1 <= target:
        l += 1
    return l


def glue_w_at_beat_points(X: FinitePoset, l="auto"):
    """Wedge a fresh W_l, through its point a, onto every beat point of X.

    Returns ``(poset, attachments)`` where ``attachments`` maps each beat
    point to the name prefix of its copy of W_l.
    """
    if l == "auto":
        l = auto_level(X)
    if int(l) < 2:
        raise PosetError("W_l needs l >= 2")
    W, a = wk_poset(int(l))
    beats = beat_points(X)
    pts = list(X.points)
    covers = list(X.covers)
    attachments = {}
    for t, b in enumerate(beats):
        prefix = f"W{t}:"
        attachments[b] = prefix
        ren = lambda p: b if p == a else prefix + p
        pts += [prefix + p for p in W.points if p != a]
        covers += [(ren(x), ren(y)) for x, y in W.covers]
    return FinitePoset(pts, covers, check=False), attachments


def join_with_w2_plus_point(Y: FinitePoset, times: int = 1) -> FinitePoset:
    """Y joined (times) times with W_2 plus one isolated point p."""
    if times < 1:
        raise PosetError("times must be at least 1")
    W, _ = w2_poset()
    out = Y
    for t in range(times):
        layer = disjoint_union(W, FinitePoset(["p"], []))
        out = non_hausdorff_join(out, layer.prefixed(f"J{t}:"))
    return out
