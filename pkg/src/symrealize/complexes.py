"""Abstract simplicial complexes and 2-dimensional Delta-complexes.

Vertex labels are strings. A simplex is a sorted tuple of labels; every
container in this module is kept sorted so iteration order, search order
and serialisation are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from . import _autsearch


class ComplexError(ValueError):
    """Invalid simplicial or Delta-complex data."""


def simplex_name(simplex) -> str:
    """Canonical label of the barycentre of ``simplex``: ``"(a,b,c)"``."""
    return "(" + ",".join(simplex) + ")"


class SimplicialComplex:
    """A finite abstract simplicial complex, immutable after construction.

    Build instances with :meth:`from_facets`; the plain constructor trusts
    its input to be downward closed.
    """

    __slots__ = ("vertices", "simplices", "_facets", "_by_dim", "_vindex")

    def __init__(self, vertices, simplices):
        self.vertices = tuple(sorted(vertices))
        self.simplices = frozenset(simplices)
        self._facets = None
        self._by_dim = None
        self._vindex = None

    @classmethod
    def from_facets(cls, facets, vertices=None) -> "SimplicialComplex":
        declared = None if vertices is None else set(vertices)
        simplices = set()
        seen = set()
        for facet in facets:
            facet = list(facet)
            if not facet:
                raise ComplexError("empty facet")
            if len(set(facet)) != len(facet):
                raise ComplexError(f"duplicate vertex in facet {facet!r}")
            if declared is not None:
                unknown = set(facet) - declared
                if unknown:
                    raise ComplexError(f"facet {facet!r} uses undeclared vertices {sorted(unknown)}")
            top = tuple(sorted(facet))
            if top in seen:
                continue
            seen.add(top)
            for k in range(1, len(top) + 1):
                simplices.update(combinations(top, k))
        verts = set(declared) if declared is not None else set()
        verts.update(s[0] for s in simplices if len(s) == 1)
        simplices.update((v,) for v in verts)
        return cls(verts, simplices)

    # ---- basic queries -------------------------------------------------

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def by_dim(self):
        if self._by_dim is None:
            table = {}
            for s in self.simplices:
                table.setdefault(len(s) - 1, []).append(s)
            self._by_dim = {d: sorted(v) for d, v in table.items()}
        return self._by_dim

    def simplices_of_dim(self, d):
        return self.by_dim().get(d, [])

    @property
    def facets(self):
        if self._facets is None:
            covered = set()
            for s in self.simplices:
                if len(s) > 1:
                    covered.update(combinations(s, len(s) - 1))
            self._facets = sorted((s for s in self.simplices if s not in covered),
                                  key=lambda s: (len(s), s))
        return self._facets

    def __len__(self):
        return len(self.simplices)

    def __contains__(self, simplex):
        return tuple(sorted(simplex)) in self.simplices

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex) and self.vertices == other.vertices
                and self.simplices == other.simplices)

    def __hash__(self):
        return hash((self.vertices, self.simplices))

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.simplices)} simplices, dim {self.dim})"

    def f_vector(self):
        table = self.by_dim()
        return [len(table.get(d, [])) for d in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def vertex_index(self):
        if self._vindex is None:
            self._vindex = {v: i for i, v in enumerate(self.vertices)}
        return self._vindex

    def neighbours(self):
        adj = {v: [] for v in self.vertices}
        for a, b in self.simplices_of_dim(1):
            adj[a].append(b)
            adj[b].append(a)
        for v in adj:
            adj[v].sort()
        return adj

    def membership_counts(self):
        """Per vertex, the tuple (#simplices of dim n containing it) for n = 1..dim."""
        top = max(self.dim, 0)
        counts = {v: [0] * top for v in self.vertices}
        for s in self.simplices:
            if len(s) > 1:
                for v in s:
                    counts[v][len(s) - 2] += 1
        return {v: tuple(c) for v, c in counts.items()}

    def components(self):
        adj = self.neighbours()
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and len(self.components()) == 1

    def relabel(self, mapping) -> "SimplicialComplex":
        """Apply an injective relabelling ``mapping`` (missing labels kept)."""
        f = lambda v: mapping.get(v, v)
        return SimplicialComplex((f(v) for v in self.vertices),
                                 (tuple(sorted(map(f, s))) for s in self.simplices))

    def is_path(self, walk) -> bool:
        return all((min(a, b), max(a, b)) in self.simplices for a, b in zip(walk, walk[1:]))

    # ---- serialisation -----------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_facets(data["facets"], vertices=data.get("vertices"))


@dataclass(frozen=True)
class SimplicialMap:
    """A vertex map between complexes, stored as a sorted tuple of pairs."""

    pairs: tuple

    @classmethod
    def from_dict(cls, mapping) -> "SimplicialMap":
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def identity(cls, vertices) -> "SimplicialMap":
        return cls(tuple((v, v) for v in sorted(vertices)))

    def as_dict(self):
        return dict(self.pairs)

    def __call__(self, v):
        return self.as_dict()[v]

    def image(self, simplex):
        m = self.as_dict()
        return tuple(sorted(m[v] for v in simplex))

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ other``: apply ``other`` first."""
        m = self.as_dict()
        return SimplicialMap(tuple((v, m[w]) for v, w in other.pairs))

    def inverse(self) -> "SimplicialMap":
        return SimplicialMap(tuple(sorted((w, v) for v, w in self.pairs)))

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.pairs)

    def is_automorphism_of(self, K: SimplicialComplex) -> bool:
        m = self.as_dict()
        if sorted(m) != list(K.vertices) or sorted(m.values()) != list(K.vertices):
            return False
        return all(tuple(sorted(m[v] for v in s)) in K.simplices for s in K.simplices)


# ---------------------------------------------------------------------------
# subdivision


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """sd(K): vertices are the simplices of K, simplices are flags of them."""
    simplices = set()
    for top in K.facets:
        for flag in _flags(top):
            simplices.add(tuple(sorted(simplex_name(s) for s in flag)))
    verts = [simplex_name(s) for s in K.simplices]
    simplices.update((v,) for v in verts)
    return SimplicialComplex(verts, _close(simplices))


def _flags(top):
    """All maximal flags s_0 < s_1 < ... < top of faces of ``top``."""
    if len(top) == 1:
        yield [top]
        return
    for i in range(len(top)):
        face = top[:i] + top[i + 1:]
        for flag in _flags(face):
            yield flag + [top]


def _close(simplices):
    out = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


class DeltaComplex:
    """A Delta-complex of dimension at most 2.

    ``faces[c]`` is the tuple ``(d_0 c, ..., d_n c)`` of face names of an
    n-cell ``c``; 0-cells have an empty tuple. ``origin`` is filled in by
    :func:`delta_subdivide` and records, for each new cell, the old cell and
    the flag of vertex-subset bitmasks it came from.
    """

    MAX_DIM = 2

    def __init__(self, faces, origin=None):
        self.faces = dict(faces)
        self.origin = origin or {}
        self.validate()

    def dim_of(self, cell):
        return len(self.faces[cell]) - 1 if self.faces[cell] else 0

    @property
    def dim(self):
        return max((self.dim_of(c) for c in self.faces), default=-1)

    def cells(self, d):
        return sorted(c for c in self.faces if self.dim_of(c) == d)

    def counts(self):
        return [len(self.cells(d)) for d in range(self.dim + 1)]

    def validate(self):
        for c, fs in self.faces.items():
            d = len(fs) - 1 if fs else 0
            if d > self.MAX_DIM:
                raise ComplexError(f"cell {c!r} has dimension {d}; only dimension <= 2 is supported")
            if fs and d == 0:
                raise ComplexError(f"cell {c!r} has a single face")
            for f in fs:
                if f not in self.faces:
                    raise ComplexError(f"cell {c!r} references unknown face {f!r}")
                if self.dim_of(f) != d - 1:
                    raise ComplexError(f"face {f!r} of {c!r} has the wrong dimension")
            for j in range(len(fs)):
                for i in range(j):
                    if d >= 2 and self.faces[fs[j]][i] != self.faces[fs[i]][j - 1]:
                        raise ComplexError(f"simplicial identity fails on {c!r} at ({i},{j})")

    def face_by_subset(self, cell, mask):
        """Face of ``cell`` spanned by the vertex subset ``mask`` (bitmask)."""
        n = self.dim_of(cell)
        cur = cell
        for i in range(n, -1, -1):
            if not mask >> i & 1:
                cur = self.faces[cur][i]
        return cur

    def vertex_tuple(self, cell):
        n = self.dim_of(cell)
        return tuple(self.face_by_subset(cell, 1 << i) for i in range(n + 1))


def _sd_name(cell, flag):
    return cell + "/" + ".".join(str(m) for m in flag)


def _full_flags(n):
    """Strictly increasing chains of nonempty subsets of {0..n} ending at the full set."""
    full = (1 << (n + 1)) - 1
    out = []

    def extend(chain):
        out.append(tuple(chain))
        lo = chain[0]
        sub = (lo - 1) & lo
        while sub:
            extend([sub] + chain)
            sub = (sub - 1) & lo

    extend([full])
    return out


def _transport(flag, mask):
    """Re-express subsets of ``mask`` as subsets of {0..|mask|-1}."""
    positions = [i for i in range(mask.bit_length()) if mask >> i & 1]
    out = []
    for m in flag:
        out.append(sum(1 << k for k, p in enumerate(positions) if m >> p & 1))
    return tuple(out)


def delta_subdivide(Y: DeltaComplex) -> DeltaComplex:
    """Barycentric subdivision of a Delta-complex of dimension <= 2."""
    if Y.dim > DeltaComplex.MAX_DIM:
        raise ComplexError("delta_subdivide supports dimension <= 2 only")
    faces = {}
    origin = {}
    for cell in sorted(Y.faces):
        n = Y.dim_of(cell)
        for flag in _full_flags(n):
            name = _sd_name(cell, flag)
            origin[name] = (cell, flag)
            k = len(flag) - 1
            if k == 0:
                faces[name] = ()
                continue
            fs = []
            for i in range(k + 1):
                if i < k:
                    fs.append(_sd_name(cell, flag[:i] + flag[i + 1:]))
                else:
                    sub = flag[k - 1]
                    tau = Y.face_by_subset(cell, sub)
                    fs.append(_sd_name(tau, _transport(flag[:k], sub)))
            faces[name] = tuple(fs)
    return DeltaComplex(faces, origin)


def subdivide_cell_map(Y_sd: DeltaComplex, phi) -> dict:
    """Lift a cellular automorphism ``phi`` (old cell name -> old cell name) to sd(Y)."""
    return {name: _sd_name(phi[cell], flag) for name, (cell, flag) in Y_sd.origin.items()}


def delta_to_simplicial(Y: DeltaComplex) -> SimplicialComplex:
    """Read each cell as its set of vertices; fails unless Y is already simplicial."""
    seen = {}
    for cell in Y.faces:
        verts = Y.vertex_tuple(cell)
        key = tuple(sorted(verts))
        if len(set(verts)) != len(verts):
            raise ComplexError(f"cell {cell!r} has repeated vertices")
        if key in seen:
            raise ComplexError(f"cells {seen[key]!r} and {cell!r} share the vertex set {key}")
        seen[key] = cell
    return SimplicialComplex(Y.cells(0), seen.keys())


def to_simplicial_after_two_subdivisions(Y: DeltaComplex) -> SimplicialComplex:
    return delta_to_simplicial(delta_subdivide(delta_subdivide(Y)))


# ---------------------------------------------------------------------------
# walks, automorphisms, gluing


def spanning_tree(K: SimplicialComplex, root=None):
    """Depth-first spanning tree of the 1-skeleton.

    Returns ``(order, parent, tour)`` where ``tour`` is the vertex sequence
    of the Euler tour of the tree.
    """
    if not K.vertices:
        raise ComplexError("empty complex")
    adj = K.neighbours()
    root = K.vertices[0] if root is None else root
    parent = {root: None}
    order = [root]
    tour = [root]
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in parent:
                parent[w] = v
                order.append(w)
                tour.append(w)
                stack.append((w, iter(adj[w])))
                break
        else:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])
    if len(parent) != len(K.vertices):
        raise ComplexError("complex is not connected")
    return order, parent, tour


def covering_walk(K: SimplicialComplex):
    """Euler tour of the DFS spanning tree, cut after the last new vertex."""
    if len(K.vertices) < 2:
        raise ComplexError("covering_walk needs at least two vertices")
    order, _, tour = spanning_tree(K)
    last = order[-1]
    cut = tour.index(last)
    return tuple(tour[: cut + 1])


def complex_graph(K: SimplicialComplex):
    """Vertex/facet incidence graph coloured by membership-count vectors."""
    vindex = K.vertex_index()
    nv = len(K.vertices)
    facets = K.facets
    counts = K.membership_counts()
    arcs = []
    for j, f in enumerate(facets):
        node = nv + j
        for v in f:
            arcs.append((vindex[v], node))
            arcs.append((node, vindex[v]))
    keys = [(0, counts[v]) for v in K.vertices] + [(1, (len(f),)) for f in facets]
    colors = _autsearch.initial_colors(keys)
    return _autsearch.ColoredGraph(nv + len(facets), arcs, [0] * len(arcs), colors)


def automorphism_group(K: SimplicialComplex, node_budget=None):
    """All automorphisms of K, sorted, as :class:`SimplicialMap` objects.

    Vertices are first partitioned by their membership-count vectors (an
    automorphism preserves the number of n-simplices through each vertex),
    then refined and searched by individualisation.
    """
    if not K.vertices:
        return [SimplicialMap(())]
    graph = complex_graph(K)
    nv = len(K.vertices)
    verts = K.vertices
    out = []
    for perm in _autsearch.automorphisms(graph, node_budget=node_budget):
        out.append(SimplicialMap(tuple((verts[i], verts[int(perm[i])]) for i in range(nv))))
    return sorted(out, key=lambda m: [w for _, w in m.pairs])


def glue(parts, identifications=()):
    """Disjoint union of ``parts`` modulo the vertex identifications.

    Parts must use pairwise disjoint labels. Each class of identified
    vertices is named after its member from the earliest part (smallest
    label within that part).
    """
    owner = {}
    for i, P in enumerate(parts):
        for v in P.vertices:
            if v in owner:
                raise ComplexError(f"label {v!r} occurs in parts {owner[v]} and {i}")
            owner[v] = i
    parent = {v: v for v in owner}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in identifications:
        if a not in owner or b not in owner:
            raise ComplexError(f"unknown vertex in identification {a!r} ~ {b!r}")
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if (owner[rb], rb) < (owner[ra], ra):
            ra, rb = rb, ra
        parent[rb] = ra
    rep = {v: find(v) for v in owner}
    simplices = set()
    for P in parts:
        for s in P.simplices:
            img = tuple(sorted({rep[v] for v in s}))
            if len(img) != len(s):
                raise ComplexError(f"identification collapses simplex {s}")
            simplices.add(img)
    return SimplicialComplex(set(rep.values()), simplices)
