"""Rigidification: gluing bands along the G-translates of a covering walk so
that the automorphism group of the result is exactly G."""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ComplexError, SimplicialComplex, SimplicialMap, glue
from .gadgets import band_complex, w_complex


def orbit_of_tuple(perms, t):
    """Orbit of the tuple ``t`` under permutations given as dicts or sequences."""
    out = set()
    for p in perms:
        try:
            out.add(tuple(p[a] for a in t))
        except (KeyError, IndexError):
            raise ValueError(f"tuple {t!r} leaves the permuted set") from None
    return out


@dataclass
class RigidificationResult:
    complex: SimplicialComplex
    base: SimplicialComplex
    walk: tuple
    group: list  # automorphisms of the base, identity first
    bands: dict = field(default_factory=dict)  # band name -> vertex set (including glued spine)
    action_map: dict = field(default_factory=dict)  # band name of g -> SimplicialMap on the result

    def band_of(self, g: SimplicialMap):
        return f"B{self.group.index(g)}"

    def action_json(self):
        return {name: f.as_dict() for name, f in self.action_map.items()}


def _check_group(K, G):
    maps = list(G)
    keys = [m.pairs for m in maps]
    if len(set(keys)) != len(keys):
        raise ComplexError("group list contains repeated automorphisms")
    for m in maps:
        if not m.is_automorphism_of(K):
            raise ComplexError(f"map {m.as_dict()} is not an automorphism of K")
    index = {k: i for i, k in enumerate(keys)}
    for a in maps:
        for b in maps:
            if a.compose(b).pairs not in index:
                raise ComplexError("group list is not closed under composition")
    return maps, index


def rigidify(K: SimplicialComplex, G, P, band_dim=None) -> RigidificationResult:
    """R_G(K; P): K with one band glued along g.P for every g in G.

    ``G`` is a list of automorphisms of K forming a group of order >= 2,
    ``P`` a walk covering every vertex. Band vertices outside K are named
    ``B{index of g}/{band label}``.
    """
    if not K.is_connected():
        raise ComplexError("rigidify needs a connected complex")
    maps, index = _check_group(K, G)
    if len(maps) < 2:
        raise ComplexError("trivial group: use rigidify_trivial")
    P = tuple(P)
    if set(P) != set(K.vertices):
        raise ComplexError("walk does not cover every vertex")
    if any(a == b for a, b in zip(P, P[1:])):
        raise ComplexError("walk repeats a vertex in consecutive positions")
    if not K.is_path(P):
        raise ComplexError("walk uses a non-edge")
    m = len(P) - 1
    if m < 2:
        raise ComplexError("walk must have length at least 2")
    ident = SimplicialMap.identity(K.vertices)
    maps.sort(key=lambda f: (f != ident, [w for _, w in f.pairs]))
    index = {f.pairs: i for i, f in enumerate(maps)}
    D = band_dim if band_dim is not None else max(3, K.dim + 2)
    B = band_complex(m, D)
    spine = {f"x{j}" for j in range(m + 1)}
    parts = [K]
    idents = []
    for gi, g in enumerate(maps):
        prefix = f"B{gi}/"
        parts.append(B.relabel({v: prefix + v for v in B.vertices}))
        gm = g.as_dict()
        idents += [(prefix + f"x{j}", gm[P[j]]) for j in range(m + 1)]
    R = glue(parts, idents)
    bands = {}
    for gi, g in enumerate(maps):
        gm = g.as_dict()
        bands[f"B{gi}"] = frozenset(gm[P[j]] for j in range(m + 1)) | frozenset(
            f"B{gi}/{v}" for v in B.vertices if v not in spine)
    action = {}
    for hi, h in enumerate(maps):
        hm = h.as_dict()
        vm = {}
        for v in R.vertices:
            if v in hm:
                vm[v] = hm[v]
            else:
                band, label = v.split("/", 1)
                target = index[h.compose(maps[int(band[1:])]).pairs]
                vm[v] = f"B{target}/{label}"
        f = SimplicialMap.from_dict(vm)
        action[f"B{hi}"] = f
    return RigidificationResult(R, K, P, maps, bands, action)


def rigidify_trivial(K: SimplicialComplex) -> SimplicialComplex:
    """Glue W_{n+i} at the i-th vertex (sorted order) through its vertex v2."""
    n = len(K.vertices)
    parts = [K]
    idents = []
    for i, x in enumerate(K.vertices, start=1):
        W = w_complex(n + i)
        prefix = f"W{i}/"
        parts.append(W.relabel({v: prefix + v for v in W.vertices}))
        idents.append((x, prefix + "v2"))
    return glue(parts, idents)
