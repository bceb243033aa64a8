"""Rigid contractible gadgets: paths P_k, the complexes W_k, the pieces U_i^d
and the bands B(m, d) assembled from them.

Vertex names inside one gadget: ``x{i}``, ``y{i}``, ``w{i}`` for the
distinguished vertices, ``v[j,i]`` for the extra vertices of the top simplex
of piece i, ``u[k,i]`` for the k-th vertex of the path hanging from
``w{i}`` and ``p[k,j,i]`` for the k-th vertex of the path hanging from
``v[j,i]``. Callers that glue several gadgets prefix these names.
"""

from __future__ import annotations

from .complexes import ComplexError, SimplicialComplex


def _path(start, names):
    seq = [start] + list(names)
    return [(a, b) for a, b in zip(seq, seq[1:])]


def path_complex(k: int) -> SimplicialComplex:
    """P_k: vertices u0..uk joined in a line."""
    if k < 1:
        raise ComplexError("path length must be at least 1")
    return SimplicialComplex.from_facets(_path("u0", [f"u{i}" for i in range(1, k + 1)]))


def w_complex(k: int) -> SimplicialComplex:
    """W_k: a full triangle v0 v1 v2 with a path of length k at v0 and one of
    length k+1 at v1."""
    if k < 2:
        raise ComplexError("W_k needs k >= 2")
    facets = [("v0", "v1", "v2")]
    facets += _path("v0", [f"u{i}" for i in range(1, k + 1)])
    facets += _path("v1", [f"t{i}" for i in range(1, k + 2)])
    return SimplicialComplex.from_facets(facets)


def _piece_facets(i, d):
    top = [f"x{i - 1}", f"x{i}", f"y{i}", f"w{i}"] + [f"v[{j},{i}]" for j in range(1, d - 2)]
    facets = [tuple(top)]
    facets += _path(f"w{i}", [f"u[{k},{i}]" for k in range(1, i + 1)])
    for j in range(1, d - 2):
        facets += _path(f"v[{j},{i}]", [f"p[{k},{j},{i}]" for k in range(1, i + j + 1)])
    return facets


def u_complex(i: int, d: int) -> SimplicialComplex:
    """U_i^d: a d-simplex on x_{i-1}, x_i, y_i, w_i, v_1..v_{d-3} with a path
    of length i at w_i and one of length i+j at each v_j."""
    if d < 3:
        raise ComplexError("U pieces need dimension d >= 3")
    if i < 1:
        raise ComplexError("U pieces are indexed from 1")
    return SimplicialComplex.from_facets(_piece_facets(i, d))


def band_complex(m: int, d: int) -> SimplicialComplex:
    """B(m, d): pieces U_1..U_m chained along x_1..x_{m-1}, joined by the
    triangles x_i w_i w_{i+1} (which contain the edges w_i w_{i+1}).

    Closing x_i w_i x_{i+1} instead would leave the loop w_i x_{i+1} w_{i+1}
    unfilled and put x_m in one more triangle than y_m.
    The spine x_0, ..., x_m is the part that gets glued onto a walk.
    """
    if m < 2:
        raise ComplexError("bands need m >= 2 pieces")
    if d < 3:
        raise ComplexError("bands need dimension d >= 3")
    facets = []
    for i in range(1, m + 1):
        facets += _piece_facets(i, d)
    for i in range(1, m):
        facets.append((f"x{i}", f"w{i}", f"w{i + 1}"))
    return SimplicialComplex.from_facets(facets)


def band_roles(m: int):
    """Distinguished vertices of a band: spine ends and the outer y's."""
    return {"x0": "x0", "xm": f"x{m}", "y1": "y1", "ym": f"y{m}"}
