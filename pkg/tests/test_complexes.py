import itertools

import pytest
from hypothesis import given, settings

from oracles import brute_complex_automorphisms, complexes
from symrealize.complexes import (
    ComplexError,
    DeltaComplex,
    SimplicialComplex,
    SimplicialMap,
    automorphism_group,
    barycentric_subdivision,
    covering_walk,
    delta_subdivide,
    glue,
    spanning_tree,
    to_simplicial_after_two_subdivisions,
)


def cycle(n):
    return SimplicialComplex.from_facets([[f"c{i}", f"c{(i + 1) % n}"] for i in range(n)])


def boundary_of_simplex(n):
    V = [f"v{i}" for i in range(n + 1)]
    return SimplicialComplex.from_facets(itertools.combinations(V, n))


def test_downward_closure_and_f_vector():
    K = SimplicialComplex.from_facets([["a", "b", "c"], ["c", "d"]])
    assert K.f_vector() == [4, 4, 1]
    assert K.dim == 2
    assert sorted(K.facets) == [("a", "b", "c"), ("c", "d")]
    assert K.euler_characteristic() == 1


def test_isolated_declared_vertex():
    K = SimplicialComplex.from_facets([["a", "b"]], vertices=["a", "b", "z"])
    assert K.vertices == ("a", "b", "z")
    assert not K.is_connected()
    assert len(K.components()) == 2


def test_rejects_bad_facets():
    with pytest.raises(ComplexError):
        SimplicialComplex.from_facets([["a", "a"]])
    with pytest.raises(ComplexError):
        SimplicialComplex.from_facets([[]])
    with pytest.raises(ComplexError):
        SimplicialComplex.from_facets([["a", "q"]], vertices=["a"])


def test_json_round_trip():
    K = SimplicialComplex.from_facets([["a", "b", "c"], ["c", "d"]])
    assert SimplicialComplex.from_json(K.to_json()).simplices == K.simplices


def test_membership_counts_of_triangle_with_tail():
    K = SimplicialComplex.from_facets([["a", "b", "c"], ["c", "d"]])
    counts = K.membership_counts()
    assert counts["c"] != counts["a"]
    assert counts["a"] == counts["b"]


def test_barycentric_subdivision_of_triangle():
    sd = barycentric_subdivision(SimplicialComplex.from_facets([["a", "b", "c"]]))
    assert sd.f_vector() == [7, 12, 6]


@pytest.mark.parametrize("n, order", [(3, 6), (4, 8), (5, 10), (6, 12)])
def test_cycle_automorphisms_are_dihedral(n, order):
    assert len(automorphism_group(cycle(n))) == order


def test_boundary_of_tetrahedron_has_s4():
    assert len(automorphism_group(boundary_of_simplex(3))) == 24


def test_point_has_only_the_identity():
    assert len(automorphism_group(SimplicialComplex.from_facets([["p"]]))) == 1


def test_map_algebra():
    f = SimplicialMap.from_dict({"a": "b", "b": "c", "c": "a"})
    assert f.compose(f.inverse()).is_identity()
    assert f.compose(f).compose(f).is_identity()
    assert f("a") == "b"
    assert f.is_automorphism_of(cycle(3).relabel({"c0": "a", "c1": "b", "c2": "c"}))


def test_spanning_tree_and_walk_cover():
    K = cycle(5)
    order, parent, tour = spanning_tree(K)
    assert set(order) == set(K.vertices)
    assert sum(p is None for p in parent.values()) == 1
    P = covering_walk(K)
    assert set(P) == set(K.vertices)
    assert K.is_path(P)


def test_spanning_tree_rejects_disconnected():
    with pytest.raises(ComplexError):
        spanning_tree(SimplicialComplex.from_facets([["a"], ["b"]]))


def test_glue_names_classes_after_earliest_part():
    A = SimplicialComplex.from_facets([["a", "b"]])
    B = SimplicialComplex.from_facets([["x", "y"]])
    G = glue([A, B], [("b", "x")])
    assert G.vertices == ("a", "b", "y")
    assert ("b", "y") in G.simplices


def test_glue_rejects_collapsing_a_simplex():
    A = SimplicialComplex.from_facets([["a", "b"]])
    with pytest.raises(ComplexError):
        glue([A], [("a", "b")])


def test_two_subdivisions_of_a_loop_give_a_simplicial_circle():
    # one vertex, one loop edge
    Y = DeltaComplex({"p": (), "e": ("p", "p")})
    K = to_simplicial_after_two_subdivisions(Y)
    assert K.f_vector() == [4, 4]
    assert len(automorphism_group(K)) == 8
    assert delta_subdivide(Y).counts() == [2, 2]


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6))
def test_automorphism_search_matches_brute_force(K):
    fast = {m.pairs for m in automorphism_group(K)}
    slow = {tuple(sorted(m.items())) for m in brute_complex_automorphisms(K)}
    assert fast == slow


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6))
def test_automorphisms_preserve_membership_counts(K):
    counts = K.membership_counts()
    for f in automorphism_group(K):
        assert all(counts[v] == counts[f(v)] for v in K.vertices)


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6))
def test_subdivision_euler_characteristic(K):
    assert barycentric_subdivision(K).euler_characteristic() == K.euler_characteristic()


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6, connected=True))
def test_automorphisms_map_the_walk_to_walks(K):
    P = covering_walk(K)
    for f in automorphism_group(K):
        assert K.is_path([f(v) for v in P])


@settings(max_examples=30, deadline=None)
@given(complexes(max_vertices=6))
def test_automorphisms_form_a_group(K):
    auts = automorphism_group(K)
    keys = {f.pairs for f in auts}
    assert SimplicialMap.identity(K.vertices).pairs in keys
    for f in auts:
        assert f.inverse().pairs in keys
        for g in auts:
            assert f.compose(g).pairs in keys


def test_glue_is_associative_for_disjoint_identifications():
    A = SimplicialComplex.from_facets([["a", "b"]])
    B = SimplicialComplex.from_facets([["c", "d"]])
    C = SimplicialComplex.from_facets([["e", "f", "g"]])
    once = glue([A, B, C], [("b", "c"), ("d", "e")])
    twice = glue([glue([A, B], [("b", "c")]), C], [("d", "e")])
    assert once.simplices == twice.simplices
