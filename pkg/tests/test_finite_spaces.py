import pytest
from hypothesis import given, settings

from oracles import (
    brute_beat_points,
    brute_max_chain,
    brute_poset_automorphisms,
    complexes,
    poset_relation,
)
from symrealize.complexes import SimplicialComplex, automorphism_group, barycentric_subdivision
from symrealize.finite_spaces import (
    FinitePoset,
    PosetError,
    auto_level,
    beat_points,
    chains,
    face_poset,
    glue_w_at_beat_points,
    is_minimal,
    join_with_w2_plus_point,
    l1_poset,
    non_hausdorff_join,
    order_complex,
    order_complex_skeleton,
    poset_automorphisms,
    w2_poset,
    wedge,
    wk_poset,
)
from symrealize.invariants import collapse, homology_table, reduced_homology

CIRCLE = FinitePoset(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def cycle(n):
    return SimplicialComplex.from_facets([[f"c{i}", f"c{(i + 1) % n}"] for i in range(n)])


def test_cover_relation_must_be_reduced():
    with pytest.raises(PosetError):
        FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    with pytest.raises(PosetError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_from_relations_takes_transitive_reduction():
    X = FinitePoset.from_relations("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert X.covers == (("a", "b"), ("b", "c"))
    assert X.leq("a", "c") and not X.leq("c", "a")


def test_json_and_dot():
    X = FinitePoset.from_json(CIRCLE.to_json())
    assert X.covers == CIRCLE.covers
    dot = X.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 4


def test_circle_model():
    assert is_minimal(CIRCLE)
    assert len(poset_automorphisms(CIRCLE)) == 4
    assert [str(H) for H in homology_table(order_complex(CIRCLE))] == ["Z", "Z"]


def test_face_poset_of_triangle_boundary():
    X = face_poset(cycle(3))
    assert len(X) == 6 and len(X.covers) == 6
    assert is_minimal(X)
    assert order_complex(X).simplices == barycentric_subdivision(cycle(3)).simplices


def test_beat_points_of_a_chain():
    X = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert beat_points(X) == ["a", "b", "c"]


def test_w2_fixture():
    X, a = w2_poset()
    assert len(X) == 17 and a == "m17"
    assert len(X.covers) == 26
    assert a in X.minimal_points()
    assert is_minimal(X)
    assert brute_beat_points(X) == []
    assert len(brute_poset_automorphisms(X)) == 1
    assert X.max_chain_cardinality() == brute_max_chain(X) == 5
    K = order_complex(X)
    assert K.f_vector() == [17, 69, 98, 65, 20]
    assert all(reduced_homology(K, q).is_trivial for q in range(K.dim + 1))
    assert collapse(K)


def test_w2_is_two_copies_of_l1():
    X, _ = w2_poset()
    L = l1_poset()
    assert len(L) == 9 and len(L.covers) == 13
    lower = FinitePoset([p for p in X.points if p not in L.points or p == "m1"],
                        [c for c in X.covers if not (set(c) <= set(L.points))])
    assert len(lower) == 9 and len(lower.covers) == 13
    # each half has a reflection; only the way they are glued kills it
    assert len(brute_poset_automorphisms(L)) == 2
    assert len(brute_poset_automorphisms(lower)) == 2


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_wk_rigid_minimal_contractible(k):
    X, a = wk_poset(k)
    assert len(X) == 17 + 8 * (k - 2)
    assert X.max_chain_cardinality() == 2 * k + 1
    assert is_minimal(X)
    assert len(poset_automorphisms(X)) == 1
    K = order_complex(X)
    assert collapse(K)


def test_wk_rigidity_by_brute_force():
    X, _ = wk_poset(3)
    assert len(brute_poset_automorphisms(X)) == 1


def test_auto_level_exceeds_chain_length():
    assert auto_level(CIRCLE) == 2
    X = face_poset(SimplicialComplex.from_facets([list("abcde")]))  # chains of cardinality 5
    assert auto_level(X) == 3


def test_glue_w_at_beat_points_of_an_edge():
    X = face_poset(SimplicialComplex.from_facets([["a", "b"]]))
    Y, att = glue_w_at_beat_points(X)
    # the top cell covers two points, so only the vertices are beat points
    assert sorted(att) == ["(a)", "(b)"]
    assert len(Y) == 3 + 2 * 16
    assert is_minimal(Y)
    assert brute_beat_points(Y) == []
    assert len(poset_automorphisms(Y)) == 2
    assert collapse(order_complex(Y))


def test_wedge_and_join():
    P = FinitePoset(["p"], [])
    assert len(wedge(CIRCLE, "a", P.relabel({"p": "q"}), "q")) == 4
    S0 = FinitePoset(["x", "y"], [])
    J = non_hausdorff_join(S0, S0)
    assert len(J) == 4 and len(J.covers) == 4
    assert [str(H) for H in homology_table(order_complex(J))] == ["Z", "Z"]


def test_join_with_w2_plus_point_keeps_automorphisms():
    Y = join_with_w2_plus_point(CIRCLE, 1)
    assert is_minimal(Y)
    assert len(poset_automorphisms(Y)) == 4
    assert len(Y) == 4 + 18


def test_chains_and_skeleton_agree():
    X, _ = w2_poset()
    levels = chains(X)
    assert [len(c) for c in levels] == [17, 69, 98, 65, 20]
    sk = order_complex_skeleton(X, 2)
    assert [s.shape[0] for s in sk] == [17, 69, 98]


@settings(max_examples=30, deadline=None)
@given(complexes(max_vertices=5, max_facets=4))
def test_face_poset_automorphisms_match(K):
    X = face_poset(K)
    assert len(poset_automorphisms(X)) == len(automorphism_group(K))
    assert order_complex(X).simplices == barycentric_subdivision(K).simplices


@settings(max_examples=30, deadline=None)
@given(complexes(max_vertices=5, max_facets=4))
def test_beat_points_and_signatures(K):
    X = face_poset(K)
    assert sorted(beat_points(X)) == brute_beat_points(X)
    for f in poset_automorphisms(X):
        m = f.as_dict()
        for p in X.points:
            assert X.signature(X.index[p]) == X.signature(X.index[m[p]])
        rel = poset_relation(X)
        assert {(m[a], m[b]) for a, b in rel} == rel


@settings(max_examples=20, deadline=None)
@given(complexes(max_vertices=5, max_facets=4))
def test_poset_automorphisms_match_brute_force(K):
    X = face_poset(K)
    fast = {f.pairs for f in poset_automorphisms(X)}
    slow = {tuple(sorted(m.items())) for m in brute_poset_automorphisms(X)}
    assert fast == slow


@settings(max_examples=20, deadline=None)
@given(complexes(max_vertices=5, max_facets=3))
def test_gluing_w_keeps_homology_and_kills_beat_points(K):
    X = face_poset(K)
    Y, _ = glue_w_at_beat_points(X)
    assert is_minimal(Y)
    top = K.dim + 1
    assert homology_table(order_complex(Y), top) == homology_table(order_complex(X), top)
