"""One test per acceptance criterion. Each prints a single PASS/FAIL line
(also collected into the terminal summary)."""

import json
import random
import time
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import random_complex, random_connected_complex
from symrealize import cli
from symrealize.complexes import SimplicialComplex, automorphism_group, barycentric_subdivision, covering_walk
from symrealize.finite_spaces import (
    FinitePoset,
    face_poset,
    is_minimal,
    join_with_w2_plus_point,
    non_hausdorff_join,
    order_complex,
    poset_automorphisms,
    w2_poset,
)
from symrealize.gadgets import band_complex, w_complex
from symrealize.invariants import collapse, edge_path_pi1, homology, homology_table, reduced_homology
from symrealize.presentations import FiniteGroup, abelianization, enumerate_subgroups
from symrealize.rigidify import orbit_of_tuple, rigidify, rigidify_trivial

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def verdict(number, title, ok, seconds, budget, detail=""):
    ok = bool(ok) and seconds < budget
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({seconds:.1f}s of {budget}s){detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def cycle(n):
    return SimplicialComplex.from_facets([[f"c{i}", f"c{(i + 1) % n}"] for i in range(n)])


def h01(K):
    return [homology(K, 0), homology(K, 1)]


def test_criterion_01_gadgets():
    t0 = time.perf_counter()
    failures = []
    for k in range(2, 7):
        W = w_complex(k)
        if len(automorphism_group(W)) != 1 or not collapse(W):
            failures.append(f"W_{k}")
    for m in (2, 3, 4):
        for d in (3, 4):
            B = band_complex(m, d)
            auts = automorphism_group(B)
            ends = {"y1", f"y{m}"}
            stab = [f for f in auts if all(f(v) == v for v in ends)]
            if not collapse(B) or len(auts) != 4 or len(stab) != 1:
                failures.append(f"B({m},{d})")
    dt = time.perf_counter() - t0
    assert verdict(1, "W_k rigid+collapsible, bands |aut|=4 with trivial stabilizer", not failures, dt, 30,
                   f" failures={failures}" if failures else "")


def test_criterion_02_orbit_lemma():
    t0 = time.perf_counter()
    ok = True
    counts = {}
    for n in (3, 4):
        G = FiniteGroup.symmetric(n)
        subs = enumerate_subgroups(G)
        counts[n] = len(subs)
        ident = tuple(range(n))
        orbits = {frozenset(orbit_of_tuple([G.permutations[i] for i in H], ident)) for H in subs}
        ok &= len(orbits) == len(subs)
    ok &= counts == {3: 6, 4: 30}
    dt = time.perf_counter() - t0
    assert verdict(2, "distinct subgroups of S_3, S_4 give distinct orbits", ok, dt, 10,
                   f" subgroups={counts}")


@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_03_rigidification(n):
    t0 = time.perf_counter()
    K = cycle(n)
    auts = automorphism_group(K)
    V = K.vertices
    G = FiniteGroup.from_elements([tuple(V.index(f(v)) for v in V) for f in auts])
    P = covering_walk(K)
    checked, bad = 0, []
    for H in enumerate_subgroups(G):
        if len(H) < 2:
            continue
        maps = [auts[i] for i in H]
        R = rigidify(K, maps, P).complex
        AR = automorphism_group(R)
        restricted = {tuple((v, f(v)) for v in V) for f in AR}
        ok = len(AR) == len(maps) and restricted <= {m.pairs for m in maps} and h01(R) == h01(K)
        checked += 1
        if not ok:
            bad.append(len(maps))
    dt = time.perf_counter() - t0
    assert verdict(3, f"rigidify C_{n}: |aut| = |G| for every subgroup with |G| >= 2", not bad, dt, 120,
                   f" subgroups={checked}")


def test_criterion_04_trivial_rigidification():
    t0 = time.perf_counter()
    ok = True
    for n in (3, 4, 5):
        R = rigidify_trivial(cycle(n))
        ok &= len(automorphism_group(R)) == 1 and h01(R) == h01(cycle(n))
    dt = time.perf_counter() - t0
    assert verdict(4, "rigidify_trivial(C_n) is rigid with unchanged homology", ok, dt, 60)


def test_criterion_05_finite_space_bridge():
    t0 = time.perf_counter()
    rng = random.Random(20240605)
    bad = 0
    for _ in range(10):
        K = random_complex(rng, max_vertices=8, max_facets=7, max_dim=3)
        X = face_poset(K)
        same_aut = len(poset_automorphisms(X)) == len(automorphism_group(K))
        same_sd = order_complex(X).simplices == barycentric_subdivision(K).simplices
        bad += not (same_aut and same_sd)
    dt = time.perf_counter() - t0
    assert verdict(5, "aut(face poset) = aut(K) and K(X(K)) = sd(K) on 10 random complexes", bad == 0, dt, 60)


def test_criterion_06_w2_fixture():
    t0 = time.perf_counter()
    X, _ = w2_poset()
    K = order_complex(X)
    ok = (len(X) == 17 and is_minimal(X) and len(poset_automorphisms(X)) == 1
          and X.max_chain_cardinality() == 5
          and all(reduced_homology(K, q).is_trivial for q in range(K.dim + 1)) and collapse(K))
    dt = time.perf_counter() - t0
    assert verdict(6, "W_2: 17 points, minimal, rigid, chains of 5, acyclic, collapsible", ok, dt, 10)


def _verify(tmp_path, presentation):
    out = tmp_path / "run"
    code = cli.main(["verify", "--group", str(FIXTURES / "z2.json"),
                     "--presentation", str(FIXTURES / presentation),
                     "--action", str(FIXTURES / "inversion.json"), "--out", str(out)])
    report = json.loads((out / "report.json").read_text())
    return code, report


def _end_to_end_ok(code, report, h1, matrices):
    checks = {c["name"]: c for c in report["checks"]}
    res = report["results"]
    return (code == 0 and report["ok"]
            and checks["X is minimal"]["ok"]
            and checks["|aut(X)| equals |G|"]["value"] == 2
            and res["homology_X"][1] == h1
            and res["h1_action_X"] == matrices
            and checks["induced action on H_1 is equivalent to the input action"]["value"] is True)


def test_criterion_07_end_to_end_z(tmp_path):
    t0 = time.perf_counter()
    code, report = _verify(tmp_path, "z.json")
    ok = _end_to_end_ok(code, report, {"dim": 1, "rank": 1, "torsion": []}, {"e": [[1]], "s": [[-1]]})
    sizes = {s["name"]: s["sizes"] for s in report["stages"]}
    dt = time.perf_counter() - t0
    assert verdict(7, "Z/2 inverting Z: X minimal, |aut|=2, H_1=Z, matrices (1),(-1), equivalent", ok, dt, 300,
                   f" |X|={sizes['minimalize']['points']}")


@pytest.mark.slow
def test_criterion_08_end_to_end_z3(tmp_path):
    t0 = time.perf_counter()
    code, report = _verify(tmp_path, "z3.json")
    ok = _end_to_end_ok(code, report, {"dim": 1, "rank": 0, "torsion": [3]}, {"e": [[1]], "s": [[2]]})
    sizes = {s["name"]: s["sizes"] for s in report["stages"]}
    dt = time.perf_counter() - t0
    assert verdict(8, "Z/2 inverting Z/3: X minimal, |aut|=2, H_1=Z/3, inversion mod 3", ok, dt, 1800,
                   f" |K|={sizes['complexify']['f_vector']} |R|={sizes['rigidify']['f_vector']}"
                   f" |X|={sizes['minimalize']['points']}")


def test_criterion_09_suspension_and_join():
    t0 = time.perf_counter()
    circle = FinitePoset(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    S0 = FinitePoset(["n", "s"], [])
    ok = True
    for X in (circle, face_poset(cycle(3))):
        KX = order_complex(X)
        KJ = order_complex(non_hausdorff_join(X, S0))
        top = KX.dim + 1
        HX = homology_table(KX, top)
        HJ = homology_table(KJ, top + 1)
        ok &= all(HJ[q + 1] == HX[q] for q in range(1, top + 1))
        ok &= reduced_homology(KJ, 1) == reduced_homology(KX, 0)
        Y = join_with_w2_plus_point(X, 1)
        ok &= is_minimal(X) and is_minimal(Y)
        ok &= len(poset_automorphisms(Y)) == len(poset_automorphisms(X))
    dt = time.perf_counter() - t0
    assert verdict(9, "joining with S^0 shifts homology; W_2+point join keeps minimality and aut", ok, dt, 120)


def test_criterion_10_invariant_regression():
    t0 = time.perf_counter()
    rng = random.Random(1729)
    bad = []
    for trial in range(25):
        K = random_connected_complex(rng, max_vertices=7, max_dim=3)
        top = K.dim
        if homology_table(barycentric_subdivision(K), top) != homology_table(K, top):
            bad.append((trial, "subdivision"))
        if abelianization(edge_path_pi1(K)) != homology(K, 1):
            bad.append((trial, "pi1"))
        counts = K.membership_counts()
        P = covering_walk(K)
        for f in automorphism_group(K):
            if any(counts[v] != counts[f(v)] for v in K.vertices) or not K.is_path([f(v) for v in P]):
                bad.append((trial, "automorphism"))
        X = face_poset(K)
        for f in poset_automorphisms(X):
            m = f.as_dict()
            if any(X.signature(X.index[p]) != X.signature(X.index[m[p]]) for p in X.points):
                bad.append((trial, "signature"))
    dt = time.perf_counter() - t0
    assert verdict(10, "subdivision, pi_1/H_1 and automorphism invariants on 25 random complexes",
                   not bad, dt, 180, f" failures={bad}" if bad else "")
