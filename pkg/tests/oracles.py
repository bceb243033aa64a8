"""Brute-force reference implementations used to cross-check the library.

Everything here is deliberately naive: exhaustive permutation search,
exhaustive homomorphism enumeration, rational/modular rank computations.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from symrealize.complexes import SimplicialComplex


def _rank_mod(rows, p=None):
    """Rank of an integer matrix over Q (p=None) or F_p."""
    if p is None:
        M = [[Fraction(x) for x in r] for r in rows]
    else:
        M = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = (1 / M[rank][c]) if p is None else pow(M[rank][c], -1, p)
        M[rank] = [(x * inv) if p is None else (x * inv) % p for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c]
                M[r] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def boundary_rows(K, d):
    """Matrix of the boundary C_d -> C_{d-1} as a list of rows."""
    lo = sorted(s for s in K.simplices if len(s) == d)
    hi = sorted(s for s in K.simplices if len(s) == d + 1)
    idx = {s: i for i, s in enumerate(lo)}
    rows = [[0] * len(hi) for _ in lo]
    for j, s in enumerate(hi):
        for i in range(len(s)):
            rows[idx[s[:i] + s[i + 1:]]][j] += (-1) ** i
    return rows, len(lo), len(hi)


def betti_and_mod_p(K, q, p=None):
    """dim H_q(K; Q) or dim H_q(K; F_p) from ranks of boundary matrices."""
    n_q = sum(1 for s in K.simplices if len(s) == q + 1)
    out_rows = boundary_rows(K, q)[0] if q > 0 else []  # C_q -> C_{q-1}
    in_rows, _, _ = boundary_rows(K, q + 1)  # C_{q+1} -> C_q
    r_out = _rank_mod(out_rows, p) if out_rows and out_rows[0] else 0
    r_in = _rank_mod(in_rows, p) if in_rows and in_rows[0] else 0
    return n_q - r_out - r_in


def p_torsion_count(group, p):
    return sum(1 for t in group.torsion if t % p == 0)


def brute_complex_automorphisms(K: SimplicialComplex):
    """All vertex permutations mapping the simplex set onto itself."""
    V = list(K.vertices)
    simplices = K.simplices
    out = []
    for perm in itertools.permutations(V):
        m = dict(zip(V, perm))
        if all(tuple(sorted(m[v] for v in s)) in simplices for s in simplices):
            out.append(m)
    return out


def poset_relation(X):
    return {(a, b) for a in X.points for b in X.points if X.leq(a, b)}


def brute_poset_automorphisms(X):
    """All bijections of the points preserving <= in both directions.

    Plain backtracking over the points in a fixed order; a partial
    assignment is abandoned as soon as it breaks the relation.
    """
    P = list(X.points)
    n = len(P)
    leq = [[X.leq(a, b) for b in P] for a in P]
    img = [None] * n
    used = [False] * n
    out = []

    def rec(i):
        if i == n:
            out.append({P[k]: P[img[k]] for k in range(n)})
            return
        for t in range(n):
            if used[t]:
                continue
            if all(leq[i][k] == leq[t][img[k]] and leq[k][i] == leq[img[k]][t] for k in range(i)):
                img[i], used[t] = t, True
                rec(i + 1)
                used[t] = False
        img[i] = None

    rec(0)
    return out


def brute_beat_points(X):
    """Beat points straight from the definition, using only <=."""
    out = []
    for x in X.points:
        below = [y for y in X.points if y != x and X.leq(y, x)]
        above = [y for y in X.points if y != x and X.leq(x, y)]
        has_max = any(all(X.leq(z, m) for z in below) for m in below)
        has_min = any(all(X.leq(m, z) for z in above) for m in above)
        if has_max or has_min:
            out.append(x)
    return sorted(out)


def brute_max_chain(X):
    """Longest chain by exhaustive search over subsets (tiny posets only)."""
    P = list(X.points)
    best = 0
    for r in range(1, len(P) + 1):
        found = False
        for sub in itertools.combinations(P, r):
            if all(X.leq(a, b) or X.leq(b, a) for a, b in itertools.combinations(sub, 2)):
                found = True
                break
        if not found:
            break
        best = r
    return best


def brute_hom_count(generators, relators, group):
    """Count assignments of group elements to generators killing every relator.

    ``relators`` are lists of (generator index, +1/-1) letters.
    """
    n = group.order
    count = 0
    for assignment in itertools.product(range(n), repeat=len(generators)):
        ok = True
        for r in relators:
            x = group.identity
            for gi, e in r:
                y = assignment[gi] if e > 0 else group.inverse(assignment[gi])
                x = group.mul(x, y)
            if x != group.identity:
                ok = False
                break
        count += ok
    return count


def subgroups_by_generation(perms):
    """Every subgroup of a permutation group generated by at most two elements."""
    perms = [tuple(p) for p in perms]

    def closure(gens):
        n = len(perms[0])
        e = tuple(range(n))
        seen = {e}
        frontier = [e]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    c = tuple(a[g[i]] for i in range(n))
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
            frontier = new
        return frozenset(seen)

    return {closure([a, b]) for a in perms for b in perms}


def random_complex(rng: random.Random, max_vertices=8, max_facets=7, max_dim=3):
    n = rng.randint(1, max_vertices)
    V = [f"v{i}" for i in range(n)]
    facets = []
    for _ in range(rng.randint(1, max_facets)):
        k = rng.randint(1, min(max_dim + 1, n))
        facets.append(rng.sample(V, k))
    return SimplicialComplex.from_facets(facets)


def random_connected_complex(rng: random.Random, max_vertices=8, max_dim=3):
    """Random complex grown by attaching simplices to existing vertices."""
    n = rng.randint(2, max_vertices)
    V = [f"v{i}" for i in range(n)]
    facets = [[V[0], V[1]]]
    for i in range(2, n):
        k = rng.randint(1, min(max_dim, i))
        facets.append([V[i]] + rng.sample(V[:i], k))
    for _ in range(rng.randint(0, 3)):
        k = rng.randint(2, min(max_dim + 1, n))
        facets.append(rng.sample(V, k))
    return SimplicialComplex.from_facets(facets)


@st.composite
def complexes(draw, max_vertices=7, max_facets=6, max_dim=3, connected=False):
    """Complexes on vertices v0..v{n-1}; with ``connected`` a random spanning
    tree of edges is added."""
    n = draw(st.integers(2 if connected else 1, max_vertices))
    simplex = st.lists(st.integers(0, n - 1), min_size=1, max_size=max_dim + 1, unique=True)
    facets = draw(st.lists(simplex, min_size=1, max_size=max_facets))
    if connected:
        facets += [[i, draw(st.integers(0, i - 1))] for i in range(1, n)]
    return SimplicialComplex.from_facets([[f"v{i}" for i in f] for f in facets])


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * _det(minor)
    return total


def invariant_factors(A):
    """Invariant factors from determinantal divisors: d_k = gcd of k x k minors."""
    from math import gcd

    rows, cols = len(A), len(A[0])
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[A[i][j] for j in c] for i in r]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]
