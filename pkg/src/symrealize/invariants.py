"""Exact invariants: Smith normal form, integral homology, edge-path groups,
homomorphism counts, induced actions on H_1 and collapsibility.

All arithmetic is on Python integers. Large chain complexes are first shrunk
by eliminating unit pivots (reduction pairs), which preserves homology; the
dense Smith normal form is only run on what is left.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np
from numba import njit

from .complexes import ComplexError, SimplicialComplex, SimplicialMap, spanning_tree


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return ``(D, U, V)`` with ``D = U A V`` diagonal, d1 | d2 | ..., U, V unimodular.

    ``A`` is a list of rows of integers. Pivots are chosen by minimal
    absolute value to keep entries small.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        if q:
            rs, rd = D[src], D[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += q * rs[k]
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(src, dst, q):  # col_dst += q * col_src
        if q:
            for row in D:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest remainder in row/column t onto the pivot
                cands = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def matmul(A, B):
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    if not cols:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/t_1 + ... + Z/t_k with t_1 | t_2 | ... | t_k, all t_i >= 2."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.rank < 0 or any(t < 2 for t in self.torsion):
            raise ValueError(f"invalid abelian group {self.rank}, {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion coefficients {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_diagonal(cls, n_generators, diag):
        nonzero = [abs(d) for d in diag if d]
        return cls(n_generators - len(nonzero), tuple(sorted(d for d in nonzero if d > 1)))

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    @property
    def moduli(self):
        """Per coordinate: 0 for a free summand, d for Z/d (torsion listed first)."""
        return tuple(self.torsion) + (0,) * self.rank

    def order(self):
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self, dim=None):
        out = {"rank": self.rank, "torsion": list(self.torsion)}
        if dim is not None:
            out = {"dim": dim, **out}
        return out


def lattice_contains(rows, v):
    """Is ``v`` an integer combination of ``rows``?"""
    if not any(v):
        return True
    if not rows:
        return False
    D, U, V = smith_normal_form(rows)
    w = matmul([list(v)], V)[0]
    diag = diagonal(D)
    for j, x in enumerate(w):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if x:
                return False
        elif x % d:
            return False
    return True


# ---------------------------------------------------------------------------
# chain complexes


def simplex_boundary(s):
    """Boundary of an oriented simplex given as a tuple: {face: sign}."""
    if len(s) == 1:
        return {}
    return {s[:i] + s[i + 1:]: (-1) ** i for i in range(len(s))}


class ChainComplex:
    """Integer chain complex in degrees 0..top with sparse boundary columns.

    ``cells[d]`` is the ordered basis of C_d; ``boundary[d][c]`` is the
    boundary of the d-cell ``c`` as a dict face -> coefficient.
    """

    def __init__(self, cells, boundary):
        self.cells = [list(c) for c in cells]
        self.boundary = [dict(b) for b in boundary]

    @classmethod
    def from_simplices(cls, by_dim, top=None):
        """``by_dim[d]``: oriented d-simplices (tuples). Degrees above ``top`` are dropped."""
        top = len(by_dim) - 1 if top is None else top
        cells = [list(by_dim[d]) if d < len(by_dim) else [] for d in range(top + 1)]
        boundary = [{s: simplex_boundary(s) for s in cells[d]} for d in range(top + 1)]
        return cls(cells, boundary)

    @classmethod
    def of_complex(cls, K: SimplicialComplex, top=None):
        by_dim = [K.simplices_of_dim(d) for d in range(K.dim + 1)]
        return cls.from_simplices(by_dim, top)

    @property
    def top(self):
        return len(self.cells) - 1

    def matrix(self, d):
        """Dense matrix of d_d : C_d -> C_{d-1} (rows: (d-1)-cells)."""
        if d <= 0 or d > self.top:
            return []
        rows = {c: i for i, c in enumerate(self.cells[d - 1])}
        M = [[0] * len(self.cells[d]) for _ in self.cells[d - 1]]
        for j, c in enumerate(self.cells[d]):
            for f, x in self.boundary[d][c].items():
                M[rows[f]][j] += x
        return M

    def check_square_zero(self):
        for d in range(2, self.top + 1):
            for c in self.cells[d]:
                acc = {}
                for f, x in self.boundary[d][c].items():
                    for g, y in self.boundary[d - 1][f].items():
                        acc[g] = acc.get(g, 0) + x * y
                if any(acc.values()):
                    return False
        return True


class _Reducer:
    """In-place elimination of unit pivots on a truncated chain complex.

    Each reduction pair (a in C_k, b in C_{k-1}) with <da, b> = +-1 is removed;
    boundaries of the other k-cells are corrected so that b disappears, and a
    is dropped from boundaries of (k+1)-cells. ``ops`` records, for the
    degree ``track``, what the chain projection does to a chain.
    """

    def __init__(self, cc: ChainComplex, track=None):
        self.top = cc.top
        self.col = [{c: dict(b) for c, b in cc.boundary[d].items()} for d in range(self.top + 1)]
        self.cof = [dict() for _ in range(self.top + 1)]  # cof[k][face] = set of k-cells
        for k in range(1, self.top + 1):
            cof = self.cof[k]
            for c, b in self.col[k].items():
                for f in b:
                    cof.setdefault(f, set()).add(c)
        self.track = track
        self.ops = []

    def _pair(self, k, a, b):
        col, cof = self.col[k], self.cof[k]
        da = col[a]
        u = da[b]
        if self.track == k:
            self.ops.append(("drop", a, u, {x: col[x][b] for x in cof[b] if x != a}))
        for x in sorted(cof[b] - {a}, key=_key):
            dx = col[x]
            c = dx[b] * u
            for f, y in da.items():
                v = dx.get(f, 0) - c * y
                if v:
                    if f not in dx:
                        cof[f].add(x)
                    dx[f] = v
                elif f in dx:
                    del dx[f]
                    cof[f].discard(x)
        if self.track == k - 1:
            self.ops.append(("sub", b, u, dict(da)))
        # drop a
        for f in da:
            cof[f].discard(a)
        del col[a]
        if k + 1 <= self.top:
            for y in self.cof[k + 1].pop(a, ()):
                del self.col[k + 1][y][a]
        # drop b
        cof.pop(b, None)
        if k - 1 >= 1:
            for f in self.col[k - 1].pop(b):
                self.cof[k - 1][f].discard(b)
        else:
            self.col[0].pop(b)

    def run(self):
        # elementary collapses first (no fill-in), then general unit pivots
        for general in (False, True):
            progress = True
            while progress:
                progress = False
                for k in range(self.top, 0, -1):
                    col, cof = self.col[k], self.cof[k]
                    for a in sorted(col, key=_key):
                        if a not in col:
                            continue
                        best = None
                        for f, x in col[a].items():
                            if x in (1, -1):
                                n = len(cof[f])
                                if n == 1 or (general and (best is None or n < best[0])):
                                    best = (n, f)
                                    if n == 1:
                                        break
                        if best is not None and (general or best[0] == 1):
                            self._pair(k, a, best[1])
                            progress = True
                    if progress and general:
                        break
        return self

    def remaining(self):
        return ChainComplex([sorted(self.col[d], key=_key) for d in range(self.top + 1)], self.col)

    def lift(self, chain):
        """A cycle of the original complex whose projection is the reduced cycle ``chain``."""
        z = dict(chain)
        for op in reversed(self.ops):
            if op[0] == "drop":
                _, a, u, coef = op
                s = sum(x * coef[c] for c, x in z.items() if c in coef)
                if s:
                    z[a] = -u * s
        return z

    def project(self, chain):
        """Image of a chain of degree ``track`` in the reduced complex."""
        z = dict(chain)
        for op in self.ops:
            if op[0] == "drop":
                z.pop(op[1], None)
            else:
                _, b, u, da = op
                c = z.get(b, 0)
                if c:
                    c *= u
                    for f, y in da.items():
                        v = z.get(f, 0) - c * y
                        if v:
                            z[f] = v
                        else:
                            z.pop(f, None)
        return {k: v for k, v in z.items() if v}


def _key(c):
    return (len(c), c) if isinstance(c, tuple) else (0, c)


class HomologyBasis:
    """H_q of a chain complex with explicit generators and coordinates.

    Coordinates are ordered as ``group.moduli``: torsion summands first, then
    free summands. Torsion coordinates are reduced modulo their order.
    """

    def __init__(self, cc: ChainComplex, q: int, reduce=True):
        if q > cc.top:
            raise ValueError(f"chain complex stops below degree {q}")
        truncated = ChainComplex(cc.cells[: q + 2], cc.boundary[: q + 2])
        self.reducer = _Reducer(truncated, track=q).run() if reduce else None
        small = self.reducer.remaining() if reduce else truncated
        self.q = q
        basis = small.cells[q]
        self.basis = basis
        index = {c: i for i, c in enumerate(basis)}
        self.index = index
        n = len(basis)
        # cycles: kernel of d_q via SNF of its transpose-free form
        Dq = small.matrix(q) if q > 0 else []
        if Dq and Dq[0]:
            D, U, V = smith_normal_form(Dq)
            r = sum(1 for x in diagonal(D) if x)
            Z = [[V[i][j] for j in range(r, n)] for i in range(n)]  # n x z
        else:
            Z = _identity(n)
        zdim = len(Z[0]) if Z else 0
        # boundaries expressed in the cycle basis: B = Z * M
        Bq = small.matrix(q + 1) if q + 1 <= small.top else []
        bcols = list(zip(*Bq)) if Bq and Bq[0] else []
        M = [_solve_in_columns(Z, list(b)) for b in bcols]  # list of zdim-vectors
        M = [list(r) for r in zip(*M)] if M else [[] for _ in range(zdim)]
        if zdim and M and M[0]:
            D2, U2, V2 = smith_normal_form(M)
            diag = diagonal(D2)
        else:
            U2 = _identity(zdim)
            diag = []
        diag = diag + [0] * (zdim - len(diag))
        # new cycle basis: Z * U2^{-1}; coordinates: U2 * (old coords)
        U2inv = _inverse_unimodular(U2)
        Znew = matmul(Z, U2inv) if zdim else []
        keep_t = [i for i, d in enumerate(diag) if abs(d) > 1]
        keep_f = [i for i, d in enumerate(diag) if d == 0]
        self.group = AbelianGroup(len(keep_f), tuple(sorted(abs(diag[i]) for i in keep_t)))
        keep_t.sort(key=lambda i: abs(diag[i]))
        self._keep = keep_t + keep_f
        self._mods = [abs(diag[i]) for i in keep_t] + [0] * len(keep_f)
        self._Z = Z
        self._U2 = U2
        self.generators = []
        for i in self._keep:
            vec = {basis[r]: Znew[r][i] for r in range(n) if Znew[r][i]}
            self.generators.append(self.reducer.lift(vec) if self.reducer else vec)

    def coordinates(self, chain):
        """Coordinates of the class of the cycle ``chain`` (dict cell -> coeff)."""
        z = self.reducer.project(chain) if self.reducer else dict(chain)
        v = [0] * len(self.basis)
        for c, x in z.items():
            if c not in self.index:
                raise ValueError(f"chain uses cell {c!r} outside the complex")
            v[self.index[c]] = x
        old = _solve_in_columns(self._Z, v)
        if old is None:
            raise ValueError("chain is not a cycle")
        new = [sum(self._U2[i][k] * old[k] for k in range(len(old))) for i in range(len(old))]
        out = []
        for i, mod in zip(self._keep, self._mods):
            out.append(new[i] % mod if mod else new[i])
        return out


def _solve_in_columns(Z, v):
    """Integer x with Z x = v for a matrix Z whose columns span a saturated lattice."""
    n = len(v)
    if not Z or not Z[0]:
        return [] if not any(v) else None
    k = len(Z[0])
    # Z has full column rank and is part of a unimodular matrix; use SNF once
    D, U, V = smith_normal_form(Z)
    w = [sum(U[i][j] * v[j] for j in range(n)) for i in range(n)]
    y = []
    for i in range(k):
        d = D[i][i]
        if d == 0 or w[i] % d:
            return None
        y.append(w[i] // d)
    if any(w[k:]):
        return None
    return [sum(V[i][j] * y[j] for j in range(k)) for i in range(k)]


def _inverse_unimodular(U):
    n = len(U)
    D, P, Q = smith_normal_form(U)
    # U = P^-1 D Q^-1 with D = I (up to sign) -> U^-1 = Q D^-1 P
    Dinv = [[D[i][j] for j in range(n)] for i in range(n)]  # entries are +-1 on the diagonal
    return matmul(matmul(Q, Dinv), P)


# ---------------------------------------------------------------------------
# homology of complexes


def homology(K: SimplicialComplex, d: int) -> AbelianGroup:
    """Integral H_d(K) (simplices oriented by sorted labels)."""
    if d < 0:
        raise ValueError("negative degree")
    if d > K.dim:
        return AbelianGroup(0)
    cc = ChainComplex.of_complex(K, top=d + 1)
    return HomologyBasis(cc, d).group


def homology_table(K: SimplicialComplex, top=None):
    top = K.dim if top is None else top
    cc = ChainComplex.of_complex(K, top=top + 1)
    return [HomologyBasis(cc, d).group if d <= cc.top else AbelianGroup(0) for d in range(top + 1)]


def reduced_homology(K: SimplicialComplex, d: int) -> AbelianGroup:
    H = homology(K, d)
    if d == 0:
        return AbelianGroup(H.rank - 1, H.torsion)
    return H


def chain_image(f: SimplicialMap, chain):
    """Push a chain of oriented simplices along a vertex map."""
    m = f.as_dict()
    out = {}
    for s, x in chain.items():
        img = [m[v] for v in s]
        if len(set(img)) < len(img):
            continue
        order = sorted(range(len(img)), key=lambda i: img[i])
        sign = _perm_sign(order)
        key = tuple(img[i] for i in order)
        out[key] = out.get(key, 0) + sign * x
    return {k: v for k, v in out.items() if v}


def _perm_sign(order):
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class H1Action:
    """Computes matrices of simplicial automorphisms on H_1(K)."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.basis = HomologyBasis(ChainComplex.of_complex(K, top=2), 1)

    @property
    def group(self):
        return self.basis.group

    def matrix(self, f: SimplicialMap):
        if not f.is_automorphism_of(self.K):
            raise ValueError("map is not an automorphism of the complex")
        cols = [self.basis.coordinates(chain_image(f, z)) for z in self.basis.generators]
        k = len(cols)
        return [[cols[j][i] for j in range(k)] for i in range(k)]


def induced_h1_action(K: SimplicialComplex, f: SimplicialMap):
    """Matrix of f_* on H_1(K) in the Smith-normal-form basis."""
    return H1Action(K).matrix(f)


def compose_on(group: AbelianGroup, A, B):
    """Matrix product A·B of endomorphisms of ``group`` (torsion rows reduced)."""
    C = matmul(A, B)
    return [[x % m if m else x for x in row] for row, m in zip(C, group.moduli)]


# ---------------------------------------------------------------------------
# equivalence of actions


def _endomorphism_choices(group: AbelianGroup, bound):
    """Admissible matrix entries per position of an endomorphism of ``group``."""
    mods = group.moduli
    k = len(mods)
    choices = []
    for i in range(k):
        for j in range(k):
            mi, mj = mods[i], mods[j]
            if mi == 0 and mj != 0:
                choices.append([0])
            elif mi == 0:
                choices.append(list(range(-bound, bound + 1)))
            elif mj == 0:
                choices.append(list(range(mi)))
            else:
                choices.append([x for x in range(mi) if (mj * x) % mi == 0])
    return choices


def _is_automorphism(group, U):
    mods = group.moduli
    t = len(group.torsion)
    free = [[U[i][j] for j in range(t, len(mods))] for i in range(t, len(mods))]
    if free:
        D, _, _ = smith_normal_form(free)
        if any(abs(x) != 1 for x in diagonal(D)) or len(diagonal(D)) < len(free):
            return False
    # torsion part: the induced map on the torsion subgroup must be injective
    if t:
        elems = list(itertools.product(*[range(m) for m in group.torsion]))
        images = set()
        for e in elems:
            img = tuple(sum(U[i][j] * e[j] for j in range(t)) % mods[i] for i in range(t))
            images.add(img)
        if len(images) != len(elems):
            return False
    return True


def actions_equivalent(A, B, group_structure, coefficients: AbelianGroup, bound=3):
    """Is there an automorphism U of ``coefficients`` with U·A_g = B_g·U for all g?

    ``A`` and ``B`` map group elements to matrices on ``coefficients``.
    Returns ``True``/``False``; returns ``None`` (inconclusive) when the free
    rank is at least 2 and no conjugator exists with entries in [-bound, bound].
    """
    elements = list(group_structure.elements) if group_structure is not None else sorted(A)
    if set(A) != set(B) or set(A) != set(elements):
        raise ValueError("action families are indexed by different groups")
    k = coefficients.ngens
    for g in elements:
        for M in (A[g], B[g]):
            if len(M) != k or any(len(r) != k for r in M):
                raise ValueError(f"matrix for {g!r} does not act on {coefficients}")
    if k == 0:
        return True
    choices = _endomorphism_choices(coefficients, bound)
    for entries in itertools.product(*choices):
        U = [list(entries[i * k:(i + 1) * k]) for i in range(k)]
        if all(compose_on(coefficients, U, A[g]) == compose_on(coefficients, B[g], U) for g in elements):
            if _is_automorphism(coefficients, U):
                return True
    if coefficients.rank >= 2:
        return None
    return False


# ---------------------------------------------------------------------------
# fundamental group and homomorphism counts


def edge_path_pi1(K: SimplicialComplex, base=None):
    """Edge-path presentation of pi_1(|K|, base) from a DFS spanning tree."""
    from .presentations import Presentation, free_reduce

    if not K.is_connected():
        raise ComplexError("edge_path_pi1 needs a connected complex")
    base = K.vertices[0] if base is None else base
    _, parent, _ = spanning_tree(K, root=base)
    tree = {tuple(sorted((v, p))) for v, p in parent.items() if p is not None}
    gens = [e for e in K.simplices_of_dim(1) if e not in tree]
    gindex = {e: i for i, e in enumerate(gens)}

    def letter(a, b):
        e = (a, b) if a < b else (b, a)
        if e in tree:
            return []
        return [(gindex[e], 1 if a < b else -1)]

    relators = []
    for a, b, c in K.simplices_of_dim(2):
        w = free_reduce(letter(a, b) + letter(b, c) + letter(c, a))
        if w:
            relators.append(tuple(w))
    names = [f"e[{a},{b}]" for a, b in gens]
    return Presentation(tuple(names), tuple(relators))


def hom_count(p, T) -> int:
    """Number of homomorphisms from the group presented by ``p`` to ``T``."""
    from .presentations import simplify

    p = simplify(p)
    n = len(p.generators)
    if n == 0:
        return 1
    inv = [T.inverse(g) for g in range(T.order)]
    table = T.table
    e = T.identity
    # check each relator as soon as its last generator is assigned
    last = {}
    for r in p.relators:
        if r:
            last.setdefault(max(i for i, _ in r), []).append(r)
    assign = [None] * n

    def holds(r):
        x = e
        for i, s in r:
            y = assign[i] if s > 0 else inv[assign[i]]
            x = table[x][y]
        return x == e

    def rec(i):
        if i == n:
            return 1
        total = 0
        for g in range(T.order):
            assign[i] = g
            if all(holds(r) for r in last.get(i, ())):
                total += rec(i + 1)
        assign[i] = None
        return total

    return rec(0)


# ---------------------------------------------------------------------------
# collapses


def collapse(K: SimplicialComplex):
    """Greedy elementary collapses, smallest free face first.

    Returns True when K is reduced to a single vertex. False only means the
    greedy order found no certificate.
    """
    alive = set(K.simplices)
    up = {s: 0 for s in alive}
    for s in alive:
        if len(s) > 1:
            for i in range(len(s)):
                up[s[:i] + s[i + 1:]] += 1
    cofaces = {}
    for s in alive:
        if len(s) > 1:
            for i in range(len(s)):
                cofaces.setdefault(s[:i] + s[i + 1:], set()).add(s)

    def free_partner(t):
        if t not in alive or up[t] != 1:
            return None
        (s,) = [c for c in cofaces.get(t, ()) if c in alive]
        return s if up[s] == 0 else None

    heap = [(len(t), t) for t in alive if free_partner(t) is not None]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        s = free_partner(t)
        if s is None:
            continue
        for dead in (s, t):
            alive.discard(dead)
            if len(dead) > 1:
                for i in range(len(dead)):
                    f = dead[:i] + dead[i + 1:]
                    if f in alive:
                        up[f] -= 1
        touched = set()
        for dead in (s, t):
            if len(dead) > 1:
                for i in range(len(dead)):
                    f = dead[:i] + dead[i + 1:]
                    if f in alive:
                        touched.add(f)
                        if len(f) > 1:
                            touched.update(f[:j] + f[j + 1:] for j in range(len(f)))
        for f in touched:
            if free_partner(f) is not None:
                heapq.heappush(heap, (len(f), f))
    return len(alive) == 1


# ---------------------------------------------------------------------------
# H_0 and H_1 of large 2-dimensional skeleta


@njit(cache=True)
def _bfs_forest(n, indptr, nbr, nbr_edge):
    parent = np.full(n, -1, np.int64)
    pedge = np.full(n, -1, np.int64)
    depth = np.zeros(n, np.int64)
    comp = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    ncomp = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        head, tail = 0, 0
        queue[tail] = s
        tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = nbr[k]
                if comp[w] < 0:
                    comp[w] = ncomp
                    parent[w] = v
                    pedge[w] = nbr_edge[k]
                    depth[w] = depth[v] + 1
                    queue[tail] = w
                    tail += 1
        ncomp += 1
    return parent, pedge, depth, comp, ncomp


@njit(cache=True)
def _find(uf, sg, x):
    s = 1
    r = x
    while uf[r] != r:
        s *= sg[r]
        r = uf[r]
    # path compression with sign bookkeeping
    y = x
    acc = s
    while uf[y] != y:
        nxt = uf[y]
        step = sg[y]
        uf[y] = r
        sg[y] = acc
        acc *= step
        y = nxt
    return r, s


@njit(cache=True)
def _propagate(tri_edges, tri_signs, uf, sg, trivial):
    """Signed union-find closure of the triangle relations.

    Each edge value equals sg * value(root); a trivial root has value 0.
    A relation reducing to one unit term kills a class, one reducing to two
    unit terms identifies two classes. Returns the unresolved triangles.
    """
    T = tri_edges.shape[0]
    resolved = np.zeros(T, np.bool_)
    roots = np.empty(3, np.int64)
    coefs = np.empty(3, np.int64)
    changed = True
    while changed:
        changed = False
        for t in range(T):
            if resolved[t]:
                continue
            m = 0
            for k in range(3):
                r, s = _find(uf, sg, tri_edges[t, k])
                if trivial[r]:
                    continue
                c = s * tri_signs[t, k]
                hit = -1
                for q in range(m):
                    if roots[q] == r:
                        hit = q
                if hit >= 0:
                    coefs[hit] += c
                else:
                    roots[m] = r
                    coefs[m] = c
                    m += 1
            live = 0
            for q in range(m):
                if coefs[q] != 0:
                    roots[live] = roots[q]
                    coefs[live] = coefs[q]
                    live += 1
            if live == 0:
                resolved[t] = True
                changed = True
            elif live == 1 and abs(coefs[0]) == 1:
                trivial[roots[0]] = True
                resolved[t] = True
                changed = True
            elif live == 2 and abs(coefs[0]) == 1 and abs(coefs[1]) == 1:
                # c0 A + c1 B = 0  =>  A = -c0 c1 B
                uf[roots[0]] = roots[1]
                sg[roots[0]] = -coefs[0] * coefs[1]
                resolved[t] = True
                changed = True
    return np.nonzero(~resolved)[0]


class SkeletonH1:
    """H_0 and H_1 of a complex given by its vertices, edges and triangles.

    ``edges`` is an (E, 2) integer array and ``triangles`` a (T, 3) array,
    both with increasing vertex indices in each row (the orientation). H_1 is
    computed as the cokernel of the triangle relations on the non-tree edges
    of a BFS spanning forest; relations that merely kill or identify edge
    classes are absorbed by a signed union-find, the rest go through sparse
    unit-pivot elimination and a final Smith normal form.
    """

    def __init__(self, n, edges, triangles):
        self.n = int(n)
        edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64).reshape(-1, 3)
        self.edges = edges
        E = len(edges)
        codes = edges[:, 0] * self.n + edges[:, 1]
        order = np.argsort(codes, kind="stable")
        self._codes = codes[order]
        self._code_order = order
        if E and np.any(self._codes[1:] == self._codes[:-1]):
            raise ValueError("repeated edge")
        # adjacency for the spanning forest
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        eid = np.concatenate([np.arange(E), np.arange(E)])
        o = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr)
        self.parent, self.pedge, self.depth, self.comp, self.ncomp = _bfs_forest(
            self.n, indptr, dst[o], eid[o])
        is_tree = np.zeros(E, np.bool_)
        is_tree[self.pedge[self.pedge >= 0]] = True
        a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
        tri_edges = np.column_stack([self.edge_ids(b, c), self.edge_ids(a, c), self.edge_ids(a, b)])
        tri_signs = np.tile(np.array([1, -1, 1], np.int64), (len(triangles), 1))
        uf = np.arange(E, dtype=np.int64)
        sg = np.ones(E, np.int64)
        trivial = is_tree.copy()
        rest = _propagate(tri_edges, tri_signs, uf, sg, trivial)
        self._uf, self._sg, self._trivial = uf, sg, trivial
        rows = []
        for t in rest:
            rows.append(self._class_vector({int(tri_edges[t, k]): int(tri_signs[t, k]) for k in range(3)}))
        self._eliminate(rows)

    def edge_ids(self, a, b):
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        codes = lo * self.n + hi
        if codes.size == 0:
            return np.zeros(0, np.int64)
        pos = np.searchsorted(self._codes, codes)
        pos = np.minimum(pos, len(self._codes) - 1)
        if len(self._codes) == 0 or np.any(self._codes[pos] != codes):
            raise ValueError("simplex uses an edge missing from the skeleton")
        return self._code_order[pos]

    def _class_vector(self, edge_chain):
        v = {}
        for e, x in edge_chain.items():
            r, s = _find(self._uf, self._sg, e)
            if self._trivial[r]:
                continue
            v[r] = v.get(r, 0) + s * x
        return {k: x for k, x in v.items() if x}

    def _eliminate(self, rows):
        rows = [r for r in rows if r]
        live = {}
        for i, r in enumerate(rows):
            for c in r:
                live.setdefault(c, set()).add(i)
        self._ops = []
        alive = set(range(len(rows)))
        progress = True
        while progress:
            progress = False
            for i in sorted(alive, key=lambda i: len(rows[i])):
                if i not in alive:
                    continue
                r = rows[i]
                piv = [c for c, x in r.items() if x in (1, -1)]
                if not piv:
                    continue
                c = min(piv, key=lambda c: (len(live[c]), c))
                u = r[c]
                for j in sorted(live[c] - {i}):
                    s = rows[j]
                    k = s[c] * u
                    for col, x in r.items():
                        y = s.get(col, 0) - k * x
                        if y:
                            if col not in s:
                                live[col].add(j)
                            s[col] = y
                        elif col in s:
                            del s[col]
                            live[col].discard(j)
                    if not s:
                        alive.discard(j)
                for col in r:
                    live[col].discard(i)
                self._ops.append((c, u, dict(r)))
                alive.discard(i)
                progress = True
        eliminated = {c for c, _, _ in self._ops}
        classes = sorted({int(r) for r in np.nonzero(~self._trivial)[0] if self._uf[r] == r} - eliminated)
        self.classes = classes
        cindex = {c: k for k, c in enumerate(classes)}
        self._cindex = cindex
        res = [[rows[i].get(c, 0) for c in classes] for i in sorted(alive)]
        res = [r for r in res if any(r)]
        k = len(classes)
        if res:
            D, U, V = smith_normal_form(res)
            diag = diagonal(D)
        else:
            V, diag = _identity(k), []
        diag = [abs(x) for x in diag] + [0] * (k - len(diag))
        self._V = V
        keep_t = sorted((j for j in range(k) if diag[j] > 1), key=lambda j: diag[j])
        keep_f = [j for j in range(k) if diag[j] == 0]
        self._keep = keep_t + keep_f
        self._mods = [diag[j] for j in keep_t] + [0] * len(keep_f)
        self.h1 = AbelianGroup(len(keep_f), tuple(diag[j] for j in keep_t))
        self.h0 = AbelianGroup(self.ncomp)
        Vinv = _inverse_unimodular(V) if k else []
        self._gen_classes = [[Vinv[j][t] for t in range(k)] for j in self._keep]

    def coordinates(self, edge_chain):
        """Coordinates in H_1 of a 1-cycle given as {edge id: coefficient}."""
        v = self._class_vector(edge_chain)
        for c, u, r in self._ops:
            x = v.get(c, 0)
            if x:
                x *= u
                for col, y in r.items():
                    z = v.get(col, 0) - x * y
                    if z:
                        v[col] = z
                    else:
                        v.pop(col, None)
        w = [0] * len(self.classes)
        for c, x in v.items():
            w[self._cindex[c]] = x
        y = [sum(w[t] * self._V[t][j] for t in range(len(w))) for j in range(len(w))]
        return [y[j] % m if m else y[j] for j, m in zip(self._keep, self._mods)]

    def fundamental_cycle(self, e):
        """Edge e plus the forest path closing it, as {edge id: coefficient}."""
        a, b = int(self.edges[e, 0]), int(self.edges[e, 1])
        z = {int(e): 1}

        def add(edge, x):
            z[edge] = z.get(edge, 0) + x
            if z[edge] == 0:
                del z[edge]

        # walk b -> ... -> a through the forest: b up to lca, then down to a
        u, v = b, a
        while u != v:
            if self.depth[u] >= self.depth[v]:
                p, pe = int(self.parent[u]), int(self.pedge[u])
                add(pe, 1 if self.edges[pe, 0] == u else -1)  # traverse u -> p
                u = p
            else:
                p, pe = int(self.parent[v]), int(self.pedge[v])
                add(pe, 1 if self.edges[pe, 0] == p else -1)  # traverse p -> v (at the end)
                v = p
        return z

    def generators(self):
        """Explicit 1-cycles representing the H_1 basis, as {edge id: coefficient}."""
        out = []
        for combo in self._gen_classes:
            z = {}
            for c, x in zip(self.classes, combo):
                if x:
                    for e, y in self.fundamental_cycle(c).items():
                        z[e] = z.get(e, 0) + x * y
            out.append({e: x for e, x in z.items() if x})
        return out

    def action_matrix(self, vertex_perm):
        """Matrix on H_1 of the simplicial automorphism given by a vertex permutation array."""
        perm = np.asarray(vertex_perm, np.int64)
        cols = []
        for z in self.generators():
            es = np.fromiter(z.keys(), np.int64, len(z))
            xs = np.fromiter(z.values(), np.int64, len(z))
            a, b = perm[self.edges[es, 0]], perm[self.edges[es, 1]]
            flip = np.where(a < b, 1, -1)
            ids = self.edge_ids(a, b)
            img = {}
            for e, x in zip(ids.tolist(), (xs * flip).tolist()):
                img[e] = img.get(e, 0) + x
            cols.append(self.coordinates(img))
        k = len(cols)
        return [[cols[j][i] for j in range(k)] for i in range(k)]


def skeleton_of(K: SimplicialComplex):
    """Vertex count, edge and triangle index arrays of a simplicial complex."""
    idx = K.vertex_index()
    edges = np.array([[idx[a], idx[b]] for a, b in K.simplices_of_dim(1)], np.int64).reshape(-1, 2)
    tris = np.array([[idx[v] for v in s] for s in K.simplices_of_dim(2)], np.int64).reshape(-1, 3)
    return len(K.vertices), np.sort(edges, axis=1), np.sort(tris, axis=1)
