"""Finitely presented groups, finite groups, actions by words, symmetric
presentations and their presentation complexes.

A word is a tuple of ``(generator_index, exponent)`` letters with exponent
``+1`` or ``-1``.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass

from .complexes import (
    ComplexError,
    DeltaComplex,
    SimplicialMap,
    delta_subdivide,
    delta_to_simplicial,
    subdivide_cell_map,
)


class PresentationError(ValueError):
    pass


_LETTER = re.compile(r"^([^\s^]+)(?:\^(-?\d+))?$")


def free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return out


def cyclic_reduce(word):
    w = free_reduce(word)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def invert(word):
    return [(i, -e) for i, e in reversed(word)]


def parse_word(text, generators, reduce=True):
    """Parse ``"x1 x2^-1 x1^3"``; exponents are expanded into +-1 letters."""
    index = {g: i for i, g in enumerate(generators)}
    out = []
    for token in text.split():
        if token == "1":
            continue
        m = _LETTER.match(token)
        if not m or m.group(1) not in index:
            raise PresentationError(f"cannot parse letter {token!r} over generators {list(generators)}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        sign = 1 if k > 0 else -1
        out.extend([(index[m.group(1)], sign)] * abs(k))
    return tuple(free_reduce(out)) if reduce else tuple(out)


def format_word(word, generators):
    if not word:
        return "1"
    return " ".join(generators[i] + ("" if e == 1 else "^-1") for i, e in word)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(map(tuple, r)) for r in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        n = len(self.generators)
        for j, r in enumerate(self.relators):
            for i, e in r:
                if not 0 <= i < n or e not in (1, -1):
                    raise PresentationError(f"relator {j} has invalid letter {(i, e)}")

    @classmethod
    def parse(cls, generators, relators):
        gens = tuple(generators)
        return cls(gens, tuple(parse_word(r, gens) for r in relators))

    def exponent_matrix(self):
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for i, e in r:
                row[i] += e
            rows.append(row)
        return rows

    def to_json(self):
        return {"generators": list(self.generators),
                "relators": [format_word(r, self.generators) for r in self.relators]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.parse(data["generators"], data.get("relators", []))
        except KeyError as exc:
            raise PresentationError(f"presentation JSON lacks {exc}") from None

    def __str__(self):
        rels = ", ".join(format_word(r, self.generators) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def abelianization(p: Presentation):
    """Abelian group presented by the exponent-sum matrix of the relators."""
    from .invariants import AbelianGroup, diagonal, smith_normal_form

    n = len(p.generators)
    rows = [r for r in p.exponent_matrix() if any(r)]
    if not rows or n == 0:
        return AbelianGroup(n)
    D, _, _ = smith_normal_form(rows)
    return AbelianGroup.from_diagonal(n, diagonal(D))


def simplify(p: Presentation) -> Presentation:
    """Tietze-eliminate generators that occur exactly once in some relator.

    Relators are cyclically reduced; the shortest eligible relator is used
    first. The result presents the same group.
    """
    gens = list(range(len(p.generators)))
    rels = [cyclic_reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    while True:
        best = None
        for j, r in enumerate(rels):
            if best is not None and len(r) >= best[0]:
                continue
            counts = {}
            for i, _ in r:
                counts[i] = counts.get(i, 0) + 1
            once = [i for i, c in counts.items() if c == 1]
            if once:
                best = (len(r), j, min(once))
        if best is None:
            break
        _, j, g = best
        r = rels.pop(j)
        k = next(t for t, (i, _) in enumerate(r) if i == g)
        rotated = r[k:] + r[:k]  # g^e * rest = 1  =>  g = (rest)^-1 if e=1, rest if e=-1
        e = rotated[0][1]
        rest = rotated[1:]
        value = invert(rest) if e == 1 else list(rest)
        inv_value = invert(value)
        new = []
        for w in rels:
            out = []
            for i, s in w:
                if i == g:
                    out.extend(value if s == 1 else inv_value)
                else:
                    out.append((i, s))
            out = cyclic_reduce(out)
            if out:
                new.append(out)
        rels = new
        gens.remove(g)
    index = {g: k for k, g in enumerate(gens)}
    return Presentation(tuple(p.generators[g] for g in gens),
                        tuple(tuple((index[i], e) for i, e in r) for r in rels))


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the index of the product ``a*b``. The group axioms
    are checked exhaustively on construction.
    """

    def __init__(self, elements, identity, table):
        self.elements = tuple(str(e) for e in elements)
        n = len(self.elements)
        if len(set(self.elements)) != n or n == 0:
            raise PresentationError("group elements must be non-empty and distinct")
        self.identity = identity if isinstance(identity, int) else self.elements.index(str(identity))
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise PresentationError("multiplication table has the wrong shape")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise PresentationError("multiplication table entry out of range")
        e = self.identity
        if any(self.table[e][a] != a or self.table[a][e] != a for a in range(n)):
            raise PresentationError(f"{self.elements[e]!r} is not an identity")
        self._inv = []
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == e]
            if len(inv) != 1 or self.table[inv[0]][a] != e:
                raise PresentationError(f"{self.elements[a]!r} has no two-sided inverse")
            self._inv.append(inv[0])
        t = self.table
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                tb = t[b]
                for c in range(n):
                    if t[ab][c] != ta[tb[c]]:
                        raise PresentationError("multiplication is not associative")

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, name):
        return self.elements.index(str(name))

    def mul(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return self._inv[a]

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self):
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def to_json(self):
        return {"elements": list(self.elements), "identity": self.elements[self.identity],
                "table": [[self.elements[x] for x in row] for row in self.table]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        elements = [str(e) for e in data["elements"]]
        idx = {e: i for i, e in enumerate(elements)}
        try:
            table = [[x if isinstance(x, int) else idx[str(x)] for x in row] for row in data["table"]]
        except KeyError as exc:
            raise PresentationError(f"table mentions unknown element {exc}") from None
        return cls(elements, data.get("identity", elements[0]), table)

    @classmethod
    def from_permutations(cls, generators, names=None):
        """Closure of permutation tuples under composition (``(p*q)(x) = p(q(x))``)."""
        gens = [tuple(g) for g in generators]
        n = len(gens[0]) if gens else 0
        ident = tuple(range(n))
        elems = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(n))
                    if q not in seen:
                        seen.add(q)
                        elems.append(q)
                        nxt.append(q)
            frontier = nxt
        elems = [ident] + sorted(elems[1:])
        return cls.from_elements(elems, names)

    @classmethod
    def from_elements(cls, perms, names=None):
        perms = [tuple(p) for p in perms]
        idx = {p: i for i, p in enumerate(perms)}
        table = [[idx[tuple(p[q[i]] for i in range(len(p)))] for q in perms] for p in perms]
        names = names or ["e"] + ["g" + "".join(map(str, p)) for p in perms[1:]]
        grp = cls(names, 0, table)
        grp.permutations = perms
        return grp

    @classmethod
    def cyclic(cls, n):
        names = ["e"] + [f"r{k}" for k in range(1, n)]
        return cls(names, 0, [[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def z2(cls):
        return cls(["e", "s"], 0, [[0, 1], [1, 0]])

    @classmethod
    def symmetric(cls, n):
        perms = sorted(itertools.permutations(range(n)))
        return cls.from_elements(perms)

    @classmethod
    def dihedral(cls, n):
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls.from_permutations([rot, ref])

    @classmethod
    def product(cls, A, B):
        names = [f"({a},{b})" for a in A.elements for b in B.elements]
        nb = B.order
        table = [[A.table[i // nb][j // nb] * nb + B.table[i % nb][j % nb]
                  for j in range(A.order * nb)] for i in range(A.order * nb)]
        return cls(names, A.identity * nb + B.identity, table)


def hom_panel():
    """The default panel of small target groups used for pi_1 fingerprints."""
    z2 = FiniteGroup.cyclic(2)
    return {
        "Z/2": z2,
        "Z/3": FiniteGroup.cyclic(3),
        "Z/4": FiniteGroup.cyclic(4),
        "S3": FiniteGroup.symmetric(3),
        "Z/2xZ/2": FiniteGroup.product(z2, z2),
    }


def enumerate_subgroups(group: FiniteGroup):
    """All subgroups, each as a sorted tuple of element indices.

    Starts from the trivial subgroup and repeatedly adjoins one element and
    closes, so no bound on the number of generators is assumed.
    """
    n = group.order
    t = group.table

    def closure(gens):
        sub = {group.identity}
        frontier = list(gens)
        while frontier:
            x = frontier.pop()
            if x in sub:
                continue
            sub.add(x)
            frontier.extend(t[x][y] for y in list(sub))
            frontier.extend(t[y][x] for y in list(sub))
        return tuple(sorted(sub))

    subs = {closure([])}
    frontier = set(subs)
    while frontier:
        nxt = set()
        for H in frontier:
            for g in range(n):
                if g not in H:
                    K = closure(list(H) + [g])
                    if K not in subs:
                        subs.add(K)
                        nxt.add(K)
        frontier = nxt
    return sorted(subs, key=lambda H: (len(H), H))


# ---------------------------------------------------------------------------
# actions and symmetric presentations


class GroupAction:
    """G acting on the group presented by ``target``: ``images[g][i]`` is a
    word representing the image of generator ``i`` under ``g``."""

    def __init__(self, group: FiniteGroup, target: Presentation, images):
        self.group = group
        self.target = target
        n = len(target.generators)
        if len(images) != group.order:
            raise PresentationError("action must give images for every group element")
        self.images = tuple(tuple(tuple(map(tuple, w)) for w in row) for row in images)
        for g, row in enumerate(self.images):
            if len(row) != n:
                raise PresentationError(f"element {group.elements[g]!r} needs {n} generator images")
            for w in row:
                for i, e in w:
                    if not 0 <= i < n or e not in (1, -1):
                        raise PresentationError(f"invalid letter {(i, e)} in action word")
        for i, w in enumerate(self.images[group.identity]):
            if w != ((i, 1),):
                raise PresentationError(f"identity must fix generator {target.generators[i]!r}")
        self._check_abelianized()

    def matrix(self, g):
        """Integer matrix of g on Z^n (columns: exponent sums of the images)."""
        n = len(self.target.generators)
        A = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.images[g]):
            for k, e in w:
                A[k][i] += e
        return A

    def _check_abelianized(self):
        from .invariants import lattice_contains, matmul

        rows = [r for r in self.target.exponent_matrix() if any(r)]
        G = self.group
        mats = [self.matrix(g) for g in range(G.order)]
        for g in range(G.order):
            for h in range(G.order):
                lhs = mats[G.mul(g, h)]
                rhs = matmul(mats[g], mats[h])
                for j in range(len(lhs)):
                    diff = [lhs[i][j] - rhs[i][j] for i in range(len(lhs))]
                    if not lattice_contains(rows, diff):
                        raise PresentationError(
                            f"action is not a homomorphism on the abelianization at "
                            f"({G.elements[g]}, {G.elements[h]})")

    def abelianized_action(self):
        """Matrices of the action on the abelianization, in its Smith basis.

        Returns ``(group, {element name: matrix})``.
        """
        from .invariants import AbelianGroup, diagonal, matmul, smith_normal_form, _inverse_unimodular

        n = len(self.target.generators)
        rows = [r for r in self.target.exponent_matrix() if any(r)]
        if rows:
            D, U, V = smith_normal_form(rows)
            diag = diagonal(D) + [0] * (n - len(diagonal(D)))
        else:
            V = [[int(i == j) for j in range(n)] for i in range(n)]
            diag = [0] * n
        # new coordinates y = V^-1 x; coordinate k is cyclic of order diag[k]
        Vinv = _inverse_unimodular(V) if n else []
        keep_t = sorted((k for k in range(n) if abs(diag[k]) > 1), key=lambda k: abs(diag[k]))
        keep_f = [k for k in range(n) if diag[k] == 0]
        keep = keep_t + keep_f
        mods = [abs(diag[k]) for k in keep_t] + [0] * len(keep_f)
        ab = AbelianGroup(len(keep_f), tuple(mods[: len(keep_t)]))
        out = {}
        for g in range(self.group.order):
            M = matmul(matmul(Vinv, self.matrix(g)), V) if n else []
            out[self.group.elements[g]] = [[M[a][b] % m if m else M[a][b] for b in keep]
                                           for a, m in zip(keep, mods)]
        return ab, out

    @classmethod
    def from_json(cls, data, group: FiniteGroup, target: Presentation):
        if isinstance(data, str):
            data = json.loads(data)
        imgs = data.get("images", data)
        rows = []
        for name in group.elements:
            if name not in imgs:
                raise PresentationError(f"action JSON lacks images for element {name!r}")
            rows.append([parse_word(w, target.generators) for w in imgs[name]])
        return cls(group, target, rows)

    def to_json(self):
        gens = self.target.generators
        return {"images": {self.group.elements[g]: [format_word(w, gens) for w in row]
                           for g, row in enumerate(self.images)}}


@dataclass(frozen=True)
class SymmetricPresentation:
    """A presentation on which G permutes generators (``xi``) and relators (``rho``)."""

    presentation: Presentation
    group: FiniteGroup
    xi: tuple
    rho: tuple

    def __post_init__(self):
        G = self.group
        p = self.presentation
        ng, nr = len(p.generators), len(p.relators)
        for name, perms, size in (("xi", self.xi, ng), ("rho", self.rho, nr)):
            if len(perms) != G.order or any(sorted(q) != list(range(size)) for q in perms):
                raise PresentationError(f"{name} is not a family of permutations indexed by G")
            if any(x != i for i, x in enumerate(perms[G.identity])):
                raise PresentationError(f"{name} does not send the identity to the identity")
            for g in range(G.order):
                for h in range(G.order):
                    gh = perms[G.mul(g, h)]
                    if any(gh[i] != perms[g][perms[h][i]] for i in range(size)):
                        raise PresentationError(f"{name} is not a homomorphism")
        for g in range(G.order):
            for j, r in enumerate(p.relators):
                moved = tuple((self.xi[g][i], e) for i, e in r)
                if moved != p.relators[self.rho[g][j]]:
                    raise PresentationError(
                        f"relator {j} moved by {G.elements[g]!r} is not relator {self.rho[g][j]} letter for letter")


def symmetrize(action: GroupAction) -> SymmetricPresentation:
    """Presentation on generators x_{i,g} on which G acts by x_{i,h} -> x_{i,gh}.

    Relators: every original relator on the copy (x_{1,g}, ..., x_{n,g}) for
    each g, followed by w_{i,g}(x_{1,h}, ..., x_{n,h}) x_{i,hg}^-1 for all i, g, h.
    Relators are kept exactly as instantiated (no free reduction), so that G
    permutes them letter for letter.
    """
    G = action.group
    M = action.target
    n, N = len(M.generators), G.order

    def x(i, g):
        return i * N + g

    names = tuple(f"{M.generators[i]}_{G.elements[g]}" for i in range(n) for g in range(N))
    relators = []
    keys = []
    for g in range(N):
        for j, r in enumerate(M.relators):
            relators.append(tuple((x(i, g), e) for i, e in r))
            keys.append(("w", j, g))
    for i in range(n):
        for g in range(N):
            for h in range(N):
                word = tuple((x(k, h), e) for k, e in action.images[g][i])
                relators.append(word + ((x(i, G.mul(h, g)), -1),))
                keys.append(("a", i, g, h))
    key_index = {k: t for t, k in enumerate(keys)}
    xi, rho = [], []
    for k in range(N):
        xi.append(tuple(x(i, G.mul(k, g)) for i in range(n) for g in range(N)))
        row = []
        for key in keys:
            if key[0] == "w":
                row.append(key_index[("w", key[1], G.mul(k, key[2]))])
            else:
                row.append(key_index[("a", key[1], key[2], G.mul(k, key[3]))])
        rho.append(tuple(row))
    return SymmetricPresentation(Presentation(names, tuple(relators)), G, tuple(xi), tuple(rho))


# ---------------------------------------------------------------------------
# presentation complexes

BASEPOINT = "O"


def _cells(p: Presentation):
    """Cell names and faces of the presentation Delta-complex."""
    faces = {BASEPOINT: ()}
    for i in range(len(p.generators)):
        faces[f"x{i}"] = (BASEPOINT, BASEPOINT)
    for j, r in enumerate(p.relators):
        if not r:
            raise PresentationError(f"relator {j} is the empty word")
        faces[f"b{j}"] = ()
        length = len(r)
        for k in range(length):
            faces[f"s{j}.{k}"] = (f"b{j}", BASEPOINT)
        for k, (i, e) in enumerate(r):
            nxt = f"s{j}.{(k + 1) % length}"
            cur = f"s{j}.{k}"
            # +1: vertex order (p_k, p_k+1, b); -1: (p_k+1, p_k, b)
            faces[f"t{j}.{k}"] = (nxt, cur, f"x{i}") if e == 1 else (cur, nxt, f"x{i}")
    return faces


def presentation_complex(p: Presentation):
    """Delta-complex with one loop per generator and one coned polygon per relator.

    Returns ``(Y, basepoint)``. Each relator of length l contributes a
    barycenter, l spokes and l triangles.
    """
    return DeltaComplex(_cells(p)), BASEPOINT


def _cell_permutation(sp: SymmetricPresentation, g):
    p = sp.presentation
    phi = {BASEPOINT: BASEPOINT}
    for i in range(len(p.generators)):
        phi[f"x{i}"] = f"x{sp.xi[g][i]}"
    for j, r in enumerate(p.relators):
        t = sp.rho[g][j]
        phi[f"b{j}"] = f"b{t}"
        for k in range(len(r)):
            phi[f"s{j}.{k}"] = f"s{t}.{k}"
            phi[f"t{j}.{k}"] = f"t{t}.{k}"
    return phi


def equivariant_presentation_complex(sp: SymmetricPresentation):
    """Simplicial complex sd^2(Y) with G acting by simplicial automorphisms.

    Returns ``(K, basepoint, action)`` with ``action[g]`` a
    :class:`SimplicialMap` for every element name ``g``.
    """
    Y, base = presentation_complex(sp.presentation)
    Y1 = delta_subdivide(Y)
    Y2 = delta_subdivide(Y1)
    K = delta_to_simplicial(Y2)
    G = sp.group
    action = {}
    for g in range(G.order):
        phi = _cell_permutation(sp, g)
        for cell, fs in Y.faces.items():
            if tuple(phi[f] for f in fs) != Y.faces[phi[cell]]:
                raise ComplexError(f"element {G.elements[g]!r} does not act cellularly on {cell!r}")
        phi2 = subdivide_cell_map(Y2, subdivide_cell_map(Y1, phi))
        f = SimplicialMap.from_dict({v: phi2[v] for v in K.vertices})
        if not f.is_automorphism_of(K):
            raise ComplexError(f"element {G.elements[g]!r} does not act simplicially")
        action[G.elements[g]] = f
    for g in range(G.order):
        for h in range(G.order):
            gh = G.elements[G.mul(g, h)]
            if action[G.elements[g]].compose(action[G.elements[h]]) != action[gh]:
                raise ComplexError("induced maps do not form a homomorphism")
    return K, f"{base}/1/1", action
