"""Automorphisms of vertex-coloured, edge-typed graphs.

Individualisation/refinement search. Refinement is colour refinement driven
by 64-bit mixing hashes; the hash of a vertex after ``t`` rounds is an
isomorphism invariant of (graph, initial colouring, t), so two branches of
the search are compared only after the same number of rounds. Hash
collisions can only coarsen a colouring, never split an orbit, and every
leaf is verified edge by edge before it is reported.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_INDIVIDUALISE = np.uint64(0x9E3779B97F4A7C15)
_BLOCK = 8


class SearchBudgetExceeded(RuntimeError):
    """Raised when the search visits more nodes than the caller allowed."""


@njit(cache=True)
def _mix(x):
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@njit(cache=True)
def _rounds(indptr, indices, etypes, colors, n_rounds):
    n = colors.shape[0]
    cur = colors.copy()
    nxt = np.empty_like(cur)
    for _ in range(n_rounds):
        for v in range(n):
            acc = np.uint64(0)
            for k in range(indptr[v], indptr[v + 1]):
                salt = np.uint64(etypes[k]) * np.uint64(0xD6E8FEB86659FD93)
                acc += _mix(cur[indices[k]] ^ salt)
            nxt[v] = _mix(cur[v] * np.uint64(0x100000001B3) + _mix(acc))
        cur, nxt = nxt, cur
    return cur


class ColoredGraph:
    """Undirected-storage graph with typed arcs; both directions are stored
    explicitly so directed relations use two arc types."""

    def __init__(self, n, arcs, etypes, colors):
        arcs = np.asarray(arcs, dtype=np.int64).reshape(-1, 2)
        etypes = np.asarray(etypes, dtype=np.int64)
        self.n = int(n)
        order = np.lexsort((arcs[:, 1], arcs[:, 0])) if len(arcs) else np.zeros(0, np.int64)
        src = arcs[order, 0] if len(arcs) else np.zeros(0, np.int64)
        self.indices = arcs[order, 1] if len(arcs) else np.zeros(0, np.int64)
        self.etypes = etypes[order] if len(arcs) else np.zeros(0, np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(self.indptr, src + 1, 1)
        self.indptr = np.cumsum(self.indptr)
        self.src = src
        self.colors = np.asarray(colors, dtype=np.uint64)
        self._ntypes = int(self.etypes.max()) + 1 if len(self.etypes) else 1
        self._arc_codes = np.sort(self._encode(np.arange(self.n, dtype=np.int64)))

    def _encode(self, perm):
        return (perm[self.src] * self.n + perm[self.indices]) * self._ntypes + self.etypes

    def is_automorphism(self, perm):
        if not np.array_equal(self.colors[perm], self.colors):
            return False
        return np.array_equal(np.sort(self._encode(perm)), self._arc_codes)

    def run(self, colors, n_rounds):
        if n_rounds == 0:
            return colors
        return _rounds(self.indptr, self.indices, self.etypes, colors, n_rounds)


def _n_classes(colors):
    return np.unique(colors).size


def _refine_free(graph, colors):
    """Refine until stable; return colours plus the checkpoint schedule."""
    counts = [_n_classes(colors)]
    while True:
        nxt = graph.run(colors, _BLOCK)
        c = _n_classes(nxt)
        counts.append(c)
        colors = nxt
        if c == counts[-2] or c == graph.n:
            return colors, counts


def _refine_scheduled(graph, colors, counts):
    if _n_classes(colors) != counts[0]:
        return None
    for expected in counts[1:]:
        colors = graph.run(colors, _BLOCK)
        if _n_classes(colors) != expected:
            return None
    return colors


def _target_cell(colors):
    vals, inv, sizes = np.unique(colors, return_inverse=True, return_counts=True)
    multi = np.nonzero(sizes > 1)[0]
    if multi.size == 0:
        return None
    best = multi[np.argmin(sizes[multi])]
    return vals[best]


def automorphisms(graph: ColoredGraph, node_budget: int | None = None):
    """Return every automorphism of ``graph`` as a sorted list of int arrays."""
    colors, counts = _refine_free(graph, graph.colors.copy())
    base_colors = [colors]
    schedules = [counts]
    targets = []
    base_vertices = []
    nodes = 1
    while True:
        tgt = _target_cell(colors)
        if tgt is None:
            break
        cell = np.nonzero(colors == tgt)[0]
        v = int(cell[0])
        targets.append(tgt)
        base_vertices.append(v)
        colors = colors.copy()
        colors[v] = _mix_scalar(colors[v])
        colors, counts = _refine_free(graph, colors)
        nodes += 1
        base_colors.append(colors)
        schedules.append(counts)
    base_leaf = base_colors[-1]
    depth = len(targets)
    base_order = np.argsort(base_leaf, kind="stable")
    base_sorted = base_leaf[base_order]

    found = []

    def leaf_perm(leaf):
        perm = np.empty(graph.n, dtype=np.int64)
        perm[base_order] = np.argsort(leaf, kind="stable")
        return perm

    def search(level, colors):
        nonlocal nodes
        if level == depth:
            if not np.array_equal(np.sort(colors), base_sorted):
                return
            perm = leaf_perm(colors)
            if graph.is_automorphism(perm):
                found.append(perm)
            return
        cell = np.nonzero(colors == targets[level])[0]
        for w in cell:
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchBudgetExceeded(f"automorphism search exceeded {node_budget} nodes")
            child = colors.copy()
            child[w] = _mix_scalar(child[w])
            child = _refine_scheduled(graph, child, schedules[level + 1])
            if child is None:
                continue
            search(level + 1, child)

    search(0, base_colors[0])
    found.sort(key=lambda p: p.tolist())
    return found


def _mix_scalar(c):
    return _mix(np.uint64(c) ^ _INDIVIDUALISE)


def initial_colors(keys):
    """Hash arbitrary hashable per-vertex invariants to uint64 colours.

    The labels depend only on the multiset of keys so they are canonical.
    """
    distinct = sorted(set(keys))
    rank = {k: i for i, k in enumerate(distinct)}
    raw = np.array([rank[k] + 1 for k in keys], dtype=np.uint64)
    return _mix_array(raw)


@njit(cache=True)
def _mix_array(a):
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = _mix(a[i])
    return out
