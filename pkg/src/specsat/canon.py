"""Canonical labeling by colour refinement plus individualization.

The search explores the refinement tree, keeps the lexicographically
largest leaf code, and prunes children that lie in one orbit of the
automorphisms discovered so far (restricted to those fixing the current
individualization sequence pointwise).
"""

from __future__ import annotations

from .errors import UnsupportedSize
from .graph import Graph, popcount

DEFAULT_CAP = 16

CanonicalCode = bytes


def _refine(adj, cells):
    """Split cells until the partition is equitable.

    New subcells keep the parent's position and are ordered by their
    neighbour-count signature, which keeps the result label-invariant.
    """
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups = {}
            for v in cell:
                row = adj[v]
                sig = tuple(popcount(row & m) for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    out.append(groups[sig])
            else:
                out.append(cell)
        cells = out
        if not changed:
            return cells


def _leaf_code(adj, order):
    n = len(order)
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    code = 0
    for i, v in enumerate(order):
        row = adj[v]
        r = 0
        while row:
            low = row & -row
            r |= 1 << pos[low.bit_length() - 1]
            row ^= low
        code |= r << (n * i)
    return code


def _orbit_of(vertices, gens, n):
    """Union of orbits of ``vertices`` under the group generated by ``gens``."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for a in range(n):
            ra, rb = find(a), find(g[a])
            if ra != rb:
                parent[ra] = rb
    roots = {find(v) for v in vertices}
    return {v for v in range(n) if find(v) in roots}


def canonical_form(g: Graph, cap: int = DEFAULT_CAP) -> tuple[int, list[int]]:
    """Return (code integer, canonical order) for ``g``.

    ``order[i]`` is the vertex placed at canonical position ``i``.
    """
    n = g.n
    if n > cap:
        raise UnsupportedSize(f"canonical labeling capped at n <= {cap}, got {n}")
    if n == 0:
        return 0, []
    adj = g.adj
    best = [None, None]  # code, order
    autos: list[list[int]] = []

    def search(cells, seq):
        if len(cells) == n:
            order = [c[0] for c in cells]
            code = _leaf_code(adj, order)
            if best[0] is None or code > best[0]:
                best[0], best[1] = code, order
            elif code == best[0]:
                gamma = [0] * n
                for a, b in zip(best[1], order):
                    gamma[a] = b
                autos.append(gamma)
            return
        idx = min((i for i, c in enumerate(cells) if len(c) > 1),
                  key=lambda i: (len(cells[i]), i))
        target = cells[idx]
        explored = []
        for v in target:
            if explored:
                fixing = [a for a in autos if all(a[s] == s for s in seq)]
                if fixing and v in _orbit_of(explored, fixing, n):
                    continue
            rest = [w for w in target if w != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            search(_refine(adj, child), seq + [v])
            explored.append(v)

    search(_refine(adj, [list(range(n))]), [])
    return best[0], best[1]


def canonical_code(g: Graph, cap: int = DEFAULT_CAP) -> CanonicalCode:
    """Isomorphism-invariant byte key; equal iff the graphs are isomorphic."""
    code, _ = canonical_form(g, cap)
    width = (g.n * g.n + 7) // 8
    return g.n.to_bytes(2, "big") + code.to_bytes(width, "big")


def canonical_graph(g: Graph, cap: int = DEFAULT_CAP) -> Graph:
    _, order = canonical_form(g, cap)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)


def is_isomorphic(a: Graph, b: Graph, cap: int = DEFAULT_CAP) -> bool:
    if a.n != b.n or a.m != b.m or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_code(a, cap) == canonical_code(b, cap)
