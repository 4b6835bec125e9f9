"""Undirected simple graphs stored as adjacency bit-rows.

Row ``v`` is a Python int whose bit ``u`` is set iff ``uv`` is an edge, so
common-neighbourhood queries are a single ``&`` plus ``bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidArgument

Edge = tuple[int, int]


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument(f"vertex count must be nonnegative, got {self.n}")
        if len(self.adj) != self.n:
            raise InvalidArgument(f"expected {self.n} rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise InvalidArgument(f"loop at vertex {v}")
            if row & ~full:
                raise InvalidArgument(f"row {v} references a vertex >= n")

    # -- construction -------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidArgument(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"edge {(u, v)} out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        """Build from raw bit-rows, verifying symmetry."""
        g = cls(len(rows), tuple(rows))
        for v, row in enumerate(g.adj):
            for u in iter_bits(row):
                if not g.adj[u] >> v & 1:
                    raise InvalidArgument(f"asymmetric adjacency at ({v}, {u})")
        return g

    @classmethod
    def from_matrix(cls, a) -> "Graph":
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidArgument("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise InvalidArgument("adjacency matrix must be symmetric")
        rows = []
        for i in range(a.shape[0]):
            rows.append(sum(1 << int(j) for j in np.flatnonzero(a[i])))
        return cls(a.shape[0], tuple(rows))

    # -- queries ------------------------------------------------------

    @property
    def m(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def edges(self) -> list[Edge]:
        out = []
        for v, row in enumerate(self.adj):
            for u in iter_bits(row >> (v + 1)):
                out.append((v, v + 1 + u))
        return out

    def max_degree(self) -> int:
        return max((popcount(r) for r in self.adj), default=0)

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(list(iter_bits(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def to_numpy(self, dtype=np.float64) -> np.ndarray:
        if self.n == 0:
            return np.zeros((0, 0), dtype=dtype)
        nbytes = (self.n + 7) // 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.adj)
        bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(self.n, nbytes),
                             axis=1, bitorder="little")[:, : self.n]
        return bits.astype(dtype)

    # -- derived graphs -------------------------------------------------

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        rows = list(self.adj)
        for u, v in edges:
            if u == v:
                raise InvalidArgument(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def remove_edges(self, edges: Iterable[Edge]) -> "Graph":
        rows = list(self.adj)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidArgument("perm must be a permutation of range(n)")
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            pv = perm[v]
            acc = 0
            for u in iter_bits(row):
                acc |= 1 << perm[u]
            rows[pv] = acc
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            acc = 0
            for u in iter_bits(self.adj[v]):
                j = index.get(u)
                if j is not None:
                    acc |= 1 << j
            rows.append(acc)
        return Graph(len(vertices), tuple(rows))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~r & ~(1 << v) for v, r in enumerate(self.adj)))

    def disjoint_union(self, other: "Graph") -> "Graph":
        rows = list(self.adj) + [r << self.n for r in other.adj]
        return Graph(self.n + other.n, tuple(rows))

    def strip_isolated(self) -> "Graph":
        return self.induced([v for v in range(self.n) if self.adj[v]])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph; vertices are grouped by part in order."""
    if len(sizes) == 0:
        raise InvalidArgument("sizes must be nonempty")
    if any(s <= 0 for s in sizes):
        raise InvalidArgument(f"part sizes must be positive, got {list(sizes)}")
    n = sum(sizes)
    full = (1 << n) - 1
    rows = []
    start = 0
    for s in sizes:
        part = ((1 << s) - 1) << start
        rows.extend([full & ~part] * s)
        start += s
    return Graph(n, tuple(rows))


def complete_graph(n: int) -> Graph:
    return complete_multipartite([1] * n) if n else Graph.empty(0)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidArgument("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}: centre 0, leaves 1..leaves."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def matching_graph(q: int) -> Graph:
    return Graph.from_edges(2 * q, [(2 * i, 2 * i + 1) for i in range(q)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def book_graph(pages: int) -> Graph:
    """``pages`` triangles sharing the spine edge 01."""
    edges = [(0, 1)]
    for k in range(pages):
        edges += [(0, 2 + k), (1, 2 + k)]
    return Graph.from_edges(pages + 2, edges)


def wheel_graph(rim: int) -> Graph:
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph.from_edges(rim + 1, edges)


def degree_stats(g: Graph) -> tuple[int, int, int]:
    """(min degree, max degree, sum of squared degrees)."""
    degs = g.degrees()
    if not degs:
        return (0, 0, 0)
    sq = sum(d * d for d in degs)
    m = sum(degs) // 2
    # Sum of squared degrees never exceeds m^2 + m.
    assert sq <= m * m + m, (sq, m)
    return (min(degs), max(degs), sq)


def all_labeled_graphs(n: int) -> Iterator[Graph]:
    """Every labeled graph on n vertices, indexed by an upper-triangle mask."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for k, (u, v) in enumerate(pairs):
            if mask >> k & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        yield Graph(n, tuple(rows))
