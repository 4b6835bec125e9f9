"""Turán-type families with explicit part and perturbation bookkeeping."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .canon import canonical_code, canonical_graph
from .errors import FamilyMismatchError, InvalidArgument, UnsupportedSize
from .graph import (Edge, Graph, complete_graph, complete_multipartite, iter_bits,
                    matching_graph, norm_edge, star_graph)

log = logging.getLogger(__name__)

FAMILY_Q_CAP = 6
ALL_GRAPHS_CAP = 8
CROSS_CHECK_MAX_N = 12


@dataclass(frozen=True)
class PartitionedGraph:
    graph: Graph
    parts: tuple[tuple[int, ...], ...]
    base_sizes: tuple[int, ...]
    added_class_edges: tuple[Edge, ...] = ()
    deleted_cross_edges: tuple[Edge, ...] = ()
    label: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def alpha1(self) -> int:
        return len(self.added_class_edges)

    @property
    def alpha2(self) -> int:
        return len(self.deleted_cross_edges)

    def part_of(self) -> list[int]:
        owner = [0] * self.n
        for i, part in enumerate(self.parts):
            for v in part:
                owner[v] = i
        return owner

    def base(self) -> Graph:
        return complete_multipartite(self.base_sizes)

    def validate(self) -> None:
        """Raise InvalidArgument unless every structural invariant holds."""
        seen = sorted(v for part in self.parts for v in part)
        if seen != list(range(self.n)):
            raise InvalidArgument("parts do not partition the vertex set")
        if tuple(len(p) for p in self.parts) != self.base_sizes:
            raise InvalidArgument("part sizes disagree with base_sizes")
        owner = self.part_of()
        for u, v in self.added_class_edges:
            if owner[u] != owner[v]:
                raise InvalidArgument(f"added edge {(u, v)} is not a class-edge")
        for u, v in self.deleted_cross_edges:
            if owner[u] == owner[v]:
                raise InvalidArgument(f"deleted edge {(u, v)} is not a cross-edge")
        expect = _layout_base(self.parts, self.n).add_edges(self.added_class_edges)
        expect = expect.remove_edges(self.deleted_cross_edges)
        if expect != self.graph:
            raise InvalidArgument("graph differs from base + added - deleted")

    def embedded(self) -> list[Graph]:
        """Per-part induced graphs (class-edges only, isolated vertices kept)."""
        return [self.graph.induced(list(p)) for p in self.parts]


def _layout_base(parts, n) -> Graph:
    owner_mask = []
    full = (1 << n) - 1
    rows = [0] * n
    for part in parts:
        m = 0
        for v in part:
            m |= 1 << v
        owner_mask.append(m)
        for v in part:
            rows[v] = full & ~m
    return Graph(n, tuple(rows))


def _contiguous_parts(sizes) -> tuple[tuple[int, ...], ...]:
    parts = []
    start = 0
    for s in sizes:
        parts.append(tuple(range(start, start + s)))
        start += s
    return tuple(parts)


def _check_descending(sizes):
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InvalidArgument(f"part sizes must be sorted descending, got {list(sizes)}")


def turan_sizes(n: int, r: int) -> tuple[int, ...]:
    if r < 1 or n < 1:
        raise InvalidArgument("need n >= 1 and r >= 1")
    if r > n:
        raise InvalidArgument(f"r={r} exceeds n={n}")
    q, rem = divmod(n, r)
    return tuple(q + 1 if i < rem else q for i in range(r))


def perturbed_multipartite(sizes: Sequence[int], class_edges: Sequence[Edge] = (),
                           cross_nonedges: Sequence[Edge] = (), label: str = "") -> PartitionedGraph:
    sizes = tuple(int(s) for s in sizes)
    _check_descending(sizes)
    base = complete_multipartite(sizes)
    parts = _contiguous_parts(sizes)
    owner = [i for i, p in enumerate(parts) for _ in p]
    n = base.n
    added = []
    for u, v in class_edges:
        e = norm_edge(u, v)
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InvalidArgument(f"class edge {e} out of range")
        if owner[u] != owner[v]:
            raise InvalidArgument(f"edge {e} joins two parts; not a class-edge")
        if e in added:
            raise InvalidArgument(f"class edge {e} listed twice")
        added.append(e)
    deleted = []
    for u, v in cross_nonedges:
        e = norm_edge(u, v)
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InvalidArgument(f"cross edge {e} out of range")
        if owner[u] == owner[v]:
            raise InvalidArgument(f"edge {e} lies inside a part; not a cross-edge")
        if e in deleted:
            raise InvalidArgument(f"cross edge {e} listed twice")
        deleted.append(e)
    g = base.add_edges(added).remove_edges(deleted)
    return PartitionedGraph(g, parts, sizes, tuple(added), tuple(deleted), label)


def embed(sizes: Sequence[int], graphs: Sequence[Graph | None], label: str = "") -> PartitionedGraph:
    """Place ``graphs[i]`` on the first vertices of part ``i``."""
    sizes = tuple(sizes)
    if len(graphs) != len(sizes):
        raise InvalidArgument("need one embedded graph (or None) per part")
    edges = []
    start = 0
    for s, h in zip(sizes, graphs):
        if h is not None and h.m:
            if h.n > s:
                raise InvalidArgument(f"embedded graph on {h.n} vertices exceeds part of size {s}")
            edges += [(start + u, start + v) for u, v in h.edges()]
        start += s
    return perturbed_multipartite(sizes, edges, (), label)


def turan(n: int, r: int) -> PartitionedGraph:
    sizes = turan_sizes(n, r)
    return embed(sizes, [None] * r, f"T({n},{r})")


def y_graph(n: int, r: int, q: int) -> PartitionedGraph:
    """T(n,r) plus a q-edge matching inside a largest part."""
    sizes = turan_sizes(n, r)
    if q < 0 or 2 * q > sizes[0]:
        raise InvalidArgument(f"a {q}-edge matching does not fit in a part of size {sizes[0]}")
    return embed(sizes, [matching_graph(q)] + [None] * (r - 1), f"Y({n},{r},{q})")


def l_host(q: int) -> Graph:
    """The graph embedded by L(n,r,q): K_3 when q = 3, else the q-edge star."""
    return complete_graph(3) if q == 3 else star_graph(q)


def l_graph(n: int, r: int, q: int) -> PartitionedGraph:
    """T(n,r) plus l_host(q) inside a smallest part."""
    sizes = turan_sizes(n, r)
    h = l_host(q)
    if q < 0 or (q > 0 and h.n > sizes[-1]):
        raise InvalidArgument(f"L host with {q} edges does not fit in a part of size {sizes[-1]}")
    hs = [None] * r
    if q > 0:
        hs[-1] = h
    return embed(sizes, hs, f"L({n},{r},{q})")


def t_star_graph(n: int, r: int, q: int) -> PartitionedGraph:
    """T(n,r) plus a q-edge star inside a largest part."""
    sizes = turan_sizes(n, r)
    if q < 0 or q + 1 > sizes[0]:
        raise InvalidArgument(f"a {q}-edge star does not fit in a part of size {sizes[0]}")
    hs = [star_graph(q) if q else None] + [None] * (r - 1)
    return embed(sizes, hs, f"Tstar({n},{r},{q})")


def classify_edges(pg: PartitionedGraph) -> tuple[list[Edge], list[Edge]]:
    owner = pg.part_of()
    cls, cross = [], []
    for u, v in pg.graph.edges():
        (cls if owner[u] == owner[v] else cross).append((u, v))
    return cls, cross


def partition_graph(g: Graph, parts: Sequence[Sequence[int]]) -> PartitionedGraph:
    """Wrap an arbitrary graph with a partition, deriving the bookkeeping."""
    parts_t = tuple(tuple(sorted(p)) for p in parts)
    order = sorted(range(len(parts_t)), key=lambda i: -len(parts_t[i]))
    parts_t = tuple(parts_t[i] for i in order)
    sizes = tuple(len(p) for p in parts_t)
    owner = {}
    for i, p in enumerate(parts_t):
        for v in p:
            owner[v] = i
    if sorted(owner) != list(range(g.n)):
        raise InvalidArgument("parts do not partition the vertex set")
    added = [e for e in g.edges() if owner[e[0]] == owner[e[1]]]
    deleted = []
    for i, j in combinations(range(len(parts_t)), 2):
        for u in parts_t[i]:
            for v in parts_t[j]:
                if not g.has_edge(u, v):
                    deleted.append(norm_edge(u, v))
    return PartitionedGraph(g, parts_t, sizes, tuple(added), tuple(sorted(deleted)))


# -- descriptors -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class FamilyDescriptor:
    """Multiset of (part size, canonical code of embedded graph) pairs."""
    entries: tuple[tuple[int, bytes], ...]

    @classmethod
    def of(cls, pairs) -> "FamilyDescriptor":
        return cls(tuple(sorted(pairs, key=lambda p: (-p[0], p[1]))))

    def __str__(self):
        return ";".join(f"{s}:{c.hex()}" for s, c in self.entries)


def descriptor(pg: PartitionedGraph) -> FamilyDescriptor:
    pairs = []
    for part in pg.parts:
        h = pg.graph.induced(list(part)).strip_isolated()
        pairs.append((len(part), canonical_code(h)))
    return FamilyDescriptor.of(pairs)


_SHAPES: dict[int, list[Graph]] = {}


def edge_shapes(k: int) -> list[Graph]:
    """All graphs with exactly k edges and no isolated vertices, canonical, sorted."""
    if k in _SHAPES:
        return _SHAPES[k]
    if k == 0:
        res = [Graph.empty(0)]
    else:
        seen = {}
        for h in edge_shapes(k - 1):
            n = h.n
            cands = [(u, v) for u, v in combinations(range(n), 2) if not h.has_edge(u, v)]
            cands += [(u, n) for u in range(n)]
            cands.append((n, n + 1))
            for u, v in cands:
                size = max(n, v + 1)
                g = Graph(size, h.adj + (0,) * (size - n)).add_edges([(u, v)])
                c = canonical_code(g)
                if c not in seen:
                    seen[c] = canonical_graph(g)
        res = [seen[c] for c in sorted(seen)]
    _SHAPES[k] = res
    return res


def _compositions(q, r):
    if r == 1:
        yield (q,)
        return
    for first in range(q, -1, -1):
        for rest in _compositions(q - first, r - 1):
            yield (first,) + rest


def enumerate_family(n: int, r: int, q: int, cap: int = FAMILY_Q_CAP,
                     cross_validate: bool | None = None,
                     on_mismatch: str = "raise") -> list[PartitionedGraph]:
    """One representative per isomorphism class of T(n,r) + q class edges.

    Classes are keyed by FamilyDescriptor and returned in descriptor order.
    For n <= 12 the descriptor classes are checked against canonical codes
    of the full graphs.  When two descriptors give isomorphic graphs (this
    happens when an embedded graph nearly fills a tiny part) the default is
    to raise FamilyMismatchError; ``on_mismatch="merge"`` keeps the first
    descriptor of each true class and logs the collision instead.
    """
    if on_mismatch not in ("raise", "merge"):
        raise InvalidArgument("on_mismatch must be 'raise' or 'merge'")
    if q > cap:
        raise UnsupportedSize(f"family enumeration capped at q <= {cap}, got {q}")
    if q < 0:
        raise InvalidArgument("q must be nonnegative")
    sizes = turan_sizes(n, r)
    if q > sum(comb(s, 2) for s in sizes):
        raise InvalidArgument(f"cannot place {q} edges inside the parts of T({n},{r})")
    codes = {k: [(h, canonical_code(h)) for h in edge_shapes(k)] for k in range(q + 1)}
    found: dict[FamilyDescriptor, list[Graph]] = {}
    for split in _compositions(q, r):
        options = []
        for s, k in zip(sizes, split):
            options.append([(h, c) for h, c in codes[k] if h.n <= s and h.m <= comb(s, 2)])
        for choice in product(*options):
            d = FamilyDescriptor.of([(s, c) for s, (_, c) in zip(sizes, choice)])
            if d not in found:
                found[d] = [h for h, _ in choice]
    out = []
    for d in sorted(found):
        hs = found[d]
        pg = embed(sizes, [h if h.m else None for h in hs], f"class[{len(out)}]")
        out.append(pg)
    if cross_validate is None:
        cross_validate = n <= CROSS_CHECK_MAX_N
    if cross_validate:
        seen = {}
        kept = []
        for d, pg in zip(sorted(found), out):
            c = canonical_code(pg.graph)
            if c in seen:
                msg = (f"descriptors {seen[c]} and {d} give isomorphic graphs "
                       f"for n={n}, r={r}, q={q}")
                if on_mismatch == "raise":
                    raise FamilyMismatchError(msg)
                log.warning(msg)
                continue
            seen[c] = d
            kept.append(pg)
        out = kept
    return out


def find_member(members: Sequence[PartitionedGraph], target: PartitionedGraph) -> int:
    """Index of the member sharing ``target``'s descriptor."""
    d = descriptor(target)
    hits = [i for i, m in enumerate(members) if descriptor(m) == d]
    if len(hits) != 1:
        raise FamilyMismatchError(f"expected exactly one match for {target.label}, got {len(hits)}")
    return hits[0]


def enumerate_all_graphs(n: int) -> Iterator[Graph]:
    """One canonical representative per isomorphism class on n vertices.

    Built by vertex augmentation: every n-vertex graph arises from some
    (n-1)-vertex class by attaching a new vertex to a subset of it.
    """
    if n > ALL_GRAPHS_CAP:
        raise UnsupportedSize(f"exhaustive enumeration capped at n <= {ALL_GRAPHS_CAP}, got {n}")
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    yield from _all_graphs(n)


def _all_graphs(n) -> list[Graph]:
    if n in _ALL_CACHE:
        return _ALL_CACHE[n]
    if n == 0:
        res = [Graph.empty(0)]
    else:
        seen: dict[bytes, Graph] = {}
        for h in _all_graphs(n - 1):
            for mask in range(1 << (n - 1)):
                rows = list(h.adj) + [mask]
                for u in iter_bits(mask):
                    rows[u] |= 1 << (n - 1)
                g = Graph(n, tuple(rows))
                c = canonical_code(g)
                if c not in seen:
                    seen[c] = g
        res = [canonical_graph(seen[c]) for c in sorted(seen)]
    _ALL_CACHE[n] = res
    return res


_ALL_CACHE: dict[int, list[Graph]] = {}


def sidecar(pg: PartitionedGraph) -> dict:
    return {
        "label": pg.label,
        "n": pg.n,
        "parts": [list(p) for p in pg.parts],
        "base_sizes": list(pg.base_sizes),
        "alpha1": pg.alpha1,
        "alpha2": pg.alpha2,
        "added_class_edges": [list(e) for e in pg.added_class_edges],
        "deleted_cross_edges": [list(e) for e in pg.deleted_cross_edges],
    }


def from_sidecar(g: Graph, data: dict) -> PartitionedGraph:
    pg = PartitionedGraph(
        g,
        tuple(tuple(p) for p in data["parts"]),
        tuple(data["base_sizes"]),
        tuple(tuple(e) for e in data.get("added_class_edges", [])),
        tuple(tuple(e) for e in data.get("deleted_cross_edges", [])),
        data.get("label", ""),
    )
    pg.validate()
    return pg
