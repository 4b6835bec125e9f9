"""Pattern analysis and exact copy counting.

A copy of F in G is a subgraph of G isomorphic to F (not necessarily
induced), so N_F(G) = #(injective edge-preserving maps F -> G) / |Aut(F)|.

Counting through a fixed host edge e = uv pins some F-edge ab onto (u, v)
and extends by backtracking over bit-rows; the final vertex is counted by
a popcount instead of being enumerated.  Every copy through e is reached
by exactly |Aut(F)| (arc, extension) pairs, one per automorphism.

For a partitioned host whose base is r-partite with r < chi(F), the base
minus deleted cross-edges is F-free, so adding the class-edges one at a
time telescopes: N_F(G) = sum_k N_F(G_k, e_k).  That is what makes
hosts with n in the hundreds countable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidArgument, UnsupportedSize
from .families import PartitionedGraph, perturbed_multipartite, turan_sizes
from .graph import (Edge, Graph, book_graph, complete_graph, cycle_graph, iter_bits,
                    path_graph, popcount, star_graph, wheel_graph)

CHROMATIC_CAP = 12
COUNT_PATTERN_CAP = 6
COVER_GENERIC_CAP = 40
MAX_COPIES = 1_000_000


# -- chromatic number -------------------------------------------------------

def _clique_number(adj, n) -> int:
    best = 0

    def expand(size, cand):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + popcount(cand) <= best:
            return
        while cand:
            if size + popcount(cand) <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & adj[v])

    expand(0, (1 << n) - 1)
    return best


def _colorable(adj, n, k) -> bool:
    colour = [-1] * n
    # colour high-degree vertices first
    order = sorted(range(n), key=lambda v: -popcount(adj[v]))

    def place(i):
        if i == n:
            return True
        v = order[i]
        used = {colour[u] for u in iter_bits(adj[v]) if colour[u] >= 0}
        top = max(colour) + 1  # symmetry break: at most one fresh colour
        for c in range(min(k, top + 1)):
            if c in used:
                continue
            colour[v] = c
            if place(i + 1):
                return True
            colour[v] = -1
        return False

    return place(0)


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by branch and bound; n <= 12."""
    if g.n > CHROMATIC_CAP:
        raise UnsupportedSize(f"chromatic number capped at n <= {CHROMATIC_CAP}, got {g.n}")
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1
    k = max(_clique_number(g.adj, g.n), 2)
    while not _colorable(g.adj, g.n, k):
        k += 1
    return k


# -- automorphisms ------------------------------------------------------------

@lru_cache(maxsize=256)
def automorphisms(g: Graph) -> tuple[tuple[int, ...], ...]:
    """All automorphisms as tuples perm[v]; intended for small patterns."""
    n = g.n
    degs = g.degrees()
    out = []
    perm = [-1] * n
    used = 0

    def extend(v):
        nonlocal used
        if v == n:
            out.append(tuple(perm))
            return
        for w in range(n):
            if used >> w & 1 or degs[w] != degs[v]:
                continue
            ok = True
            for u in range(v):
                if (g.adj[v] >> u & 1) != (g.adj[w] >> perm[u] & 1):
                    ok = False
                    break
            if ok:
                perm[v] = w
                used |= 1 << w
                extend(v + 1)
                used &= ~(1 << w)
        perm[v] = -1

    extend(0)
    return tuple(out)


# -- patterns -----------------------------------------------------------------

@dataclass(frozen=True)
class Pattern:
    f_graph: Graph
    f: int
    chi: int
    critical_edges: tuple[Edge, ...]
    aut: int
    name: str = ""

    @property
    def r(self) -> int:
        return self.chi - 1

    @property
    def is_color_critical(self) -> bool:
        return bool(self.critical_edges)

    def to_json(self) -> dict:
        return {"name": self.name, "f": self.f, "chi": self.chi, "aut": self.aut,
                "critical_edges": [list(e) for e in self.critical_edges]}


def analyze_pattern(g: Graph, name: str = "") -> Pattern:
    if g.n > CHROMATIC_CAP:
        raise UnsupportedSize(f"patterns capped at n <= {CHROMATIC_CAP}, got {g.n}")
    if g.n == 0 or not g.is_connected():
        raise InvalidArgument("pattern must be a nonempty connected graph")
    chi = chromatic_number(g)
    critical = tuple(e for e in g.edges() if chromatic_number(g.remove_edges([e])) < chi)
    return Pattern(g, g.n, chi, critical, len(automorphisms(g)), name)


_NAMED = {
    "K": complete_graph,
    "C": cycle_graph,
    "B": book_graph,
    "W": wheel_graph,
    "P": path_graph,
    "S": star_graph,
}


def named_pattern(name: str) -> Pattern:
    """``K3``, ``K4``, ``C5``, ``B2`` (book), ``W5`` (wheel, rim 5), ``P4``, ``S3``."""
    m = re.fullmatch(r"([KCBWPS])_?(\d+)", name.strip())
    if not m:
        raise InvalidArgument(f"unknown pattern {name!r}; expected e.g. K3, C5, B2, W5")
    return analyze_pattern(_NAMED[m.group(1)](int(m.group(2))), name=f"{m.group(1)}{m.group(2)}")


# -- embedding search -----------------------------------------------------------

def _search_order(fg: Graph, first: Sequence[int]) -> list[int]:
    """Vertex order starting with ``first``, each later vertex adjacent to an
    earlier one when possible (most constrained first)."""
    order = list(first)
    placed = 0
    for v in order:
        placed |= 1 << v
    while len(order) < fg.n:
        best, key = None, None
        for v in range(fg.n):
            if placed >> v & 1:
                continue
            k = (popcount(fg.adj[v] & placed), popcount(fg.adj[v]), -v)
            if key is None or k > key:
                best, key = v, k
        order.append(best)
        placed |= 1 << best
    return order


def _count_extensions(fg: Graph, order: Sequence[int], host: Graph, fixed: Sequence[int]) -> int:
    """Injective edge-preserving maps with order[i] -> fixed[i] for the
    prefix, extended over the rest of ``order``."""
    f = fg.n
    k = len(fixed)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[u] for u in iter_bits(fg.adj[order[i]]) if pos[u] < i] for i in range(f)]
    for i in range(k):
        for j in back[i]:
            if not host.adj[fixed[i]] >> fixed[j] & 1:
                return 0
    img = list(fixed) + [0] * (f - k)
    full = (1 << host.n) - 1
    adj = host.adj

    def rec(i, used):
        cand = full & ~used
        for j in back[i]:
            cand &= adj[img[j]]
        if i == f - 1:
            return popcount(cand)
        total = 0
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            img[i] = w
            total += rec(i + 1, used | low)
            cand ^= low
        return total

    if k == f:
        return 1
    used = 0
    for w in fixed:
        used |= 1 << w
    return rec(k, used)


@lru_cache(maxsize=256)
def _arc_orbits(fg: Graph) -> tuple[tuple[tuple[int, int], int], ...]:
    """Representative arcs (a, b) of F with the size of their Aut(F)-orbit."""
    autos = automorphisms(fg)
    seen = set()
    reps = []
    for a, b in fg.edges():
        for arc in ((a, b), (b, a)):
            if arc in seen:
                continue
            orbit = {(p[arc[0]], p[arc[1]]) for p in autos}
            seen |= orbit
            reps.append((arc, len(orbit)))
    return tuple(reps)


def _check_pattern(F: Pattern):
    if F.f > COUNT_PATTERN_CAP:
        raise UnsupportedSize(f"copy counting supports patterns with f <= {COUNT_PATTERN_CAP}, got {F.f}")


def _host(g) -> Graph:
    return g.graph if isinstance(g, PartitionedGraph) else g


def count_embeddings(F: Pattern, g: Graph) -> int:
    """Injective edge-preserving maps F -> g."""
    _check_pattern(F)
    if F.f > g.n:
        return 0
    fg = F.f_graph
    start = max(range(F.f), key=lambda v: popcount(fg.adj[v]))
    order = _search_order(fg, [start])
    return sum(_count_extensions(fg, order, g, [w]) for w in range(g.n))


def _anchored_embeddings(F: Pattern, g: Graph, u: int, v: int) -> int:
    fg = F.f_graph
    total = 0
    for (a, b), size in _arc_orbits(fg):
        order = _search_order(fg, [a, b])
        total += size * _count_extensions(fg, order, g, [u, v])
    return total


def count_copies_through_edge(F: Pattern, g, e: Edge) -> int:
    """N_F(G, e): copies of F whose edge set contains e."""
    _check_pattern(F)
    g = _host(g)
    u, v = e
    if not (0 <= u < g.n and 0 <= v < g.n) or u == v or not g.has_edge(u, v):
        raise InvalidArgument(f"{tuple(e)} is not an edge of the host graph")
    emb = _anchored_embeddings(F, g, u, v)
    copies, rem = divmod(emb, F.aut)
    assert rem == 0, "anchored embedding count not divisible by |Aut(F)|"
    return copies


def _telescoping_applies(F: Pattern, pg: PartitionedGraph) -> bool:
    return F.chi > pg.r


def count_copies(F: Pattern, g) -> int:
    """N_F(G).  Partitioned hosts with r < chi(F) use the anchored telescoping
    sum over class-edges; anything else falls back to full enumeration."""
    _check_pattern(F)
    if isinstance(g, PartitionedGraph) and _telescoping_applies(F, g):
        cur = g.graph.remove_edges(g.added_class_edges)
        total = 0
        for e in g.added_class_edges:
            cur = cur.add_edges([e])
            total += count_copies_through_edge(F, cur, e)
        return total
    host = _host(g)
    emb = count_embeddings(F, host)
    copies, rem = divmod(emb, F.aut)
    assert rem == 0, "embedding count not divisible by |Aut(F)|"
    return copies


def brute_force_copies(F: Pattern, g: Graph) -> int:
    """Oracle: for every f-subset S, count spanning copies of F inside G[S].

    Copies on S = (edge-preserving bijections F -> G[S]) / |Aut(F)|, found by
    trying every permutation.  Only for tiny inputs.
    """
    from itertools import combinations, permutations

    fedges = F.f_graph.edges()
    total = 0
    for subset in combinations(range(g.n), F.f):
        hits = 0
        for perm in permutations(subset):
            if all(g.has_edge(perm[a], perm[b]) for a, b in fedges):
                hits += 1
        total += hits // F.aut
    return total


# -- c(n, F) --------------------------------------------------------------------

def _require_critical(F: Pattern):
    if not F.critical_edges:
        raise InvalidArgument("pattern is not color-critical")
    if F.chi - 1 < 2:
        raise InvalidArgument(f"need chi(F) - 1 >= 2, got chi = {F.chi}")


def _anchored_in_part(sizes, part, F: Pattern) -> int:
    start = sum(sizes[:part])
    pg = perturbed_multipartite(sizes, [(start, start + 1)])
    return count_copies_through_edge(F, pg.graph, (start, start + 1))


def c_parts_F(sizes: Sequence[int], F: Pattern) -> int:
    """Copies created by one edge added to the part of size sizes[0]."""
    _require_critical(F)
    sizes = [int(s) for s in sizes]
    if len(sizes) != F.chi - 1:
        raise InvalidArgument(f"need r = chi(F) - 1 = {F.chi - 1} parts, got {len(sizes)}")
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InvalidArgument(f"sizes must be descending, got {sizes}")
    if sizes[0] < 2:
        raise InvalidArgument("the first part needs at least two vertices")
    return _anchored_in_part(sizes, 0, F)


def c_n_F(n: int, F: Pattern) -> int:
    """min over single-edge additions to T_{n,r} of the copies through it.

    By symmetry only a largest and a smallest part need trying.
    """
    _require_critical(F)
    sizes = list(turan_sizes(n, F.chi - 1))
    candidates = sorted({0, len(sizes) - 1})
    counts = [_anchored_in_part(sizes, p, F) for p in candidates if sizes[p] >= 2]
    if not counts:
        raise InvalidArgument(f"no part of T_{{{n},{F.chi - 1}}} can hold an edge")
    return min(counts)


# -- covering number --------------------------------------------------------------

def _enumerate_vertex_sets(F: Pattern, g: Graph, anchors: Iterable[Edge] | None) -> set[int]:
    """Vertex-set bitmasks of F-copies; ``anchors`` restricts to copies
    through one of those edges (enough when every copy uses one)."""
    fg = F.f_graph
    f = F.f
    sets: set[int] = set()
    budget = [MAX_COPIES * F.aut]

    def walk(order, fixed):
        pos = {v: i for i, v in enumerate(order)}
        back = [[pos[u] for u in iter_bits(fg.adj[order[i]]) if pos[u] < i] for i in range(f)]
        for i in range(len(fixed)):
            for j in back[i]:
                if not g.adj[fixed[i]] >> fixed[j] & 1:
                    return
        img = list(fixed) + [0] * (f - len(fixed))
        full = (1 << g.n) - 1

        def rec(i, used):
            if i == f:
                budget[0] -= 1
                if budget[0] < 0:
                    raise UnsupportedSize(f"more than {MAX_COPIES} copies; covering number not attempted")
                sets.add(used)
                return
            cand = full & ~used
            for j in back[i]:
                cand &= g.adj[img[j]]
            while cand:
                low = cand & -cand
                img[i] = low.bit_length() - 1
                rec(i + 1, used | low)
                cand ^= low

        used = 0
        for w in fixed:
            used |= 1 << w
        rec(len(fixed), used)

    if anchors is None:
        start = max(range(f), key=lambda v: popcount(fg.adj[v]))
        order = _search_order(fg, [start])
        for w in range(g.n):
            walk(order, [w])
    else:
        for u, v in anchors:
            for (a, b), _ in _arc_orbits(fg):
                order = _search_order(fg, [a, b])
                walk(order, [u, v])
    return sets


def min_hitting_set(sets: Iterable[int]) -> tuple[int, list[int]]:
    """Exact minimum hitting set of a family of vertex bitmasks.

    Branch and bound: branch on the vertices of a smallest unhit set; prune
    with max(greedy disjoint packing, ceil(#unhit / max vertex degree)).
    Starts from the greedy solution as the incumbent.
    """
    family = sorted(set(sets), key=lambda s: (popcount(s), s))
    if not family:
        return 0, []
    if any(s == 0 for s in family):
        raise InvalidArgument("empty set cannot be hit")
    # drop supersets: hitting the subset hits them too
    minimal = []
    for s in family:
        if not any(t & s == t for t in minimal):
            minimal.append(s)

    def greedy(rem):
        chosen = []
        while rem:
            deg = {}
            for s in rem:
                for v in iter_bits(s):
                    deg[v] = deg.get(v, 0) + 1
            v = min(deg, key=lambda w: (-deg[w], w))
            chosen.append(v)
            rem = [s for s in rem if not s >> v & 1]
        return chosen

    best = greedy(minimal)

    def lower(rem):
        packed = 0
        pack = 0
        for s in rem:
            if not s & packed:
                packed |= s
                pack += 1
        deg = {}
        for s in rem:
            for v in iter_bits(s):
                deg[v] = deg.get(v, 0) + 1
        return max(pack, -(-len(rem) // max(deg.values())))

    def search(rem, chosen):
        nonlocal best
        if not rem:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower(rem) >= len(best):
            return
        pivot = min(rem, key=lambda s: (popcount(s), s))
        for v in iter_bits(pivot):
            chosen.append(v)
            search([s for s in rem if not s >> v & 1], chosen)
            chosen.pop()

    search(minimal, [])
    return len(best), sorted(best)


def covering_number(F: Pattern, g) -> int:
    """tau_F(G): fewest vertices meeting every copy of F."""
    _check_pattern(F)
    if isinstance(g, PartitionedGraph) and _telescoping_applies(F, g):
        sets = _enumerate_vertex_sets(F, g.graph, g.added_class_edges)
    else:
        host = _host(g)
        if host.n > COVER_GENERIC_CAP:
            raise UnsupportedSize(f"generic covering path capped at n <= {COVER_GENERIC_CAP}")
        sets = _enumerate_vertex_sets(F, host, None)
    return min_hitting_set(sets)[0]


# -- alpha_F ----------------------------------------------------------------------

def estimate_alpha_F(F: Pattern, n_list: Sequence[int]) -> tuple[float, float]:
    """Least-squares alpha in c(n,F) ~ alpha n^(f-2) and the largest
    relative residual over ``n_list``."""
    ns = [int(n) for n in n_list]
    if len(ns) < 3:
        raise InvalidArgument("need at least 3 sample points")
    if any(a >= b for a, b in zip(ns, ns[1:])):
        raise InvalidArgument(f"n_list must be strictly ascending, got {ns}")
    p = F.f - 2
    cs = [c_n_F(n, F) for n in ns]
    xs = [float(n) ** p for n in ns]
    alpha = math.fsum(c * x for c, x in zip(cs, xs)) / math.fsum(x * x for x in xs)
    resid = max(abs(c - alpha * x) / c for c, x in zip(cs, xs))
    return alpha, resid
