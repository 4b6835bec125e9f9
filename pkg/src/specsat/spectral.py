"""Spectral radius by certified power iteration and by the walk-series
characteristic equation of a multipartite graph with embedded class graphs.

Power iteration runs on ``A + shift*I``.  Every returned interval is a pair
of Collatz-Wielandt quotients min/max (Ax)_v / x_v of the final positive
vector, recomputed with correctly rounded row sums (``math.fsum``) and
widened outward by two ulps, so it encloses the exact spectral radius
whether or not the iteration converged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (DivergenceRisk, InvalidArgument, NumericError, UnsupportedRegime,
                     WalkOverflowError)
from .families import PartitionedGraph, embed
from .graph import Graph, iter_bits, norm_edge

DEFAULT_TOL = 1e-10
MAX_WALK_LENGTH = 64


@dataclass
class SpectralResult:
    lam: float
    interval: tuple[float, float]
    perron: np.ndarray = field(repr=False)
    residual: float
    iterations: int
    converged: bool = True

    @property
    def lo(self) -> float:
        return self.interval[0]

    @property
    def hi(self) -> float:
        return self.interval[1]

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]

    def to_json(self) -> dict:
        return {"lambda": self.lam, "interval": [self.lo, self.hi],
                "residual": self.residual, "iterations": self.iterations,
                "converged": self.converged}


def _down(x, k=2):
    for _ in range(k):
        x = math.nextafter(x, -math.inf)
    return x


def _up(x, k=2):
    for _ in range(k):
        x = math.nextafter(x, math.inf)
    return x


def _certify(nbrs, x):
    """Outward-rounded Collatz-Wielandt bounds for the positive vector x."""
    lo, hi = math.inf, -math.inf
    for v, idx in enumerate(nbrs):
        s = math.fsum(x[idx]) if len(idx) else 0.0
        q = s / x[v]
        lo = min(lo, _down(q))
        hi = max(hi, _up(q))
    return max(lo, 0.0), hi


def _polish(a, nbrs, x, hi, tol, steps=6):
    """Inverse iteration with a shift just above the certified upper bound.

    (mu I - A)^-1 is entrywise positive for mu > lambda, so each step keeps
    x positive while contracting the non-Perron part by roughly
    (mu - lambda)/(mu - lambda_2).
    """
    n = a.shape[0]
    best = _certify(nbrs, x)
    for _ in range(steps):
        mu = hi * (1 + 1e-6) + 1e-9
        try:
            z = np.linalg.solve(mu * np.eye(n) - a, x)
        except np.linalg.LinAlgError:
            break
        if not np.all(z > 0):
            break
        x = z / np.linalg.norm(z)
        cert = _certify(nbrs, x)
        if cert[1] - cert[0] < best[1] - best[0]:
            best = cert
        hi = min(hi, cert[1])
        if cert[1] - cert[0] <= tol:
            break
    return x, best


def _component_radius(a, nbrs, tol, shift, max_iter, x0, polish_after):
    n = a.shape[0]
    x = np.ones(n) if x0 is None else np.array(x0, dtype=float)
    if x.shape != (n,) or not np.all(x > 0):
        raise InvalidArgument("warm start must be a positive vector of matching length")
    x /= np.linalg.norm(x)
    best_width = math.inf
    stall = 0
    it = 0
    certified = None
    next_cert = 0
    while True:
        y = a @ x
        ratio = y / x
        width = float(ratio.max() - ratio.min())
        done = it >= max_iter or stall > 500 or it >= polish_after
        if done or (width <= tol and it >= next_cert):
            certified = _certify(nbrs, x)
            if done or certified[1] - certified[0] <= tol:
                break
            next_cert = it + 25
        if width < best_width * (1 - 1e-3):
            best_width = width
            stall = 0
        else:
            stall += 1
        x = y + shift * x
        x /= np.linalg.norm(x)
        it += 1
    lo, hi = certified
    if hi - lo > tol:
        # float round-off puts a floor under the power-iteration width
        # near n ~ 1000; a few inverse-iteration steps get past it
        xp, cert = _polish(a, nbrs, x, hi, tol)
        if cert[1] - cert[0] < hi - lo:
            x, (lo, hi) = xp, cert
    y = a @ x
    rq = float(x @ y)
    lam = min(max(rq, lo), hi)
    residual = float(np.linalg.norm(y - lam * x))
    return lam, (lo, hi), x, residual, it, hi - lo <= tol


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, shift: float = 1.0,
                    max_iter: int = 200_000, x0=None,
                    polish_after: int = 500) -> SpectralResult:
    """Largest adjacency eigenvalue with a certified enclosing interval.

    Disconnected graphs: the maximum over components; the Perron vector is
    supported on one extremal component and zero elsewhere.  ``x0`` is an
    optional positive warm start over all vertices.  If the width is still
    above ``tol`` after ``polish_after`` iterations (or the iteration
    stalls), the vector is refined by inverse iteration before certifying.
    """
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    n = g.n
    if n == 0:
        return SpectralResult(0.0, (0.0, 0.0), np.zeros(0), 0.0, 0)
    if g.m == 0:
        return SpectralResult(0.0, (0.0, 0.0), np.full(n, 1 / math.sqrt(n)), 0.0, 0)
    best = None
    for comp in g.components():
        if len(comp) < 2:
            continue
        sub = g.induced(comp)
        a = sub.to_numpy()
        nbrs = [np.flatnonzero(a[v]) for v in range(len(comp))]
        w0 = None if x0 is None else np.asarray(x0, dtype=float)[comp]
        lam, iv, x, res, it, conv = _component_radius(a, nbrs, tol, shift, max_iter, w0, polish_after)
        if best is None or lam > best[0]:
            best = (lam, iv, comp, x, res, it, conv)
    lam, iv, comp, x, res, it, conv = best
    perron = np.zeros(n)
    perron[comp] = x / np.linalg.norm(x)
    return SpectralResult(lam, iv, perron, res, it, conv)


def compare(a: SpectralResult, b: SpectralResult) -> str:
    """'<', '>' when the intervals are disjoint, else 'indeterminate'."""
    if a.hi < b.lo:
        return "<"
    if b.hi < a.lo:
        return ">"
    return "indeterminate"


def certified_compare(g1: Graph, g2: Graph, tol: float = DEFAULT_TOL) -> tuple[str, SpectralResult, SpectralResult]:
    """Compare spectral radii; overlapping intervals are re-solved at tol/100."""
    a, b = spectral_radius(g1, tol), spectral_radius(g2, tol)
    verdict = compare(a, b)
    if verdict == "indeterminate":
        a, b = spectral_radius(g1, tol / 100), spectral_radius(g2, tol / 100)
        verdict = compare(a, b)
    return verdict, a, b


def rayleigh(g: Graph, y) -> float:
    """2 * sum over edges of y_u y_v; a lower bound on lambda for unit y >= 0."""
    y = np.asarray(y, dtype=float)
    return 2.0 * math.fsum(y[u] * y[v] for u, v in g.edges())


# -- complete multipartite closed form --------------------------------------

def _bisect(f, lo, hi, tol, max_iter=400):
    """Root of an increasing function with f(lo) <= 0 <= f(hi)."""
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def multipartite_lambda(sizes: Sequence[int], tol: float = 0.0) -> float:
    """Spectral radius of K(n_1,...,n_r): the root of sum n_k/(lam+n_k) = 1.

    With the default ``tol=0`` bisection runs until the bracket cannot shrink.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2:
        raise InvalidArgument("need at least two parts")
    if any(s <= 0 for s in sizes):
        raise InvalidArgument("part sizes must be positive")
    n = sum(sizes)

    def f(lam):
        return 1.0 - math.fsum(s / (lam + s) for s in sizes)

    # lambda lies between the minimum degree and n
    return _bisect(f, float(n - max(sizes)), float(n), tol)


# -- walks --------------------------------------------------------------------

def walk_count(h: Graph, length: int) -> int:
    """Number of walks visiting ``length`` vertices (entry sum of A^(length-1))."""
    if length < 1:
        raise InvalidArgument("walk length must be >= 1")
    if length > MAX_WALK_LENGTH:
        raise WalkOverflowError(f"walk length capped at {MAX_WALK_LENGTH}, got {length}")
    v = [1] * h.n
    for _ in range(length - 1):
        v = [sum(v[u] for u in iter_bits(row)) for row in h.adj]
    return sum(v)


def walk_series(h: Graph, x: float, eps: float = 1e-12, max_terms: int = 100_000) -> tuple[float, float]:
    """Truncated sum over l >= 1 of w_{l+1}(h) / x^(l+1), and its tail bound.

    The tail after term L is at most term_L * D/(x - D) with D the maximum
    degree, since w_{l+2} <= D * w_{l+1}.
    """
    if h.m == 0:
        return 0.0, 0.0
    delta = h.max_degree()
    if not x > max(delta, 1):
        raise DivergenceRisk(f"walk series needs x > max(maxdeg, 1) = {max(delta, 1)}, got {x}")
    nbrs = [list(iter_bits(row)) for row in h.adj]
    u = [1.0] * h.n
    terms = []
    tail = math.inf
    for _ in range(max_terms):
        u = [sum(u[j] for j in nb) / x for nb in nbrs]   # A^l 1 / x^l
        t = math.fsum(u) / x
        terms.append(t)
        tail = t * delta / (x - delta)
        if tail <= eps:
            break
    else:
        raise NumericError("walk series did not reach the requested tail bound",
                           {"x": x, "maxdeg": delta, "tail": tail})
    return math.fsum(terms), tail


@dataclass(frozen=True)
class EmbeddedSpec:
    """Part sizes plus one (possibly empty) graph embedded in each part."""
    sizes: tuple[int, ...]
    embedded: tuple[Graph | None, ...]

    def __post_init__(self):
        if len(self.sizes) != len(self.embedded):
            raise InvalidArgument("one embedded graph (or None) per part")
        for s, h in zip(self.sizes, self.embedded):
            if s <= 0:
                raise InvalidArgument("part sizes must be positive")
            if h is not None and h.strip_isolated().n > s:
                raise InvalidArgument(f"embedded graph does not fit in part of size {s}")

    @classmethod
    def of(cls, sizes, embedded=None) -> "EmbeddedSpec":
        sizes = tuple(int(s) for s in sizes)
        if embedded is None:
            embedded = [None] * len(sizes)
        return cls(sizes, tuple(None if h is None else h.strip_isolated() for h in embedded))

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def r(self) -> int:
        return len(self.sizes)

    @property
    def q(self) -> int:
        return sum(h.m for h in self.embedded if h is not None)

    def realize(self) -> PartitionedGraph:
        """The graph itself; parts are reordered by descending size."""
        order = sorted(range(self.r), key=lambda i: -self.sizes[i])
        return embed([self.sizes[i] for i in order], [self.embedded[i] for i in order])

    def move_vertex(self, i: int, j: int) -> "EmbeddedSpec":
        """Move one vertex outside V(H_i) from part i to part j."""
        sizes = list(self.sizes)
        hi = self.embedded[i]
        if sizes[i] - 1 < (0 if hi is None else hi.n) or sizes[i] <= 1:
            raise InvalidArgument(f"part {i} has no free vertex to move")
        sizes[i] -= 1
        sizes[j] += 1
        return EmbeddedSpec(tuple(sizes), self.embedded)


def zhang_lambda(spec: EmbeddedSpec, tol: float = 1e-12) -> float:
    """Largest root of sum_i 1/(1 + n_i/x + S_i(x)) = r - 1.

    S_i is the walk series of the graph embedded in part i.  The root is
    bracketed on [floor((r-1)n/r) - 1, n]; when the root lies below that
    (very unbalanced parts) or that end does not clear the largest embedded
    degree, the bracket drops to lambda of the bare multipartite graph,
    which never exceeds lambda of the realization.
    """
    r, n = spec.r, spec.n
    if r < 2:
        raise InvalidArgument("need at least two parts")
    hs = [h for h in spec.embedded if h is not None and h.m]
    dmax = max((h.max_degree() for h in hs), default=0)
    eps = tol / (10 * r * n)

    def g(x):
        total = []
        for s, h in zip(spec.sizes, spec.embedded):
            series = walk_series(h, x, eps)[0] if (h is not None and h.m) else 0.0
            total.append(1.0 / (1.0 + s / x + series))
        return math.fsum(total) - (r - 1)

    lo = float((r - 1) * n // r - 1)
    hi = float(n)
    if lo <= max(dmax, 1) or g(lo) > 0:
        lo2 = multipartite_lambda(spec.sizes) * (1 - 1e-12)
        if lo2 <= max(dmax, 1):
            raise UnsupportedRegime(f"root below max embedded degree {dmax}")
        if g(lo2) > 0:
            raise NumericError("no sign change on the bracket",
                               {"lo": lo2, "g(lo)": g(lo2), "hi": hi})
        lo = lo2
    if g(hi) < 0:
        raise NumericError("no sign change on the bracket", {"lo": lo, "hi": hi, "g(hi)": g(hi)})
    return _bisect(g, lo, hi, tol)


def embedded_spec_of(pg: PartitionedGraph) -> EmbeddedSpec:
    """EmbeddedSpec of a graph with class-edges only (no deleted cross-edges)."""
    if pg.alpha2:
        raise InvalidArgument("walk-series form needs a complete multipartite base")
    return EmbeddedSpec.of(pg.base_sizes, [pg.graph.induced(list(p)) for p in pg.parts])


def multipartite_warm_start(pg: PartitionedGraph) -> np.ndarray:
    """Perron vector of the base K(n_1..n_r): x_v proportional to 1/(lam + n_k)."""
    lam = multipartite_lambda(pg.base_sizes) if pg.r >= 2 else 1.0
    x = np.empty(pg.n)
    for part, s in zip(pg.parts, pg.base_sizes):
        x[list(part)] = 1.0 / (lam + s)
    return x


# -- rewiring -----------------------------------------------------------------

def kelmans_rewire(g: Graph, u: int, v: int) -> Graph:
    """Move every edge vw with w outside N(u) + {u} to uw."""
    if u == v:
        raise InvalidArgument("u and v must differ")
    if not g.is_connected():
        raise InvalidArgument("graph must be connected")
    moved = g.adj[v] & ~g.adj[u] & ~(1 << u)
    ws = list(iter_bits(moved))
    return g.remove_edges([norm_edge(v, w) for w in ws]).add_edges([norm_edge(u, w) for w in ws])
