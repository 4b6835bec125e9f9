"""Certified evaluation of the quantitative spectral and counting bounds.

Every check compares two closed intervals.  Spectral radii enter as
Collatz-Wielandt enclosures; closed-form terms are evaluated exactly with
``Fraction`` and rounded outward once, so a verdict never rests on a bare
float comparison.

Hypotheses split in two kinds.  Regime hypotheses (how unbalanced the
parts may be, which part pairs a move may use) decide whether a formula
is meaningful and always gate the check.  Scale hypotheses of the form
"parameter <= n / huge constant" stand in for "n sufficiently large"; by
default they are recorded in ``notes`` and the inequality is evaluated
anyway, or they gate the check when ``enforce_scale=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .counting import Pattern, c_n_F, count_copies
from .errors import InvalidArgument, UnsupportedSize
from .families import PartitionedGraph, descriptor, l_graph, t_star_graph, turan
from .graph import Graph, complete_multipartite, popcount
from .spectral import DEFAULT_TOL, EmbeddedSpec, spectral_radius

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"
UNMET = "hypothesis-not-met"

LEM25_DEFAULT_CONSTANT = 10.0
MAX_CUT_BUDGET = 2_000_000


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _sum_bounds(a: float, b: float) -> tuple[float, float]:
    """Floats bracketing a + b, equal when the sum is exact (TwoSum)."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    if err > 0:
        return s, _up(s)
    if err < 0:
        return _down(s), s
    return s, s


def _prod_bounds(a: float, b: float) -> tuple[float, float]:
    p = a * b
    exact = Fraction(a) * Fraction(b)
    fp = Fraction(p)
    if fp == exact:
        return p, p
    return (p, _up(p)) if fp < exact else (_down(p), p)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidArgument(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value) -> "Interval":
        """Tightest float interval around an int or Fraction."""
        v = Fraction(value)
        f = float(v)
        lo = f if Fraction(f) <= v else _down(f)
        hi = f if Fraction(f) >= v else _up(f)
        return cls(lo, hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(_sum_bounds(self.lo, other.lo)[0], _sum_bounds(self.hi, other.hi)[1])

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-_as_interval(other))

    def __rsub__(self, other) -> "Interval":
        return _as_interval(other) - self

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        ps = [_prod_bounds(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(p[0] for p in ps), max(p[1] for p in ps))

    __rmul__ = __mul__

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def to_json(self) -> list[float]:
        return [self.lo, self.hi]


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, Fraction)):
        return Interval.exact(x)
    return Interval.point(float(x))


@dataclass
class BoundCheck:
    name: str
    lhs: Interval | None
    rhs: Interval | None
    verdict: str
    margin: float | None
    strict: bool = False
    params: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    probe: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": None if self.lhs is None else self.lhs.to_json(),
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "verdict": self.verdict,
            "margin": self.margin,
            "relation": "<" if self.strict else "<=",
            "probe": self.probe,
            "params": self.params,
            "notes": self.notes,
        }


def check_le(name: str, lhs, rhs, strict: bool = False, **kw) -> BoundCheck:
    """Certified lhs <= rhs (or < when ``strict``)."""
    lhs, rhs = _as_interval(lhs), _as_interval(rhs)
    if (lhs.hi < rhs.lo) if strict else (lhs.hi <= rhs.lo):
        verdict = PASS
    elif (lhs.lo >= rhs.hi) if strict else (lhs.lo > rhs.hi):
        verdict = FAIL
    else:
        verdict = INDETERMINATE
    return BoundCheck(name, lhs, rhs, verdict, rhs.lo - lhs.hi, strict, **kw)


def unmet(name: str, reason: str, params=None) -> BoundCheck:
    return BoundCheck(name, None, None, UNMET, None, params=dict(params or {}), notes=[reason])


@lru_cache(maxsize=256)
def lam_interval(g: Graph, tol: float = DEFAULT_TOL) -> Interval:
    res = spectral_radius(g, tol)
    return Interval(res.lo, res.hi)


def _scale_gate(ok: bool, text: str, enforce: bool, notes: list[str]) -> bool:
    """True when the check should be skipped."""
    if ok:
        return False
    if enforce:
        return True
    notes.append(f"scale hypothesis not met at this n: {text}")
    return False


# -- perturbations of a complete multipartite graph ---------------------------

def first_key_residual_i(pg: PartitionedGraph, tol: float = DEFAULT_TOL,
                         enforce_scale: bool = False) -> BoundCheck:
    """|lam(G) - lam(K) - 2(a1 - a2)/n| <= 56 (a1 + a2) phi / n^2."""
    name = "first-key-i"
    sizes = pg.base_sizes
    n, r, a1, a2 = pg.n, pg.r, pg.alpha1, pg.alpha2
    spread = sizes[0] - sizes[-1]
    params = {"label": pg.label, "n": n, "r": r, "sizes": list(sizes), "alpha1": a1, "alpha2": a2}
    if 100 * spread > n:
        return unmet(name, f"n1 - nr = {spread} exceeds n/100", params)
    notes: list[str] = []
    if _scale_gate(max(a1, a2) * (10 * r) ** 3 <= n, "max(alpha1, alpha2) <= n/(10r)^3",
                   enforce_scale, notes):
        return unmet(name, "max(alpha1, alpha2) exceeds n/(10r)^3", params)
    phi = max(spread, 2 * (a1 + a2))
    params["phi"] = phi
    if a1 == 0 and a2 == 0:
        diff = Interval(0.0, 0.0)   # G is K itself
    else:
        diff = lam_interval(pg.graph, tol) - lam_interval(pg.base(), tol)
    lhs = abs(diff - Fraction(2 * (a1 - a2), n))
    rhs = Fraction(56 * (a1 + a2) * phi, n * n)
    return check_le(name, lhs, rhs, params=params, notes=notes)


def first_key_bound_ii(pg: PartitionedGraph, k: int, tol: float = DEFAULT_TOL,
                       enforce_scale: bool = False) -> BoundCheck:
    """lam(G) - lam(T_{n,r}) <= 2(a1-a2)/n - 2(r-1)k^2/(rn) (1-28 r psi/n)^4
    + 56 (a1+a2) 7 r psi / n^2.

    Also gated on 28 r psi < n: outside it the fourth power no longer
    shrinks the k^2 term and the formula says nothing useful.
    """
    name = "first-key-ii"
    sizes = pg.base_sizes
    n, r, a1, a2 = pg.n, pg.r, pg.alpha1, pg.alpha2
    params = {"label": pg.label, "n": n, "r": r, "sizes": list(sizes), "alpha1": a1,
              "alpha2": a2, "k": k}
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    if sizes[0] - sizes[-1] < 2 * k:
        return unmet(name, f"n1 - nr = {sizes[0] - sizes[-1]} is below 2k = {2 * k}", params)
    psi = max(3 * k, 2 * (a1 + a2))
    params["psi"] = psi
    if 28 * r * psi >= n:
        return unmet(name, f"28 r psi = {28 * r * psi} is not below n = {n}", params)
    notes: list[str] = []
    scale_ok = max(k, a1, a2) * (10 * r) ** 3 <= n
    if _scale_gate(scale_ok, "k, alpha1, alpha2 <= n/(10r)^3", enforce_scale, notes):
        return unmet(name, "k or alpha exceeds n/(10r)^3", params)
    t = turan(n, r)
    if pg.graph == t.graph:
        diff = Interval(0.0, 0.0)
    else:
        diff = lam_interval(pg.graph, tol) - lam_interval(t.graph, tol)
    shrink = (1 - Fraction(28 * r * psi, n)) ** 4
    rhs = (Fraction(2 * (a1 - a2), n) - Fraction(2 * (r - 1) * k * k, r * n) * shrink
           + Fraction(56 * (a1 + a2) * 7 * r * psi, n * n))
    return check_le(name, diff, rhs, params=params, notes=notes)


def move_one_check(sizes: Sequence[int], i: int, j: int, tol: float = DEFAULT_TOL,
                   phi: int | None = None) -> tuple[BoundCheck, BoundCheck]:
    """Lower and upper bounds on lam(K') - lam(K) when one vertex moves from
    part i to part j (i < j, sizes descending)."""
    sizes = [int(s) for s in sizes]
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InvalidArgument(f"sizes must be descending, got {sizes}")
    r, n = len(sizes), sum(sizes)
    if not 0 <= i < j < r:
        raise InvalidArgument(f"need 0 <= i < j < r, got i={i}, j={j}")
    d = sizes[i] - sizes[j]
    phi = sizes[0] - sizes[-1] if phi is None else int(phi)
    params = {"sizes": sizes, "i": i, "j": j, "n": n, "r": r, "phi": phi}
    if d < 2:
        reason = f"n_i - n_j = {d} is below 2"
        return unmet("move-one-lower", reason, params), unmet("move-one-upper", reason, params)
    if phi < d:
        raise InvalidArgument(f"phi = {phi} must be at least n_i - n_j = {d}")
    moved = list(sizes)
    moved[i] -= 1
    moved[j] += 1
    delta = (lam_interval(complete_multipartite(sorted(moved, reverse=True)), tol)
             - lam_interval(complete_multipartite(sizes), tol))
    main = Fraction(2 * (r - 1) * (d - 1), r * n)
    lower = check_le("move-one-lower", main * (1 - Fraction(4 * phi, n)) ** 4, delta,
                     params=params)
    if 20 * phi > n:
        upper = unmet("move-one-upper", f"phi = {phi} exceeds n/20", params)
    else:
        bound = main * (1 + Fraction(8 * phi, n)) ** 4 + Fraction(5 * phi, n * n)
        upper = check_le("move-one-upper", delta, bound, params=params)
    return lower, upper


def shift_residual_check(spec: EmbeddedSpec, i: int, j: int, eps: float,
                         tol: float = DEFAULT_TOL, enforce_scale: bool = False) -> BoundCheck:
    """|lam(G') - lam(G) - 2(r-1)(n_i-n_j-1)/(rn)| <= (n_i-n_j+1) eps / (10 r n).

    G' moves one vertex outside the embedded graph from part i to part j;
    embedded graphs stay where they are.
    """
    name = "shift-residual"
    n, r, q = spec.n, spec.r, spec.q
    if not 0 < eps < 1:
        raise InvalidArgument("eps must lie in (0, 1)")
    if i == j or not (0 <= i < r and 0 <= j < r):
        raise InvalidArgument(f"need distinct part indices below r={r}")
    srt = sorted(spec.sizes, reverse=True)
    phi = max(srt[0] - srt[-1], q)
    d = spec.sizes[i] - spec.sizes[j]
    params = {"sizes": list(spec.sizes), "i": i, "j": j, "eps": eps, "n": n, "r": r,
              "q": q, "phi": phi,
              "embedded_edges": [list(h.edges()) if h is not None else [] for h in spec.embedded]}
    if d < 0:
        return unmet(name, f"n_i - n_j = {d} is negative", params)
    e = Fraction(eps)
    notes: list[str] = []
    if _scale_gate(phi <= e * n / (600 * r), "max(n1 - nr, q) <= eps n/(600 r)",
                   enforce_scale, notes):
        return unmet(name, "max(n1 - nr, q) exceeds eps n/(600 r)", params)
    moved = spec.move_vertex(i, j)
    delta = lam_interval(moved.realize().graph, tol) - lam_interval(spec.realize().graph, tol)
    lhs = abs(delta - Fraction(2 * (r - 1) * (d - 1), r * n))
    rhs = (d + 1) * e / (10 * r * n)
    return check_le(name, lhs, rhs, params=params, notes=notes)


def l_vs_t_checks(n: int, r: int, q: int, tol: float = DEFAULT_TOL,
                  delta: float | None = None) -> tuple[BoundCheck, BoundCheck]:
    """lam(L_{n,r,q-1}) < lam(T_{n,r,q}) and lam(L_{n,r,q}) < lam(T_{n,r,q}) + 0.9/n.

    ``delta`` caps q <= delta n for the second check (default 1/(100 r)).
    """
    params = {"n": n, "r": r, "q": q}
    if q < 1:
        raise InvalidArgument("q must be positive")
    t = t_star_graph(n, r, q)
    lam_t = lam_interval(t.graph, tol)
    if 100 * r * q > n:
        first = unmet("l-prev-below-t", f"q = {q} exceeds n/(100r)", params)
    else:
        prev = l_graph(n, r, q - 1)
        first = check_le("l-prev-below-t", lam_interval(prev.graph, tol), lam_t, strict=True,
                         params=params)
    cap = Fraction(1, 100 * r) if delta is None else Fraction(delta)
    if q > cap * n:
        second = unmet("l-below-t-plus", f"q = {q} exceeds delta n with delta = {float(cap)}",
                       dict(params, delta=float(cap)))
    else:
        lg = l_graph(n, r, q)
        notes = []
        if descriptor(lg) == descriptor(t):
            lam_l = lam_t   # isomorphic, same spectral radius
            notes.append("L and T are isomorphic here")
        else:
            lam_l = lam_interval(lg.graph, tol)
        second = check_le("l-below-t-plus", lam_l, lam_t + Fraction(9, 10 * n), strict=True,
                          params=dict(params, delta=float(cap)), notes=notes)
    return first, second


# -- counting probes -------------------------------------------------------------

def lem25_sandwich_check(pg: PartitionedGraph, F: Pattern,
                         constant: float = LEM25_DEFAULT_CONSTANT,
                         c: int | None = None) -> BoundCheck:
    """Empirical probe: |N_F(G) - a1 c(n,F)| / (a1 phi n^(f-3)) <= constant.

    The true constant is an unspecified existence constant, so this is a
    probe and never a theorem test.
    """
    name = "copies-sandwich-probe"
    n, a1, a2 = pg.n, pg.alpha1, pg.alpha2
    sizes = pg.base_sizes
    phi = max(sizes[0] - sizes[-1], 2 * (a1 + a2))
    params = {"label": pg.label, "n": n, "r": pg.r, "alpha1": a1, "alpha2": a2, "phi": phi,
              "pattern": F.name}
    if F.chi != pg.r + 1:
        return unmet(name, f"chi(F) = {F.chi} differs from r + 1 = {pg.r + 1}", params)
    if a1 == 0:
        return unmet(name, "no added class-edges", params)
    if c is None:
        c = c_n_F(n, F)
    count = count_copies(F, pg)
    ratio = Fraction(abs(count - a1 * c)) / (a1 * phi * Fraction(n) ** (F.f - 3))
    params.update(copies=count, c=c, ratio=float(ratio))
    chk = check_le(name, ratio, Fraction(constant), params=params)
    chk.probe = True
    return chk


def part_size_bound(e_g, s, t, n: int, r: int) -> tuple[float, float]:
    """Window n/r -/+ sqrt(2(s + t)) for part sizes of a near-extremal
    partition (s class-edges, e(G) >= (1 - 1/r) n^2/2 - t)."""
    rad = math.sqrt(2 * float(Fraction(s) + Fraction(t)))
    c = n / r
    return _down(c - rad), _up(c + rad)


def max_cut_partition(g: Graph, r: int) -> list[list[int]]:
    """Partition into r parts with the fewest class-edges, by exhaustive
    search (vertex 0 pinned to part 0)."""
    n = g.n
    if r < 1:
        raise InvalidArgument("r must be positive")
    if r ** max(n - 1, 0) > MAX_CUT_BUDGET:
        raise UnsupportedSize(f"exhaustive {r}-partition search too large for n={n}")
    best, best_parts = None, None
    for rest in product(range(r), repeat=n - 1):
        label = (0,) + rest
        masks = [0] * r
        for v, p in enumerate(label):
            masks[p] |= 1 << v
        inside = sum(popcount(g.adj[v] & masks[p]) for v, p in enumerate(label)) // 2
        if best is None or inside < best:
            best = inside
            best_parts = [[v for v in range(n) if label[v] == p] for p in range(r)]
    return best_parts


def part_size_check(g: Graph, parts: Sequence[Sequence[int]]) -> BoundCheck:
    """All part sizes inside the window, using the smallest admissible t.

    lhs is [min size, max size], rhs the window; pass means containment.
    """
    n, r, e = g.n, len(parts), g.m
    owner = {v: i for i, p in enumerate(parts) for v in p}
    s = sum(1 for u, v in g.edges() if owner[u] == owner[v])
    t = max(Fraction(0), Fraction((r - 1) * n * n, 2 * r) - e)
    lo, hi = part_size_bound(e, s, t, n, r)
    sizes = sorted(len(p) for p in parts)
    params = {"n": n, "r": r, "edges": e, "s": s, "t": float(t), "sizes": sizes}
    margin = min(sizes[0] - lo, hi - sizes[-1])
    return BoundCheck("part-size-window", Interval(float(sizes[0]), float(sizes[-1])),
                      Interval(lo, hi), PASS if margin >= 0 else FAIL, margin, params=params)
