"""Exact hyperbolicity and the metric diagnostics around it.

Everything here is integer arithmetic; hyperbolicity values are ``HalfInt``.
The O(n^3)/O(n^4) enumerations are vectorised with numpy but remain desk-scale
tools (a few hundred vertices at most).
"""

from __future__ import annotations

import functools
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .core import Graph, interval_mask, interval_masks


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Exact nonnegative multiple of 1/2, stored doubled."""

    twice: int

    def __post_init__(self):
        if self.twice < 0:
            raise ValueError("HalfInt must be nonnegative")

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        frac = Fraction(value) * 2
        if frac.denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/2")
        return cls(int(frac))

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __mul__(self, k: int) -> "HalfInt":
        return HalfInt(self.twice * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.twice < other.twice
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __float__(self):
        return self.twice / 2

    def ceil(self) -> int:
        return -(-self.twice // 2)

    def __str__(self):
        q, r = divmod(self.twice, 2)
        return f"{q}.5" if r else str(q)

    def __repr__(self):
        return f"HalfInt({self})"


ZERO = HalfInt(0)


@dataclass(frozen=True)
class QuasiMedian:
    v1: int
    v2: int
    v3: int
    sizes: tuple[int, int, int]


@dataclass(frozen=True)
class NonHypWitness:
    """Certificate that the graph is not delta-hyperbolic for small delta.

    ``c`` sits on a geodesic from ``x`` to the base point ``z`` at distance
    ``min(r, d(x, z))`` from ``x``; ``y`` is no farther from ``z`` than ``x`` and
    within ``2r`` of ``x``. Any delta-hyperbolic graph has ``d(c, y) <= r + 2 delta``.
    """

    z: int
    x: int
    y: int
    c: int
    r: int


class WitnessError(ValueError):
    pass


def _spread(a, b, c):
    """Largest minus second largest, elementwise."""
    hi = np.maximum(a, np.maximum(b, c))
    lo = np.minimum(a, np.minimum(b, c))
    return hi - (a + b + c - hi - lo)


def four_point_delta(dm: np.ndarray, u: int, v: int, x: int, y: int) -> HalfInt:
    s = sorted((dm[u, v] + dm[x, y], dm[u, x] + dm[v, y], dm[u, y] + dm[v, x]))
    return HalfInt(int(s[2] - s[1]))


def _pair_max(dm: np.ndarray, u: int) -> int:
    best = 0
    du = dm[u]
    for v in range(u + 1, dm.shape[0]):
        dv = dm[v]
        s1 = dm[u, v] + dm
        s2 = du[:, None] + dv[None, :]
        s3 = dv[:, None] + du[None, :]
        best = max(best, int(_spread(s1, s2, s3).max()))
    return best


def exact_hyperbolicity(g: Graph, dm: np.ndarray | None = None, workers: int = 1) -> HalfInt:
    """delta* by enumerating all quadruples, O(n^4)."""
    dm = g.distances() if dm is None else dm
    n = dm.shape[0]
    if n < 4:
        return ZERO
    work = functools.partial(_pair_max, dm)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            twice = max(pool.map(work, range(n)))
    else:
        twice = max(map(work, range(n)))
    return HalfInt(twice)


def base_point_delta(g: Graph, dm: np.ndarray | None, u: int) -> HalfInt:
    """Four-point value with one point pinned at ``u``; delta_u <= delta* <= 2 delta_u."""
    dm = g.distances() if dm is None else dm
    du = dm[u]
    best = 0
    for x in range(dm.shape[0]):
        # pairs (v, y): d(u,x)+d(v,y), d(u,v)+d(x,y), d(u,y)+d(x,v)
        s1 = du[x] + dm
        s2 = du[:, None] + dm[x][None, :]
        s3 = dm[x][:, None] + du[None, :]
        best = max(best, int(_spread(s1, s2, s3).max()))
    return HalfInt(best)


def interval_thinness(g: Graph, dm: np.ndarray | None = None) -> int:
    """Least nu such that every interval is nu-thin."""
    dm = g.distances() if dm is None else dm
    n = dm.shape[0]
    best = 0
    for u in range(n):
        for v in range(u + 1, n):
            members = np.flatnonzero(interval_mask(dm, u, v))
            level = dm[u, members]
            same = level[:, None] == level[None, :]
            sub = dm[np.ix_(members, members)]
            best = max(best, int(sub[same].max()))
    return best


def slimness_lower_bound(g: Graph, dm: np.ndarray | None = None) -> int:
    """Max over x, y, z and u in I(x, y) of the distance from u to I(x, z) | I(y, z).

    One-sided: every geodesic triangle slimness constant is at least this value.
    Costs O(n^5) in the worst case.
    """
    dm = g.distances() if dm is None else dm
    n = dm.shape[0]
    big = np.iinfo(np.int32).max
    best = 0
    for x in range(n):
        # U[z, w]: w in I(x, z)
        in_xz = dm[x][None, :] + dm == dm[x][:, None]
        for y in range(x + 1, n):
            members = np.flatnonzero(interval_mask(dm, x, y))
            in_yz = dm[y][None, :] + dm == dm[y][:, None]
            union = in_xz | in_yz
            near = np.where(union[None, :, :], dm[members][:, None, :], big).min(axis=2)
            best = max(best, int(near.max()))
    return best


def _is_metric_triangle(masks: np.ndarray, a: int, b: int, c: int) -> bool:
    return (
        np.count_nonzero(masks[a, b] & masks[a, c]) == 1
        and np.count_nonzero(masks[b, a] & masks[b, c]) == 1
        and np.count_nonzero(masks[c, a] & masks[c, b]) == 1
    )


def quasi_median(g: Graph, dm: np.ndarray | None, x: int, y: int, z: int) -> QuasiMedian:
    dm = g.distances() if dm is None else dm

    def farthest(mask, origin):
        cand = np.flatnonzero(mask)
        dist = dm[origin, cand]
        return int(cand[np.flatnonzero(dist == dist.max())[0]])

    v1 = farthest(interval_mask(dm, x, y) & interval_mask(dm, x, z), x)
    v2 = farthest(interval_mask(dm, y, v1) & interval_mask(dm, y, z), y)
    v3 = farthest(interval_mask(dm, z, v1) & interval_mask(dm, z, v2), z)
    d = dm
    ok = (
        d[x, y] == d[x, v1] + d[v1, v2] + d[v2, y]
        and d[y, z] == d[y, v2] + d[v2, v3] + d[v3, z]
        and d[z, x] == d[z, v3] + d[v3, v1] + d[v1, x]
    )
    masks = np.stack(
        [interval_mask(dm, a, b) for a in (v1, v2, v3) for b in (v1, v2, v3)]
    ).reshape(3, 3, -1)
    if not ok or not _is_metric_triangle(masks, 0, 1, 2):
        raise AssertionError(f"quasi-median construction failed for ({x}, {y}, {z})")
    return QuasiMedian(v1, v2, v3, (int(d[v1, v2]), int(d[v2, v3]), int(d[v3, v1])))


def metric_triangles(g: Graph, dm: np.ndarray | None = None, masks: np.ndarray | None = None):
    """Yield every triple u < v < w forming a metric triangle."""
    dm = g.distances() if dm is None else dm
    masks = interval_masks(dm) if masks is None else masks
    n = dm.shape[0]
    for u in range(n):
        for v in range(u + 1, n):
            ws = np.arange(v + 1, n)
            if ws.size == 0:
                continue
            at_u = (masks[u, v][None, :] & masks[u, ws]).sum(axis=1) == 1
            at_v = (masks[v, u][None, :] & masks[v, ws]).sum(axis=1) == 1
            at_w = (masks[ws, u] & masks[ws, v]).sum(axis=1) == 1
            for w in ws[at_u & at_v & at_w]:
                yield (u, v, int(w))


def metric_triangle_census(g: Graph, dm: np.ndarray | None = None):
    """Returns ``(mu_max, triangles)`` over all nondegenerate metric triangles."""
    dm = g.distances() if dm is None else dm
    tris = list(metric_triangles(g, dm))
    mu = max((int(max(dm[a, b], dm[b, c], dm[a, c])) for a, b, c in tris), default=0)
    return mu, tris


def weak_modularity_violation(g: Graph, dm: np.ndarray | None = None):
    """First violated triangle/quadrangle condition, or None if weakly modular.

    Triangle violations are ``("triangle", u, v, w)``; quadrangle ones are
    ``("quadrangle", u, v, w, z)``.
    """
    dm = g.distances() if dm is None else dm
    n = dm.shape[0]
    adj = dm == 1
    adj_i = adj.astype(np.int32)
    for u in range(n):
        du = dm[u]
        for k in range(1, int(du.max()) + 1):
            below = adj_i[:, du == k - 1]
            # common neighbours of (v, w) at distance k-1 from u
            down = below @ below.T
            level = np.flatnonzero(du == k)
            if level.size < 2:
                continue
            sub_d = dm[np.ix_(level, level)]
            sub_down = down[np.ix_(level, level)]
            for i, j in zip(*np.nonzero((sub_d == 1) & (sub_down == 0))):
                if i < j:
                    return ("triangle", u, int(level[i]), int(level[j]))
            if k < 2:
                continue
            above = adj_i[:, du == k + 1]
            up = above @ above.T
            sub_up = up[np.ix_(level, level)]
            for i, j in zip(*np.nonzero((sub_d == 2) & (sub_up > 0) & (sub_down == 0))):
                if i < j:
                    v, w = int(level[i]), int(level[j])
                    z = int(np.flatnonzero(adj[v] & adj[w] & (du == k + 1))[0])
                    return ("quadrangle", u, v, w, z)
    return None


def is_weakly_modular(g: Graph, dm: np.ndarray | None = None) -> bool:
    return weak_modularity_violation(g, dm) is None


def is_median_graph(g: Graph, dm: np.ndarray | None = None) -> bool:
    dm = g.distances() if dm is None else dm
    masks = interval_masks(dm)
    n = dm.shape[0]
    for u in range(n):
        mu = masks[u]
        # medians[v, w] = |I(u,v) & I(u,w) & I(v,w)|
        medians = (mu[:, None, :] & mu[None, :, :] & masks).sum(axis=2)
        if (medians != 1).any():
            return False
    return True


def is_block_graph(g: Graph) -> bool:
    """Every biconnected component induces a clique."""
    if g.n == 1:
        return True
    nxg = nx.Graph(g.edges())
    for comp in nx.biconnected_components(nxg):
        k = len(comp)
        if nxg.subgraph(comp).number_of_edges() != k * (k - 1) // 2:
            return False
    return True


def f_balanced_violations(g: Graph, dm: np.ndarray | None, C) -> list[tuple[int, int, int]]:
    """Metric triangles with some side longer than C times the shorter of the other two."""
    C = Fraction(C)
    if C <= 0:
        raise ValueError("balance constant must be positive")
    dm = g.distances() if dm is None else dm
    bad = []
    for tri in metric_triangles(g, dm):
        for a, b, c in itertools.permutations(tri):
            if dm[a, b] > C * min(dm[a, c], dm[b, c]):
                bad.append(tri)
                break
    return bad


def local_hyperbolicity_scan(g: Graph, dm: np.ndarray | None, R: int) -> HalfInt:
    """Max over v of delta* of the subgraph induced by the R-ball around v."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    dm = g.distances() if dm is None else dm
    best = ZERO
    seen: set[tuple[int, ...]] = set()
    for v in range(g.n):
        members = tuple(np.flatnonzero(dm[v] <= R).tolist())
        if members in seen:
            continue
        seen.add(members)
        sub, _ = g.induced(members)  # connected: every vertex reaches v along a geodesic
        best = max(best, exact_hyperbolicity(sub))
    return best


def witness_lower_bound(dm: np.ndarray, w: NonHypWitness) -> HalfInt:
    """Certified lower bound L on delta*: the graph is not delta-hyperbolic for delta < L."""
    d = dm
    checks = [
        (w.r >= 0, "r must be nonnegative"),
        (d[w.x, w.c] + d[w.c, w.z] == d[w.x, w.z], "c not in I(x, z)"),
        (d[w.x, w.c] == min(w.r, d[w.x, w.z]), "d(x, c) != min(r, d(x, z))"),
        (d[w.z, w.y] <= d[w.z, w.x], "d(z, y) > d(z, x)"),
        (d[w.x, w.y] <= 2 * w.r, "d(x, y) > 2r"),
    ]
    for ok, why in checks:
        if not ok:
            raise WitnessError(f"not a valid non-hyperbolicity witness: {why}")
    excess = int(d[w.c, w.y]) - w.r
    return HalfInt(max(excess, 0))


def constant_bounds(kind: str, **inputs) -> HalfInt:
    """Closed-form hyperbolicity constants.

    kinds: ``slim_to_hyp`` (delta), ``hyp_to_slim`` (delta), ``thin_to_hyp`` (nu, mu),
    ``dismantle_to_hyp`` (s, s_prime).
    """
    if kind == "slim_to_hyp":
        return 2 * HalfInt.of(inputs["delta"]) + HalfInt(1)
    if kind == "hyp_to_slim":
        return 3 * HalfInt.of(inputs["delta"])
    if kind == "thin_to_hyp":
        return HalfInt.of(16 * inputs["nu"] + 4 * inputs["mu"])
    if kind == "dismantle_to_hyp":
        s, sp = inputs["s"], inputs["s_prime"]
        if not 0 < sp < s:
            raise ValueError("dismantling bound needs 0 < s' < s")
        return HalfInt(2 * 16 * (s + sp) * math.ceil(Fraction(s + sp, s - sp)) + 1)
    raise ValueError(f"unknown bound kind {kind!r}")
