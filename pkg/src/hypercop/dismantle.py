"""(s, s')-dismantling orders and the stack-sieve hyperbolicity approximation.

A vertex ``v`` is eliminated by ``u`` inside the live set ``X`` when every
vertex of ``X`` within ``s`` of ``v`` (avoiding ``u`` unless the order is
starred) lies within ``s'`` of ``u``. The sieves search for the least scale at
which a BFS order with tree-ancestor eliminators is such an order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import BfsOrder, Graph, bfs_distances, bfs_order
from .metric import HalfInt, NonHypWitness, ZERO, constant_bounds, is_weakly_modular


class DismantleError(ValueError):
    pass


@dataclass(frozen=True)
class EliminationOrder:
    """Vertex order (minimum first) with an eliminator for every non-minimum vertex."""

    order: tuple[int, ...]
    eliminator: dict[int, int]
    s: int
    s_prime: int
    star: bool

    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


@dataclass(frozen=True)
class Violation:
    vertex: int
    escaping: frozenset[int]
    reason: str = "ball not covered by eliminator"


@dataclass
class SieveResult:
    alpha: int
    lower: HalfInt
    upper: HalfInt
    witness_trace: list[NonHypWitness] = field(default_factory=list)
    pops: int = 0
    stats: dict[str, int] = field(default_factory=dict)


def _as_mask(n: int, X) -> np.ndarray:
    if isinstance(X, np.ndarray) and X.dtype == bool:
        return X
    mask = np.zeros(n, dtype=bool)
    mask[list(X)] = True
    return mask


def _near_mask(g: Graph, dm: np.ndarray, v: int, u: int, s: int, star: bool) -> np.ndarray:
    if star:
        return dm[v] <= s
    return bfs_distances(g, v, excluded=u, limit=s) >= 0


def eliminates(g: Graph, dm: np.ndarray, u: int, v: int, X, s: int, s_prime: int, star: bool) -> bool:
    """Does ``u`` eliminate ``v`` with respect to the live set ``X``?"""
    if u == v:
        raise DismantleError("a vertex cannot eliminate itself")
    live = _as_mask(g.n, X)
    escaping = _near_mask(g, dm, v, u, s, star) & live & (dm[u] > s_prime)
    return not escaping.any()


def greedy_dismantling(g: Graph, dm: np.ndarray, s: int, s_prime: int, star: bool) -> EliminationOrder | None:
    """Peel eliminable vertices (smallest id first) until one is left.

    Elimination only gets easier as the live set shrinks, so getting stuck
    means no dismantling order exists.
    """
    if s < 1 or s_prime < 1:
        raise DismantleError("s and s' must be positive")
    n = g.n
    live = np.ones(n, dtype=bool)
    near_cache: dict[tuple[int, int], np.ndarray] = {}
    removed: list[int] = []
    eliminator: dict[int, int] = {}
    # only vertices within s' of v can cover v itself
    candidates = [np.flatnonzero((dm[v] <= s_prime) & (np.arange(n) != v)) for v in range(n)]
    for _ in range(n - 1):
        found = None
        for v in np.flatnonzero(live):
            for u in candidates[v]:
                if not live[u]:
                    continue
                key = (int(v), -1 if star else int(u))
                near = near_cache.get(key)
                if near is None:
                    near = near_cache[key] = _near_mask(g, dm, v, u, s, star)
                if not (near & live & (dm[u] > s_prime)).any():
                    found = (int(v), int(u))
                    break
            if found:
                break
        if found is None:
            return None
        v, u = found
        live[v] = False
        removed.append(v)
        eliminator[v] = u
    survivor = int(np.flatnonzero(live)[0])
    order = (survivor, *reversed(removed))
    return EliminationOrder(order, eliminator, s, s_prime, star)


def verify_order(g: Graph, dm: np.ndarray, ord: EliminationOrder) -> Violation | None:
    """First vertex whose elimination condition fails, or None."""
    if sorted(ord.order) != list(range(g.n)):
        raise DismantleError("order is not a permutation of the vertices")
    rank = np.empty(g.n, dtype=np.int64)
    rank[list(ord.order)] = np.arange(g.n)
    for i, v in enumerate(ord.order[1:], start=1):
        u = ord.eliminator.get(v)
        if u is None or u == v or rank[u] > i:
            return Violation(v, frozenset(), reason="missing or later eliminator")
        prefix = rank <= i
        bad = _near_mask(g, dm, v, u, ord.s, ord.star) & prefix & (dm[u] > ord.s_prime)
        if bad.any():
            return Violation(v, frozenset(np.flatnonzero(bad).tolist()))
    return None


def bfs_elimination_order(bfs: BfsOrder, depth_to_eliminator: int, s: int, s_prime: int, star: bool = True) -> EliminationOrder:
    """BFS order whose eliminators are tree ancestors ``min(k, depth)`` levels up."""
    elim = {v: bfs.ancestor(v, depth_to_eliminator) for v in bfs.order[1:]}
    return EliminationOrder(bfs.order, elim, s, s_prime, star)


def dismantle_to_copwin_bound(ord: EliminationOrder, weakly_modular: bool = False) -> HalfInt:
    """Hyperbolicity bound implied by a valid order.

    Weakly modular hosts get 184s; starred orders the general dismantling
    formula; plain orders 64s^2.
    """
    s, sp = ord.s, ord.s_prime
    if sp >= s:
        raise DismantleError("no hyperbolicity bound for s' >= s")
    if weakly_modular:
        return HalfInt.of(184 * s)
    if ord.star:
        return constant_bounds("dismantle_to_hyp", s=s, s_prime=sp)
    return HalfInt.of(64 * s * s)


def check_alpha(g: Graph, dm: np.ndarray, alpha: int, bfs: BfsOrder | None = None) -> NonHypWitness | None:
    """One-shot scale test: None if the BFS order is a (4a, 3a)*-dismantling order.

    Otherwise returns a witness showing the graph is not a/2-hyperbolic.
    """
    if alpha < 1:
        raise DismantleError("alpha must be positive")
    bfs = bfs_order(g, 0) if bfs is None else bfs
    rank = np.array(bfs.rank())
    for v in bfs.order:
        f = bfs.ancestor(v, 2 * alpha)
        bad = (dm[v] <= 4 * alpha) & (rank <= rank[v]) & (dm[f] > 3 * alpha)
        if bad.any():
            # nearest offender, ties by id (stack order)
            cand = np.flatnonzero(bad)
            y = int(cand[np.argmin(dm[v, cand])])
            return NonHypWitness(z=bfs.root, x=v, y=y, c=f, r=2 * alpha)
    return None


def _run_sieve(dm, bfs, alpha, centre, advance, outer, inner, radius_of_witness, debug=False):
    n = dm.shape[0]
    order = np.argsort(dm, axis=1, kind="stable")
    sorted_dist = np.take_along_axis(dm, order, axis=1)
    rank = np.array(bfs.rank())
    ptr = np.zeros(n, dtype=np.int64)
    trace: list[NonHypWitness] = []
    pops = 0
    cap = alpha + n + 1
    while True:
        R, r = outer(alpha), inner(alpha)
        done = True
        first = None
        for v in bfs.order:
            f = centre[v]
            end = int(np.searchsorted(sorted_dist[v], R, side="right"))
            start = int(ptr[v])
            if start < end:
                seg = order[v, start:end]
                wit = (rank[seg] <= rank[v]) & (dm[f, seg] > r)
                k = int(np.argmax(wit))
                if wit[k]:
                    ptr[v] = start + k
                    done = False
                    if first is None:
                        first = NonHypWitness(
                            z=bfs.root, x=int(v), y=int(seg[k]), c=int(f), r=radius_of_witness(alpha)
                        )
                else:
                    ptr[v] = end
                pops += int(ptr[v]) - start
            if debug:
                popped = order[v, : ptr[v]]
                assert not ((rank[popped] <= rank[v]) & (dm[f, popped] > r)).any(), (
                    f"popped vertex became a witness for v={v} at scale {alpha}"
                )
        if done:
            return alpha, trace, pops
        trace.append(first)
        alpha += 1
        if alpha > cap:
            raise RuntimeError("sieve failed to terminate; distance matrix inconsistent")
        centre = [advance(c) for c in centre]


def sieve_approx(g: Graph, dm: np.ndarray, root: int = 0, debug: bool = False) -> SieveResult:
    """Least alpha for which the BFS order passes ``check_alpha``, via n stacks.

    Certifies (alpha-1)/2 < delta* <= 784 alpha + 1/2. Popped vertices never
    return, so total pops are at most n^2.
    """
    bfs = bfs_order(g, root)
    p = bfs.parent
    centre = [p[p[v]] for v in range(g.n)]
    alpha, trace, pops = _run_sieve(
        dm, bfs, 1, centre,
        advance=lambda c: p[p[c]],
        outer=lambda a: 4 * a,
        inner=lambda a: 3 * a,
        radius_of_witness=lambda a: 2 * a,
        debug=debug,
    )
    lower = HalfInt(alpha) if alpha > 1 else ZERO
    upper = HalfInt(2 * 784 * alpha + 1)
    return SieveResult(alpha, lower, upper, trace, pops)


def sieve_approx_wm(g: Graph, dm: np.ndarray, root: int = 0, debug: bool = False) -> SieveResult:
    """Weakly modular variant: least alpha >= 0 with B_{2a+2}(v) & X_v inside B_{2a+1}(g_a(v)).

    Here g_a(v) is the tree ancestor ``min(a+1, depth)`` levels up, giving
    alpha/2 <= delta* <= 368(alpha+1).
    """
    if not is_weakly_modular(g, dm):
        raise DismantleError("graph is not weakly modular")
    bfs = bfs_order(g, root)
    p = bfs.parent
    centre = [p[v] for v in range(g.n)]
    alpha, trace, pops = _run_sieve(
        dm, bfs, 0, centre,
        advance=lambda c: p[c],
        outer=lambda a: 2 * a + 2,
        inner=lambda a: 2 * a + 1,
        radius_of_witness=lambda a: a + 1,
        debug=debug,
    )
    return SieveResult(alpha, HalfInt(alpha), HalfInt(2 * 368 * (alpha + 1)), trace, pops)


def sieve_approx_localized(g: Graph, root: int = 0) -> SieveResult:
    """Stack sieve without a distance matrix.

    Each vertex grows its own BFS queue on demand; distances are only known for
    vertices already enqueued, and an unknown distance counts as a witness.
    The returned alpha can exceed the matrix sieve's but its bounds still hold;
    the lower bound comes only from witnesses whose distances were known.
    """
    bfs = bfs_order(g, root)
    p = bfs.parent
    rank = bfs.rank()
    adj = g.adjacency
    n = g.n
    queues = [deque([v]) for v in range(n)]
    # lazily filled rows: known[v][u] = d(u, v) once u entered v's queue
    known: list[dict[int, int]] = [{v: 0} for v in range(n)]
    centre = list(range(n))
    trace: list[NonHypWitness] = []
    pops = touched = 0
    alpha = 0
    lower = ZERO
    inf = float("inf")
    while True:
        alpha += 1
        if alpha > 2 * n + 2:
            raise RuntimeError("localized sieve failed to terminate")
        done = True
        first = None
        for v in bfs.order:
            f = centre[v] = p[p[centre[v]]]
            q, dv, df = queues[v], known[v], known[centre[v]]
            while q:
                u = q[0]
                du = dv[u]
                if du > 4 * alpha:
                    break
                if rank[u] <= rank[v] and df.get(u, inf) > 3 * alpha:
                    done = False
                    if first is None and u in df:
                        first = NonHypWitness(z=root, x=v, y=u, c=f, r=2 * alpha)
                        # only a known distance certifies anything
                        lower = max(lower, HalfInt(df[u] - 2 * alpha))
                    break
                q.popleft()
                pops += 1
                touched += len(adj[u])
                for w in adj[u]:
                    if w not in dv:
                        dv[w] = du + 1
                        q.append(w)
        if done:
            break
        if first is not None:
            trace.append(first)
    return SieveResult(
        alpha, lower, HalfInt(2 * 784 * alpha + 1), trace, pops, stats={"touched_edges": touched}
    )

