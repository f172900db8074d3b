"""Deterministic graph families.

Random families draw from SplitMix64, so a ``(family, params, seed)`` triple
names the same graph in any language.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import Graph, GraphError

MASK64 = (1 << 64) - 1
GNP_RETRIES = 64


class SplitMix64:
    """SplitMix64 v1: 64-bit state, golden-gamma increment, variant-13 finaliser."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Uniform integer in [0, k) by rejection."""
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def unit(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...]
    seed: int | None = None


ARITY = {
    "path": 1,
    "cycle": 1,
    "complete": 1,
    "grid": 2,
    "subdivided_grid": 1,
    "hypercube": 1,
    "random_tree": 1,
    "random_gnp": 2,
    "random_block": 2,
}
RANDOM = {"random_tree", "random_gnp", "random_block"}


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def grid(rows: int, cols: int) -> Graph:
    vid = lambda r, c: r * cols + c
    edges = [(vid(r, c), vid(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(vid(r, c), vid(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return Graph(rows * cols, edges)


def subdivided_grid(N: int) -> Graph:
    """N x N grid of squares with side N: lattice points of [0, N^2]^2 on the grid lines.

    Corners are marked ``a=(0,0)``, ``b=(N^2,0)``, ``c=(N^2,N^2)``, ``d=(0,N^2)``.
    """
    if N < 1:
        raise GraphError("N must be positive")
    side = N * N
    pts = [(x, y) for y in range(side + 1) for x in range(side + 1) if x % N == 0 or y % N == 0]
    index = {p: i for i, p in enumerate(pts)}
    edges = []
    for (x, y), i in index.items():
        for nb in ((x + 1, y), (x, y + 1)):
            j = index.get(nb)
            # horizontal steps stay on a row line, vertical steps on a column line
            if j is not None and (y % N == 0 if nb[1] == y else x % N == 0):
                edges.append((i, j))
    marks = {"a": index[(0, 0)], "b": index[(side, 0)], "c": index[(side, side)], "d": index[(0, side)]}
    return Graph(len(pts), edges, labels=[f"{x},{y}" for x, y in pts], marks=marks)


def hypercube(d: int) -> Graph:
    n = 1 << d
    return Graph(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)])


def random_tree(n: int, rng: SplitMix64) -> Graph:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    return Graph(n, [(rng.below(i), i) for i in range(1, n)])


def random_gnp(n: int, p_permille: int, rng: SplitMix64) -> Graph:
    """G(n, p) with p = p_permille / 1000, resampled until connected.

    Uses geometric skipping over the pair sequence, so cost is O(n + m).
    """
    if not 0 < p_permille <= 1000:
        raise GraphError("p_permille must be in (0, 1000]")
    p = p_permille / 1000
    for _ in range(GNP_RETRIES):
        sub = SplitMix64(rng.next_u64())
        edges = []
        if p == 1.0:
            edges = list(itertools.combinations(range(n), 2))
        else:
            log_q = math.log(1.0 - p)
            v, w = 1, -1
            while v < n:
                w += 1 + int(math.log(1.0 - sub.unit()) / log_q)
                while w >= v and v < n:
                    w -= v
                    v += 1
                if v < n:
                    edges.append((w, v))
        try:
            return Graph(n, edges)
        except GraphError:
            continue
    raise GraphError(f"no connected G({n}, {p}) sample after {GNP_RETRIES} tries")


def random_block(blocks: int, max_size: int, rng: SplitMix64) -> Graph:
    """Block graph: each new clique of 2..max_size vertices hangs off a uniform existing vertex."""
    if max_size < 2:
        raise GraphError("blocks need at least 2 vertices")
    n, edges = 1, []
    for _ in range(blocks):
        cut = rng.below(n)
        size = 2 + rng.below(max_size - 1)
        members = [cut, *range(n, n + size - 1)]
        n += size - 1
        edges += list(itertools.combinations(members, 2))
    return Graph(n, edges)


def generate(spec: FamilySpec) -> Graph:
    fam, params = spec.family, tuple(spec.params)
    if fam not in ARITY:
        raise GraphError(f"unknown family {fam!r}")
    if len(params) != ARITY[fam]:
        raise GraphError(f"{fam} takes {ARITY[fam]} parameter(s), got {len(params)}")
    if any(p < 0 for p in params):
        raise GraphError("parameters must be nonnegative")
    if fam in RANDOM:
        if spec.seed is None:
            raise GraphError(f"{fam} requires a seed")
        rng = SplitMix64(spec.seed)
        return {"random_tree": random_tree, "random_gnp": random_gnp, "random_block": random_block}[fam](
            *params, rng
        )
    return {
        "path": path,
        "cycle": cycle,
        "complete": complete,
        "grid": grid,
        "subdivided_grid": subdivided_grid,
        "hypercube": hypercube,
    }[fam](*params)
