"""Disc fillings of loops built from a starred dismantling order.

A loop longer than ``2(s + s')`` is cut along a short geodesic between two loop
vertices ``2s`` apart, splitting off one face of length at most ``2(s + s')``.
Repeating on the shorter residual loop gives at most ``ceil(len / 2(s - s'))``
faces. The disc is kept as plain cyclic vertex sequences: faces are glued
along shared disc vertices, so planarity holds by construction.
"""

from __future__ import annotations

import json
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Graph
from .dismantle import EliminationOrder


class FillingError(ValueError):
    pass


@dataclass
class Filling:
    disc_vertex_count: int
    external: list[int]
    faces: list[list[int]]
    phi: list[int]
    N: int

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.disc_vertex_count, "external": self.external, "faces": self.faces, "phi": self.phi}
        )

    @classmethod
    def from_json(cls, text: str, N: int) -> "Filling":
        obj = json.loads(text)
        return cls(obj["n"], obj["external"], obj["faces"], obj["phi"], N)


@dataclass
class FillingReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_loop(dm: np.ndarray, loop: Sequence[int]) -> None:
    if not loop:
        raise FillingError("empty loop")
    for i, v in enumerate(loop):
        w = loop[(i + 1) % len(loop)]
        if dm[v, w] > 1:
            raise FillingError(f"loop step {i} joins non-adjacent vertices {v} and {w}")


def geodesic(g: Graph, dm: np.ndarray, x: int, y: int) -> list[int]:
    """Shortest x-y path; each step goes to the smallest-id neighbour closer to y."""
    path = [x]
    while path[-1] != y:
        here = path[-1]
        path.append(min(w for w in g.adjacency[here] if dm[w, y] == dm[here, y] - 1))
    return path


def find_shortcut(g: Graph, dm: np.ndarray, loop: Sequence[int], ord: EliminationOrder):
    """Positions ``p, q = p + 2s (mod len)`` on the loop and a geodesic between them.

    The pair straddles the loop vertex that comes last in the order, so both
    ends lie within ``s'`` of its eliminator.
    """
    s, sp = ord.s, ord.s_prime
    n = len(loop)
    if not ord.star or sp >= s:
        raise FillingError("fillings need a starred order with s' < s")
    if n <= 2 * (s + sp):
        raise FillingError("loop is already short enough to be a single face")
    rank = ord.rank()
    i = max(range(n), key=lambda k: (rank[loop[k]], -k))
    p, q = (i - s) % n, (i + s) % n
    x, y = loop[p], loop[q]
    if dm[x, y] > 2 * sp:
        raise FillingError("order is not a valid (s,s')*-dismantling order")
    return p, q, geodesic(g, dm, x, y)


def build_filling(g: Graph, dm: np.ndarray, loop: Sequence[int], ord: EliminationOrder) -> Filling:
    """Fill ``loop`` with faces of length <= 2(s + s')."""
    check_loop(dm, loop)
    s, sp = ord.s, ord.s_prime
    phi = list(loop)
    external = list(range(len(loop)))
    boundary = deque(external)  # residual loop as disc vertices
    faces: list[list[int]] = []
    while len(boundary) > 2 * (s + sp):
        cur = list(boundary)
        host = [phi[d] for d in cur]
        p, q, path = find_shortcut(g, dm, host, ord)
        n = len(cur)
        inner = []
        for h in path[1:-1]:
            inner.append(len(phi))
            phi.append(h)
        arc = [cur[(p + k) % n] for k in range(2 * s + 1)]  # p .. q
        rest = [cur[(q + k) % n] for k in range(n - 2 * s + 1)]  # q .. p
        faces.append(arc + inner[::-1])
        new = rest + inner
        if len(new) > n - 2 * (s - sp):
            raise AssertionError("cut did not shorten the loop enough")
        if len(set(new)) != len(new):
            raise AssertionError("residual boundary is not a simple cycle")
        boundary = deque(new)
    faces.append(list(boundary))
    return Filling(len(phi), external, faces, phi, s + sp)


def validate_filling(
    g: Graph,
    dm: np.ndarray,
    loop: Sequence[int],
    f: Filling,
    N: int,
    K_num: int,
    K_den: int,
) -> FillingReport:
    rep = FillingReport()
    fail = rep.failures.append
    nv = f.disc_vertex_count
    if len(f.phi) != nv:
        fail("phi size differs from disc vertex count")
        return rep
    cycles = [f.external, *f.faces]
    if any(not (0 <= d < nv) for cyc in cycles for d in cyc):
        fail("face refers to an unknown disc vertex")
        return rep
    if not f.faces:
        fail("filling has no faces")
    if len(f.external) != len(loop):
        fail(f"boundary length {len(f.external)} != loop length {len(loop)}")
    elif [f.phi[d] for d in f.external] != list(loop):
        fail("boundary does not map onto the loop")
    if len(set(f.external)) != len(f.external):
        fail("external boundary is not simple")
    for k, face in enumerate(f.faces):
        if len(face) > 2 * N:
            fail(f"face {k} has length {len(face)} > 2N = {2 * N}")
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if dm[f.phi[a], f.phi[b]] > 1:
                fail(f"disc edge ({a}, {b}) maps to vertices at distance {dm[f.phi[a], f.phi[b]]}")
    bound = math.ceil(Fraction(K_num, K_den) * len(loop))
    if len(f.faces) > bound:
        fail(f"{len(f.faces)} faces exceed area bound {bound}")
    # each disc edge borders exactly two faces (external included)
    sides = Counter(
        frozenset((a, b)) if a != b else frozenset((a,))
        for cyc in cycles
        for a, b in zip(cyc, cyc[1:] + cyc[:1])
    )
    sides_total = sum(len(c) for c in cycles)
    if sides_total % 2 or any(c % 2 for c in sides.values()):
        fail("disc edges are not each shared by two faces")
    elif nv - sides_total // 2 + len(cycles) != 2:
        fail("Euler characteristic of the disc is not 2")
    return rep
