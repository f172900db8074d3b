"""Exact solver for the one-cop game with speeds: cop moves <= s' hops, robber <= s hops.

The robber may not enter or pass through the cop's current vertex. States are
``(cop, robber, mover)``; the cop places first, the robber then picks a
different vertex, and the cop moves first.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Graph, bfs_distances

UNSOLVED = np.iinfo(np.int32).max


class Side(str, Enum):
    COP = "cop"
    ROBBER = "robber"


@dataclass(frozen=True)
class GameState:
    cop: int
    robber: int
    to_move: Side

    @property
    def captured(self) -> bool:
        return self.cop == self.robber


class GameError(ValueError):
    pass


def cop_moves(g: Graph, dm: np.ndarray, st: GameState, s_prime: int) -> set[int]:
    if st.to_move is not Side.COP:
        raise GameError("not the cop's turn")
    return set(np.flatnonzero(dm[st.cop] <= s_prime).tolist())


def robber_moves(g: Graph, st: GameState, s: int) -> set[int]:
    if st.to_move is not Side.ROBBER:
        raise GameError("not the robber's turn")
    if st.captured:
        raise GameError("robber already captured")
    d = bfs_distances(g, st.robber, excluded=st.cop, limit=s)
    return set(np.flatnonzero(d >= 0).tolist())


@dataclass
class Solution:
    """Optimal play values.

    ``cop_steps[c, r]`` is the number of cop moves needed to capture from the
    cop-to-move state, ``robber_steps[c, r]`` the same from the robber-to-move
    state; ``UNSOLVED`` marks robber wins.
    """

    s: int
    s_prime: int
    cop_steps: np.ndarray
    robber_steps: np.ndarray
    copwin: bool
    best_start: int | None

    def _table(self, st: GameState) -> np.ndarray:
        return self.cop_steps if st.to_move is Side.COP else self.robber_steps

    def steps_to_capture(self, st: GameState) -> float:
        if st.captured:
            return 0
        v = int(self._table(st)[st.cop, st.robber])
        return float("inf") if v == UNSOLVED else v

    def winning(self, st: GameState) -> bool:
        return self.steps_to_capture(st) != float("inf")


def _robber_options(g: Graph, s: int) -> list[list[np.ndarray]]:
    # opts[c][r] = robber destinations from r with the cop on c
    n = g.n
    opts = []
    for c in range(n):
        row = []
        for r in range(n):
            if r == c:
                row.append(np.empty(0, dtype=np.int64))
            else:
                row.append(np.flatnonzero(bfs_distances(g, r, excluded=c, limit=s) >= 0))
        opts.append(row)
    return opts


def solve_game(g: Graph, dm: np.ndarray, s: int, s_prime: int) -> Solution:
    """Retrograde analysis from the capture states, processed in order of game length.

    Robber-to-move states are resolved once every robber option is known to
    lose (counter reaches zero); their value is the largest option value.
    Cop-to-move states take one plus the smallest resolved successor.
    """
    if s < 1 or s_prime < 1:
        raise GameError("speeds must be positive")
    n = g.n
    cop_reach = [np.flatnonzero(dm[c] <= s_prime) for c in range(n)]
    opts = _robber_options(g, s)
    # predecessors of cop-to-move (c, r2): robber states (c, r) with r2 in opts[c][r];
    # punctured balls are symmetric so that is opts[c][r2] itself.
    remaining = np.array([[len(opts[c][r]) for r in range(n)] for c in range(n)], dtype=np.int64)
    cop_steps = np.full((n, n), UNSOLVED, dtype=np.int32)
    robber_steps = np.full((n, n), UNSOLVED, dtype=np.int32)
    heap: list[tuple[int, int, int, int]] = []  # (value, kind, c, r); kind 0 = robber state
    for c in range(n):
        robber_steps[c, c] = 0
        heapq.heappush(heap, (0, 0, c, c))
    while heap:
        val, kind, c, r = heapq.heappop(heap)
        if kind == 0:
            # cop states (c0, r) that can jump to c
            for c0 in cop_reach[c]:
                if c0 != r and cop_steps[c0, r] == UNSOLVED:
                    cop_steps[c0, r] = val + 1
                    heapq.heappush(heap, (val + 1, 1, int(c0), r))
        else:
            for r0 in opts[c][r]:
                if robber_steps[c, r0] != UNSOLVED:
                    continue
                remaining[c, r0] -= 1
                if remaining[c, r0] == 0:
                    robber_steps[c, r0] = val
                    heapq.heappush(heap, (val, 0, c, int(r0)))
    copwin, best = False, None
    if n == 1:
        copwin, best = True, 0
    else:
        for c0 in range(n):
            others = np.delete(cop_steps[c0], c0)
            if (others != UNSOLVED).all():
                copwin, best = True, c0
                break
    return Solution(s, s_prime, cop_steps, robber_steps, copwin, best)


@dataclass
class Transcript:
    moves: list[dict]
    captured: bool
    already_captured: bool = False

    def to_jsonl(self) -> str:
        return "".join(json.dumps(m) + "\n" for m in self.moves)


ROBBER_POLICIES = ("greedy", "random", "optimal")


def simulate(
    g: Graph,
    dm: np.ndarray,
    s: int,
    s_prime: int,
    sol: Solution,
    robber_policy: str = "optimal",
    max_rounds: int = 100,
    seed: int = 0,
    cop_start: int | None = None,
    robber_start: int | None = None,
) -> Transcript:
    """Play the cop optimally against the chosen robber policy.

    ``greedy`` maximises the resulting capture time (ties: smallest id);
    ``optimal`` does the same but breaks ties by distance from the cop;
    ``random`` moves uniformly using ``seed``.
    """
    if (sol.s, sol.s_prime) != (s, s_prime) or sol.cop_steps.shape[0] != g.n:
        raise GameError("solution does not match game parameters")
    if robber_policy not in ROBBER_POLICIES:
        raise GameError(f"unknown robber policy {robber_policy!r}")
    rng = random.Random(seed)
    c = sol.best_start if cop_start is None else cop_start
    if c is None:
        c = 0
    if robber_start is not None:
        r = robber_start
    elif g.n == 1:
        r = c
    else:
        choices = [x for x in range(g.n) if x != c]
        r = _pick(choices, lambda x: sol.cop_steps[c, x], dm[c], robber_policy, rng)
    if c == r:
        return Transcript([], True, already_captured=True)
    moves = []
    for rnd in range(1, max_rounds + 1):
        dest = np.flatnonzero(dm[c] <= s_prime)
        c = int(min(dest, key=lambda x: (0 if x == r else sol.robber_steps[x, r], x)))
        moves.append({"round": rnd, "cop": c, "robber": r, "mover": "cop"})
        if c == r:
            return Transcript(moves, True)
        options = sorted(robber_moves(g, GameState(c, r, Side.ROBBER), s))
        r = _pick(options, lambda x: sol.cop_steps[c, x], dm[c], robber_policy, rng)
        moves.append({"round": rnd, "cop": c, "robber": r, "mover": "robber"})
    return Transcript(moves, False)


def _pick(options, value, cop_dist, policy, rng):
    if policy == "random":
        return rng.choice(options)
    if policy == "greedy":
        return max(options, key=lambda x: (int(value(x)), -x))
    return max(options, key=lambda x: (int(value(x)), int(cop_dist[x]), -x))
