"""Gromov hyperbolicity via dismantling orders, cop-and-robber games and disc fillings."""

__version__ = "0.1.0"

from .core import BfsOrder, Graph, GraphError, all_pairs_distances, ball, ball_excluding, bfs_order, interval
from .metric import HalfInt, NonHypWitness, exact_hyperbolicity, four_point_delta

__all__ = [
    "BfsOrder",
    "Graph",
    "GraphError",
    "HalfInt",
    "NonHypWitness",
    "all_pairs_distances",
    "ball",
    "ball_excluding",
    "bfs_order",
    "exact_hyperbolicity",
    "four_point_delta",
    "interval",
]
