"""Solvers for the Minimum Feasible Tileset problem."""

from .approx import approximate
from .canonical import canonicalize
from .exact import Partition, partition_to_tileset, solve_bruteforce, solve_dp, tileset_to_partition
from .feasibility import forest_feasible, is_feasible, is_feasible_scenario, orientation_for
from .kernels import BACKEND
from .model import Instance, Tileset, parse_instance, serialize_instance, tileset_graph

__all__ = [
    "BACKEND",
    "Instance",
    "Partition",
    "Tileset",
    "approximate",
    "canonicalize",
    "forest_feasible",
    "is_feasible",
    "is_feasible_scenario",
    "orientation_for",
    "parse_instance",
    "partition_to_tileset",
    "serialize_instance",
    "solve_bruteforce",
    "solve_dp",
    "tileset_graph",
    "tileset_to_partition",
]
