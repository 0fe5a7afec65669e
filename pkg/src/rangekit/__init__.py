"""Range assignment solvers: exact 1D dynamic programs (with and without a
t-spanner constraint), a constant-factor approximation for the plane, and
brute-force oracles."""
from ._accel import BACKEND
from .approx import (decompose, euclidean_mst, flatten, hub_solution,
                     solve_approx, variant_hub_solution, weighted_diameter_path)
from .core import (CommGraph, DistanceMatrix, Instance, LeftRightAssignment,
                   RangeAssignment, Solution, canonicalize, cost, cost_lr,
                   cost_prime, induced_graph, induced_graph_lr, is_line_alike,
                   is_strongly_connected, is_t_spanner, merge_lr)
from .exact1d import (build_sum_table, midpoint_split, solve_1d_cubic,
                      solve_1d_quadratic, solve_line_alike)
from .oracle import brute_force_minrange, brute_force_spanner
from .spanner1d import forced_chain_cost, solve_1d_spanner

__version__ = "0.1.0"
