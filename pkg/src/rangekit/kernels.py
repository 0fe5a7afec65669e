"""Dispatch to the numba or the pure-numpy kernels (see _accel)."""
from ._accel import USE_NUMBA, BACKEND

if USE_NUMBA:
    from ._kernels_nb import (sum_table, cubic_dp, midpoint_index, quadratic_dp,
                              strongly_connected, floyd_warshall, brute_search,
                              crossing_costs)
else:
    from ._kernels_np import (sum_table, cubic_dp, midpoint_index, quadratic_dp,  # noqa: F401
                              strongly_connected, floyd_warshall, brute_search,
                              crossing_costs)

__all__ = ["BACKEND", "sum_table", "cubic_dp", "midpoint_index", "quadratic_dp",
           "strongly_connected", "floyd_warshall", "brute_search", "crossing_costs"]
