import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import F2, F3, F4, line, plane, xs_strategy
from rangekit.core import chain_cost, cost, distance_matrix, induced_graph, is_strongly_connected
from rangekit.errors import DimensionMismatch, NoInteriorPoint, NotLineAlike
from rangekit.exact1d import (build_sum_table, midpoint_split, solve_1d_cubic,
                              solve_1d_quadratic, solve_line_alike)
from rangekit.oracle import brute_force_minrange


def test_sum_table_examples():
    s = build_sum_table(line(F3))
    assert (s[0, 2], s[0, 1], s[1, 2]) == (3, 1, 2)
    assert build_sum_table(line(F2, 2.0))[0, 1] == 25
    assert build_sum_table(line(F4))[0, 3] == 3
    with pytest.raises(DimensionMismatch):
        build_sum_table(plane([[0, 0], [1, 1]]))


@pytest.mark.parametrize("xs,alpha,want", [(F2, 1, 10), (F4, 1, 4), (F3, 1, 5), (F3, 2, 9)])
def test_cubic_examples(xs, alpha, want):
    sol = solve_1d_cubic(line(xs, alpha))
    assert sol.cost == pytest.approx(want)
    assert sol.valid


def test_midpoint_examples():
    assert midpoint_split(line([0, 2, 3, 10]), 0, 3) == 2
    assert midpoint_split(line([0, 1, 10]), 0, 2) == 1
    assert midpoint_split(line([0, 4, 6, 10]), 0, 3) == 1
    with pytest.raises(NoInteriorPoint):
        midpoint_split(line(F3), 0, 1)


def test_quadratic_examples():
    assert solve_1d_quadratic(line(F3)).cost == pytest.approx(5)
    assert solve_1d_quadratic(line(F4, 2)).cost == pytest.approx(solve_1d_cubic(line(F4, 2)).cost)
    for a in (1.0, 2.0, 3.0):
        assert solve_1d_quadratic(line(F2, a)).cost == pytest.approx(2 * 5 ** a)


def test_single_point():
    sol = solve_1d_quadratic(line([4.0]))
    assert sol.cost == 0 and sol.ranges.tolist() == [0]


def test_line_alike_examples():
    assert solve_line_alike(distance_matrix(F3), 1).cost == pytest.approx(5)
    assert solve_line_alike(np.array([[0, 2.5], [2.5, 0]]), 2).cost == pytest.approx(2 * 2.5 ** 2)
    with pytest.raises(NotLineAlike):
        solve_line_alike(np.array([[0, 5, 1], [5, 0, 2], [1, 2, 0]], float), 1)


def _random_line_alike(rng, n):
    # start from tree-like clusters: min over outer index sets is line-alike by construction
    pts = rng.random((n, 2))
    D = distance_matrix(pts)
    H = np.minimum.accumulate(D, axis=0)
    H = np.minimum.accumulate(H[:, ::-1], axis=1)[:, ::-1]
    H = np.triu(H, 1)
    return H + H.T


@pytest.mark.parametrize("seed", range(15))
def test_line_alike_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    H = _random_line_alike(rng, 5)
    if (H + np.eye(5) <= 0).any():
        pytest.skip("degenerate matrix")
    sol = solve_line_alike(H, 1)
    want, _ = brute_force_minrange(H, 1)
    assert sol.cost == pytest.approx(want, rel=1e-9)
    assert sol.valid


@given(xs_strategy(2, 8), st.sampled_from([1.0, 2.0, 3.0]))
def test_cubic_equals_quadratic_equals_oracle(xs, alpha):
    inst = line(xs, alpha)
    c = solve_1d_cubic(inst).cost
    q = solve_1d_quadratic(inst).cost
    b, _ = brute_force_minrange(inst.metric(), alpha)
    assert math.isclose(c, q, rel_tol=1e-9) and math.isclose(c, b, rel_tol=1e-9)


@given(xs_strategy(2, 30), st.sampled_from([1.0, 2.0, 3.0]))
def test_reconstruction_and_bounds(xs, alpha):
    inst = line(xs, alpha)
    sol = solve_1d_quadratic(inst)
    assert sol.valid
    assert math.isclose(cost(sol.ranges, alpha), sol.cost, rel_tol=1e-9)
    assert sol.cost <= chain_cost(inst.xs, alpha) * (1 + 1e-12)
    d = distance_matrix(inst.xs) + np.diag(np.full(inst.n, np.inf))
    assert sol.cost >= (d.min(axis=1) ** alpha).sum() * (1 - 1e-12)
    if alpha == 1:
        g = np.diff(inst.xs)
        assert sol.cost >= (g.sum() + g.max()) * (1 - 1e-12)
