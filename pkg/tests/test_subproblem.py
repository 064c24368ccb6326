"""Tests for the direction subproblem, the steepest-descent direction and D(x, d)."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.optimization.subproblem import (
    descent_value,
    is_critical,
    model_values,
    solve_direction,
    solve_steepest,
)
from src.optimization.updates import HessianSet
from tests.conftest import random_spd


def kkt_residual(G, hessians, sol):
    g = sol.lam @ G
    return np.linalg.norm(hessians.combined(sol.lam) @ sol.d + g)


def primal_value(G, hessians, d):
    return float(np.max(model_values(G, hessians, d)))


def grid_values(G, hessians, points):
    """max_j model value at every row of `points`."""
    vals = points @ G.T + 0.5 * np.stack(
        [np.einsum("ij,jk,ik->i", points, B, points) for B in hessians], axis=1
    )
    return vals.max(axis=1)


def test_single_objective_newton_step():
    G = np.array([[2.0]])
    sol = solve_direction(G, HessianSet([np.array([[2.0]])]))
    assert_allclose(sol.d, [-1.0])
    assert sol.theta == pytest.approx(-1.0)
    assert_allclose(sol.lam, [1.0])


def test_opposite_gradients_are_critical():
    G = np.array([[1.0], [-2.0]])
    sol = solve_direction(G, HessianSet.identity(2, 1))
    assert np.linalg.norm(sol.d) <= 1e-10
    assert abs(sol.theta) <= 1e-10


def test_dominant_gradient_picks_vertex():
    G = np.array([[1.0], [2.0]])
    sol = solve_direction(G, HessianSet.identity(2, 1))
    assert_allclose(sol.d, [-1.0], atol=1e-8)
    assert sol.theta == pytest.approx(-0.5, abs=1e-8)
    assert_allclose(sol.lam, [1.0, 0.0], atol=1e-8)

    grid = np.arange(-3.0, 3.0 + 1e-12, 1e-4)
    brute = np.maximum(1.0 * grid + 0.5 * grid**2, 2.0 * grid + 0.5 * grid**2)
    assert sol.theta == pytest.approx(brute.min(), abs=1e-7)


def test_solution_invariants(rng):
    for _ in range(50):
        n, m = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        G = rng.normal(size=(m, n))
        hessians = HessianSet([random_spd(rng, n) for _ in range(m)])
        sol = solve_direction(G, hessians)

        assert sol.theta <= 0.0
        assert np.all(sol.lam >= 0.0) and abs(sol.lam.sum() - 1.0) <= 1e-10
        assert kkt_residual(G, hessians, sol) <= 1e-8 * (1.0 + np.max(np.linalg.norm(G, axis=1)))
        assert sol.theta == pytest.approx(-0.5 * sol.d @ hessians.combined(sol.lam) @ sol.d, abs=1e-12)

        values = model_values(G, hessians, sol.d)
        active = sol.lam > 1e-8
        assert np.all(np.abs(values[active] - sol.theta) <= 1e-7)
        assert primal_value(G, hessians, sol.d) == pytest.approx(sol.theta, abs=1e-7)


def test_theta_matches_grid_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 3))
        G = rng.uniform(-1.0, 1.0, size=(2, n))
        hessians = HessianSet([random_spd(rng, n) for _ in range(2)])
        sol = solve_direction(G, hessians)

        assert kkt_residual(G, hessians, sol) <= 1e-8 * (1.0 + np.max(np.linalg.norm(G, axis=1)))

        # theta is a lower bound of the primal objective over a wide grid
        axes = [np.linspace(-5.0, 5.0, 201)] * n
        wide = np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, n)
        assert sol.theta <= grid_values(G, hessians, wide).min() + 1e-12

        # and is reached to grid resolution around the minimizer
        axes = [np.linspace(c - 0.01, c + 0.01, 201) for c in sol.d]
        local = np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, n)
        assert abs(grid_values(G, hessians, local).min() - sol.theta) <= 1e-3


def test_critical_instances():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(1, 4))
        g = rng.normal(size=n)
        # hull of {g, -t g} contains the origin
        G = np.vstack((g, -rng.uniform(0.2, 3.0) * g))
        sol = solve_direction(G, HessianSet.identity(2, n))
        assert np.linalg.norm(sol.d) <= 1e-10
        assert abs(sol.theta) <= 1e-10
        assert is_critical(G)


def test_non_critical_descent_ordering():
    rng = np.random.default_rng(12)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        base = rng.normal(size=n)
        # every gradient has a positive component along base, so the hull avoids 0
        G = np.vstack([base + 0.3 * np.linalg.norm(base) * rng.uniform(-1, 1, size=n) / np.sqrt(n) for _ in range(3)])
        hessians = HessianSet([random_spd(rng, n) for _ in range(3)])
        sol = solve_direction(G, hessians)
        sd = solve_steepest(G)
        assert sd.norm > 1e-6
        assert descent_value(G, sol.d) < sol.theta < 0.0
        assert descent_value(G, sd.d_sd) < -0.5 * sd.norm**2


def test_steepest_examples():
    sd = solve_steepest(np.array([[3.0, 4.0]]))
    assert_allclose(sd.d_sd, [-3.0, -4.0])

    sd = solve_steepest(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert_allclose(sd.lam_sd, [0.5, 0.5], atol=1e-8)
    assert_allclose(sd.d_sd, [-0.5, -0.5], atol=1e-8)

    g = np.array([0.7, -1.3])
    assert solve_steepest(np.vstack((g, -g))).norm <= 1e-10


def test_steepest_is_min_norm_point():
    G = np.array([[1.0, 2.0], [3.0, -1.0]])
    sd = solve_steepest(G)
    grid = np.linspace(0.0, 1.0, 10001)
    hull = np.outer(grid, G[0]) + np.outer(1.0 - grid, G[1])
    assert sd.norm == pytest.approx(np.linalg.norm(hull, axis=1).min(), abs=1e-6)
    assert_allclose(sd.d_sd, -(sd.lam_sd @ G), atol=1e-10)


def test_steepest_equals_identity_direction(rng):
    for _ in range(20):
        n, m = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        G = rng.normal(size=(m, n))
        sol = solve_direction(G, HessianSet.identity(m, n))
        sd = solve_steepest(G)
        assert_allclose(sol.d, sd.d_sd, atol=1e-8)


def test_warm_start_gives_same_solution(rng):
    G = rng.normal(size=(3, 2))
    hessians = HessianSet([random_spd(rng, 2) for _ in range(3)])
    cold = solve_direction(G, hessians)
    warm = solve_direction(G, hessians, lambda0=cold.lam)
    assert_allclose(warm.d, cold.d, atol=1e-8)
    assert warm.iterations <= cold.iterations


def test_descent_value_examples():
    G = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert descent_value(G, np.array([-1.0, -1.0])) == -1.0
    assert descent_value(G, np.zeros(2)) == 0.0
    assert descent_value(np.array([[1.0, 2.0], [3.0, -1.0]]), np.array([1.0, 1.0])) == 3.0


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=2, max_value=4),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_theta_is_never_positive(n, m, seed):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(m, n))
    hessians = HessianSet([random_spd(rng, n) for _ in range(m)])
    sol = solve_direction(G, hessians)
    assert sol.theta <= 0.0
    assert (sol.theta == 0.0) == (np.linalg.norm(sol.d) == 0.0)


def assert_solution_invariants(G, hessians, sol):
    assert sol.theta <= 0.0
    assert np.all(sol.lam >= 0.0) and abs(sol.lam.sum() - 1.0) <= 1e-10
    assert kkt_residual(G, hessians, sol) <= 1e-8 * (1.0 + np.max(np.linalg.norm(G, axis=1)))
    values = model_values(G, hessians, sol.d)
    assert np.all(np.abs(values[sol.lam > 1e-8] - sol.theta) <= 1e-7)
    assert primal_value(G, hessians, sol.d) == pytest.approx(sol.theta, abs=1e-7)


def test_many_random_instances_solve():
    rng = np.random.default_rng(2024)
    for _ in range(2000):
        n, m = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        G = rng.normal(size=(m, n))
        hessians = HessianSet([random_spd(rng, n, low=0.5) for _ in range(m)])
        assert_solution_invariants(G, hessians, solve_direction(G, hessians))


def test_active_set_finish_without_ascent():
    # no ascent iterations at all: the active-set Newton finish has to find the optimum
    sd = solve_steepest(np.array([[1.0, 0.0], [0.0, 2.0]]), max_iters=0)
    assert_allclose(sd.lam_sd, [0.8, 0.2], atol=1e-10)
    assert_allclose(sd.d_sd, [-0.8, -0.4], atol=1e-10)


@pytest.mark.property
@settings(max_examples=300, deadline=None)
@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=2, max_value=4),
    st.floats(min_value=0.05, max_value=1.0),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_random_spd_instances_never_stall(n, m, low, seed):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(m, n)) * rng.uniform(0.1, 5.0)
    hessians = HessianSet([random_spd(rng, n, low=low) for _ in range(m)])
    assert_solution_invariants(G, hessians, solve_direction(G, hessians))
