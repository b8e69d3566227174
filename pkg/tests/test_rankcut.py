import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from conftest import brute_cut, random_graph
from qmcred.graphs import Graph, make_named_graph
from qmcred.rankcut import (TRIANGLE, ascend, assignment_from_json, assignment_to_json, check_assignment,
                            colour_classes, edge_energies, energy, low_rank_candidates, random_assignment,
                            solve_exact_rank1,
                            solve_rankk, triangle_max, triangle_max_numeric, verify_triangle)


def loop_energy(g, x):
    return sum(w * (1 - float(np.dot(x[u], x[v]))) / 2 for u, v, w in g.edges)


def sphere_triangle_max(theta):
    """Free vertex searched over the whole 2-sphere (not just the great circle)."""
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([math.cos(theta), math.sin(theta), 0.0])

    def neg(p):
        c = np.array([math.sin(p[0]) * math.cos(p[1]), math.sin(p[0]) * math.sin(p[1]), math.cos(p[0])])
        return -((1 - a @ b) + (1 - a @ c) + (1 - b @ c)) / 2

    starts = [(t, p) for t in np.linspace(0.2, math.pi - 0.2, 5) for p in np.linspace(0, 2 * math.pi, 8)]
    return max(-minimize(neg, s, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13}).fun
               for s in starts)


@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_energy_matches_loop(n, k, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    x = random_assignment(n, k, rng)
    assert energy(g, x) == pytest.approx(loop_energy(g, x), abs=1e-12)
    assert edge_energies(g, x).sum() == pytest.approx(energy(g, x), abs=1e-12)


def test_check_assignment():
    g = make_named_graph("path", 2)
    with pytest.raises(ValueError):
        check_assignment(g, np.ones((2, 2)))
    with pytest.raises(ValueError):
        check_assignment(g, np.ones((3, 1)))
    x = np.array([[1.0, 0.0], [0.0, 1.0]])
    np.testing.assert_array_equal(assignment_from_json(assignment_to_json(x)), x)


@pytest.mark.parametrize("kind,n,value", [("complete", 2, 1.0), ("complete", 3, 2.0), ("cycle", 5, 4.0),
                                          ("path", 3, 2.0), ("complete", 4, 4.0)])
def test_exact_rank1_values(kind, n, value):
    best, x = solve_exact_rank1(make_named_graph(kind, n))
    assert best == value
    assert energy(make_named_graph(kind, n), x) == value


@settings(max_examples=40)
@given(st.integers(1, 9), st.integers(0, 2 ** 32 - 1))
def test_exact_rank1_matches_enumeration(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, 0.6)
    best, x = solve_exact_rank1(g, chunk=7)
    assert best == brute_cut(n, g.edges)
    assert energy(g, x) == pytest.approx(best)


def test_colour_classes_are_independent():
    g = random_graph(np.random.default_rng(0), 12, 0.4)
    classes = colour_classes(g)
    assert sorted(np.concatenate(classes).tolist()) == list(range(12))
    side = np.empty(12, int)
    for c, cls in enumerate(classes):
        side[cls] = c
    assert all(side[u] != side[v] for u, v, _ in g.edges)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_ascent_monotone_and_stationary(n, k, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    x0 = random_assignment(n, k, rng)
    res = ascend(g, k, x0)
    assert res.value >= energy(g, x0) - 1e-12
    assert res.value <= g.total_weight() + 1e-12
    assert res.value == pytest.approx(energy(g, res.x), abs=1e-9)
    if res.converged:
        # a converged point gains (almost) nothing from one more sweep
        assert ascend(g, k, res.x, max_sweeps=1).value - res.value < 1e-8


def test_ascent_sequential_equivalence():
    # one colour-class sweep equals the plain vertex-by-vertex sweep in class order
    rng = np.random.default_rng(3)
    g = random_graph(rng, 9, 0.5)
    x0 = random_assignment(9, 3, rng)
    adj = g.adjacency.toarray()
    y = x0.copy()
    for cls in colour_classes(g):
        for i in cls:
            s = adj[i] @ y
            if np.linalg.norm(s) >= 1e-14:
                y[i] = -s / np.linalg.norm(s)
    np.testing.assert_allclose(ascend(g, 3, x0, max_sweeps=1).x, y, atol=1e-12)


def test_rank3_triangle():
    res = solve_rankk(TRIANGLE, 3, restarts=16, seed=7)
    assert res.value == pytest.approx(2.25, abs=1e-6)


def test_rank2_triangle_and_odd_cycle():
    assert solve_rankk(TRIANGLE, 2, restarts=8, seed=0).value == pytest.approx(2.25, abs=1e-6)
    # C5 with k = 2: vectors at angle 4pi/5 give 5 (1 - cos(4pi/5)) / 2
    c5 = make_named_graph("cycle", 5)
    assert solve_rankk(c5, 2, restarts=16, seed=0).value == pytest.approx(2.5 * (1 - math.cos(0.8 * math.pi)),
                                                                      abs=1e-6)


def test_rank_k_dominates_rank1():
    rng = np.random.default_rng(9)
    for _ in range(10):
        g = random_graph(rng, 7)
        assert solve_rankk(g, 3, restarts=8, seed=1).value >= solve_exact_rank1(g)[0] - 1e-9


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, 2 * math.pi / 3, 2.5, math.pi])
def test_triangle_closed_form_against_sphere_search(theta):
    value, bound = triangle_max(theta)
    assert value == pytest.approx(sphere_triangle_max(theta), abs=1e-7)
    assert value <= bound + 1e-12


def test_triangle_known_points():
    assert triangle_max(0.0)[0] == pytest.approx(2.0)
    assert triangle_max(2 * math.pi / 3) == pytest.approx((2.25, 2.25))
    assert triangle_max(math.pi)[0] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        triangle_max(4.0)


@given(st.floats(0.0, math.pi))
def test_triangle_bound_dominates(theta):
    value, bound = triangle_max(theta)
    assert value <= bound + 1e-12
    assert value <= 2.25


@given(st.floats(0.0, math.pi))
def test_triangle_numeric(theta):
    assert triangle_max_numeric(theta) == pytest.approx(triangle_max(theta)[0], abs=1e-9)


def test_verify_triangle_report():
    rep = verify_triangle(100)
    assert rep.passed
    assert sum(c.id.startswith("triangle-closed-form") for c in rep.claims) == 100


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 9), st.integers(2, 4), st.integers(0, 2 ** 32 - 1))
def test_polished_value_is_an_assignment_energy(n, k, seed):
    g = random_graph(np.random.default_rng(seed), n)
    res = solve_rankk(g, k, restarts=2, seed=seed)
    check_assignment(g, res.x, k)
    assert res.value == pytest.approx(energy(g, res.x), abs=1e-9)
    plain = solve_rankk(g, k, restarts=2, seed=seed, polish=False)
    assert res.value >= plain.value - 1e-7


def test_low_rank_candidates():
    x = random_assignment(6, 3, np.random.default_rng(0))
    cands = list(low_rank_candidates(x))
    assert len(cands) <= 2
    for c in cands:
        assert c.shape == x.shape
        np.testing.assert_allclose(np.linalg.norm(c, axis=1), 1.0)
    assert np.linalg.matrix_rank(cands[0]) == 1
