"""Rank-k constrained Max-Cut: the energy ``F_k``, exact and local solvers,
and the closed form for the triangle gadget.

An assignment is an ``(n, k)`` float array whose rows are unit vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .graphs import Graph, InputError

NORM_TOL = 1e-12
FIELD_EPS = 1e-14
MAX_EXACT_N = 26
# first-stage tolerance before low-rank polishing
COARSE_TOL = 1e-7
POLISH_SWEEPS = 200


def check_assignment(g: Graph, x, k=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != g.n:
        raise ValueError(f"assignment must have shape ({g.n}, k), got {x.shape}")
    if k is not None and x.shape[1] != k:
        raise ValueError(f"expected rank {k}, got vectors of length {x.shape[1]}")
    norms = np.linalg.norm(x, axis=1)
    if np.any(np.abs(norms - 1) > NORM_TOL):
        raise ValueError(f"assignment vectors must be unit length (worst norm {norms[np.argmax(np.abs(norms - 1))]!r})")
    return x


def normalize_rows(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_assignment(n: int, k: int, rng) -> np.ndarray:
    """Uniform on the sphere (normalised Gaussians); random signs for k = 1."""
    if k == 1:
        return rng.choice([-1.0, 1.0], size=(n, 1))
    return normalize_rows(rng.standard_normal((n, k)))


def assignment_to_json(x) -> dict:
    x = np.asarray(x, dtype=float)
    return {"k": int(x.shape[1]), "vectors": x.tolist()}


def assignment_from_json(data) -> np.ndarray:
    try:
        k = int(data["k"])
        x = np.array(data["vectors"], dtype=float).reshape(-1, k)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed assignment ({exc})", "vectors") from None
    return x


def energy(g: Graph, x) -> float:
    """``sum_ij w_ij (1 - x_i . x_j) / 2``."""
    x = check_assignment(g, x)
    u, v, w = g.edge_arrays
    return float(0.5 * np.sum(w * (1.0 - np.einsum("ij,ij->i", x[u], x[v]))))


def edge_energies(g: Graph, x) -> np.ndarray:
    u, v, w = g.edge_arrays
    x = np.asarray(x, dtype=float)
    return 0.5 * w * (1.0 - np.einsum("ij,ij->i", x[u], x[v]))


# ---------------------------------------------------------------------------
# exact rank-1 solver

def solve_exact_rank1(g: Graph, chunk: int = 1 << 18):
    """Classical Max-Cut by enumerating all cuts with vertex 0 fixed to +1.

    Returns ``(value, x)`` with ``x`` an ``(n, 1)`` array of signs.
    """
    if g.n > MAX_EXACT_N:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXACT_N}, got {g.n}")
    if g.n == 0:
        return 0.0, np.zeros((0, 1))
    u, v, w = g.edge_arrays
    total = 1 << (g.n - 1)
    best_val, best_code = -1.0, 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64) << 1  # bit 0 is vertex 0
        bits = (codes[:, None] >> np.arange(g.n)) & 1
        cut = ((bits[:, u] ^ bits[:, v]) * w).sum(axis=1) if u.size else np.zeros(codes.size)
        j = int(np.argmax(cut))
        if cut[j] > best_val:
            best_val, best_code = float(cut[j]), int(codes[j])
    signs = 1.0 - 2.0 * ((best_code >> np.arange(g.n)) & 1)
    return best_val, signs.reshape(-1, 1)


# ---------------------------------------------------------------------------
# block-coordinate ascent

@dataclass
class AscentResult:
    value: float
    x: np.ndarray
    converged: bool
    sweeps: int

    def to_json(self) -> dict:
        return {"value": self.value, "assignment": assignment_to_json(self.x),
                "converged": self.converged, "sweeps": self.sweeps}


def colour_classes(g: Graph) -> list:
    """Independent vertex sets covering ``V``.

    Vertices in one class share no edge, so updating a whole class at once
    is the same as updating its members one after another.
    """
    cached = g.__dict__.get("_colour_classes")
    if cached is not None:
        return cached
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    u, v, _ = g.edge_arrays
    nxg.add_edges_from(zip(u.tolist(), v.tolist()))
    colouring = nx.greedy_color(nxg, strategy="largest_first")
    classes = {}
    for vertex, c in colouring.items():
        classes.setdefault(c, []).append(vertex)
    out = [np.array(sorted(classes[c]), dtype=np.int64) for c in sorted(classes)]
    g.__dict__["_colour_classes"] = out
    return out


def _class_blocks(g: Graph) -> list:
    cached = g.__dict__.get("_class_blocks")
    if cached is None:
        cached = [(cls, g.adjacency[cls]) for cls in colour_classes(g)]
        g.__dict__["_class_blocks"] = cached
    return cached


def ascend(g: Graph, k: int, x0, tol: float = 1e-10, max_sweeps=None, check: bool = True) -> AscentResult:
    """Local maximiser of ``F_k`` by exact per-vertex updates.

    Each vertex is moved to ``-s/|s|`` with ``s = sum_j w_ij x_j``, the
    unique best unit vector given its neighbours; it is left in place when
    ``|s| < 1e-14``. For ``k = 1`` this is the sign update ``-sign(s)``.
    Sweeps stop once a full sweep gains less than ``tol``; otherwise the
    best assignment after ``max_sweeps`` (default ``10 n k``) is returned
    with ``converged=False``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = check_assignment(g, x0, k).copy()
    if max_sweeps is None:
        max_sweeps = max(1, 10 * g.n * k)
    blocks = _class_blocks(g)
    value = energy(g, x)
    for sweep in range(1, max_sweeps + 1):
        start = value
        for cls, rows in blocks:
            s = rows @ x
            norms = np.linalg.norm(s, axis=1)
            move = norms >= FIELD_EPS
            if not move.any():
                continue
            idx, s, norms = cls[move], s[move], norms[move]
            # per-vertex energy change is (|s| + x_old . s) / 2 >= 0
            gains = 0.5 * (norms + np.einsum("ij,ij->i", x[idx], s))
            if check and gains.min() < -1e-12:
                raise AssertionError(f"ascent step decreased the energy by {-gains.min():.3g}")
            x[idx] = -s / norms[:, None]
            value += float(gains.sum())
        value = energy(g, x)
        if check and value < start - 1e-12 * max(1.0, abs(start)):
            raise AssertionError("ascent sweep decreased the energy")
        if value - start < tol:
            return AscentResult(value, x, True, sweep)
    return AscentResult(value, x, False, max_sweeps)


def low_rank_candidates(x, min_norm: float = 1e-6):
    """Rows of ``x`` projected onto its top-``r`` principal subspace and
    renormalised, for ``r = 1 .. k-1`` (same ``(n, k)`` shape).

    Near a low-rank optimum, ascent in full rank converges slowly along the
    flat directions; restarting from the projection removes them. Projections
    that shrink some row below ``min_norm`` are skipped.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[1] < 2:
        return
    _, _, vt = np.linalg.svd(x, full_matrices=False)
    for r in range(1, x.shape[1]):
        p = x @ vt[:r].T @ vt[:r]
        norms = np.linalg.norm(p, axis=1)
        if norms.min() < min_norm:
            continue
        yield p / norms[:, None]


def solve_rankk(g: Graph, k: int, restarts: int = 8, seed=None, tol: float = 1e-10, max_sweeps=None,
                polish: bool = True) -> AscentResult:
    """Best of ``restarts`` ascents from uniformly random starts.

    With ``polish`` each coarse local maximum goes through
    :func:`polish_on_spheres`; the value reported is always the energy of
    the returned assignment.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        x0 = random_assignment(g.n, k, rng)
        if polish:
            res = ascend(g, k, x0, tol=max(tol, COARSE_TOL), max_sweeps=max_sweeps)
            res = polish_on_spheres(res, lambda x: ascend(g, k, x, tol=tol, max_sweeps=POLISH_SWEEPS),
                                    lambda x: cut_value_and_gradient(g, x))
        else:
            res = ascend(g, k, x0, tol=tol, max_sweeps=max_sweeps)
        if best is None or res.value > best.value:
            best = res
    return best


def cut_value_and_gradient(g: Graph, x):
    """``F_k(x)`` and its Euclidean gradient ``-A x / 2``."""
    return energy(g, x), -0.5 * (g.adjacency @ x)


def sphere_lbfgs(x, value_and_gradient, maxiter: int = 5000) -> np.ndarray:
    """Maximise a function of unit rows with L-BFGS over ``x = v / |v|``."""
    x = normalize_rows(x)
    shape = x.shape

    def neg(v):
        y = v.reshape(shape)
        norms = np.linalg.norm(y, axis=1, keepdims=True)
        u = y / norms
        val, grad = value_and_gradient(u)
        grad = (grad - u * np.sum(grad * u, axis=1, keepdims=True)) / norms
        return -val, -grad.ravel()

    res = minimize(neg, x.ravel(), jac=True, method="L-BFGS-B",
                   options={"maxiter": maxiter, "ftol": 1e-16, "gtol": 1e-13})
    return normalize_rows(res.x.reshape(shape))


def polish_on_spheres(res, run, value_and_gradient):
    """Refine a coarse local maximum.

    The point itself and its low-rank projections are each improved by
    :func:`sphere_lbfgs` and then ``run`` (a short exact ascent, which
    never lowers the value). The best result is returned, and never one
    worse than ``res``.
    """
    x = getattr(res, "x", None)
    x = res.bloch if x is None else x
    best = res
    for cand in [x, *low_rank_candidates(x)]:
        out = run(sphere_lbfgs(cand, value_and_gradient))
        if out.value > best.value:
            best = out
    return best


# ---------------------------------------------------------------------------
# triangle gadget

def triangle_max(theta: float):
    """Best triangle energy when two vertices sit at angle ``theta``.

    Returns ``(value, quadratic_bound)`` where value is
    ``9/4 - (2 cos(theta/2) - 1)^2 / 4`` and the bound is
    ``9/4 - 9 (theta - 2 pi/3)^2 / (16 pi^2)``.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    value = 2.25 - 0.25 * (2.0 * math.cos(theta / 2.0) - 1.0) ** 2
    bound = 2.25 - 9.0 / (16.0 * math.pi ** 2) * (theta - 2.0 * math.pi / 3.0) ** 2
    return value, bound


TRIANGLE = Graph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


def triangle_max_numeric(theta: float, grid: int = 720) -> float:
    """Maximise the triangle energy over the free vertex numerically.

    The free vector is searched on the great circle through the two fixed
    vectors (grid scan, then bounded scalar refinement).
    """
    x0 = np.array([1.0, 0.0, 0.0])
    x1 = np.array([math.cos(theta), math.sin(theta), 0.0])

    def neg(phi):
        x = np.stack([x0, x1, [math.cos(phi), math.sin(phi), 0.0]])
        return -energy(TRIANGLE, x)

    phis = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    # grid energies in closed vector form: the fixed edge plus the two free edges
    vals = -(0.5 * (1 - x0 @ x1) + 0.5 * (1 - np.cos(phis)) + 0.5 * (1 - np.cos(phis - theta)))
    j = int(np.argmin(vals))
    step = 2 * math.pi / grid
    res = minimize_scalar(neg, bounds=(phis[j] - step, phis[j] + step), method="bounded",
                          options={"xatol": 1e-12})
    return max(-res.fun, -vals[j])


def verify_triangle(samples: int = 100, tol: float = 1e-6, bound_tol: float = 1e-9):
    """Closed form against numerical maximisation at ``samples`` angles in [0, pi).

    One claim per angle, plus one claim that the quadratic upper bound holds
    at every sampled angle (largest violation <= 0).
    """
    from .report import Report

    if samples < 1:
        raise ValueError("samples must be >= 1")
    rep = Report("verify-triangle")
    worst = -math.inf
    for j in range(samples):
        theta = math.pi * j / samples
        value, bound = triangle_max(theta)
        worst = max(worst, value - bound)
        rep.add(f"triangle-closed-form[{j}]", f"max over free vertex at theta={theta!r}",
                triangle_max_numeric(theta), value, "=", tol, "exact", "triangle-gadget")
    rep.add("triangle-bound", "max over samples of closed form - quadratic bound <= 0",
            worst, 0.0, "<=", bound_tol, "exact", "triangle-gadget")
    rep.meta["samples"] = samples
    return rep.finish()
