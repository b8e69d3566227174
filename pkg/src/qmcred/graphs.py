"""Weighted undirected graphs, test-instance generators, certified bipartite
expanders and Laplacian spectral utilities."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

ROLES = ("original", "a", "b", "c")

# above this vertex count spectra come from a sparse Lanczos solve
DENSE_LIMIT = 4096
EIG_RESIDUAL = 1e-10


class InputError(ValueError):
    """Malformed user input; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class NotBipartiteError(ValueError):
    pass


class ExpanderError(RuntimeError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple weighted undirected graph on vertices ``0..n-1``.

    ``labels`` optionally tags each vertex with ``(role, i, alpha)`` where
    role is one of ``original``, ``a``, ``b``, ``c`` (``alpha`` is ``None``
    for original vertices).
    """

    n: int
    edges: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative", "n")
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        seen = set()
        for idx, (u, v, w) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"endpoint out of range in {(u, v)}", f"edges[{idx}]")
            if u == v:
                raise InputError(f"self-loop at vertex {u}", f"edges[{idx}]")
            if not w >= 0 or not np.isfinite(w):
                raise InputError(f"weight must be finite and >= 0, got {w}", f"edges[{idx}]")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge {key}", f"edges[{idx}]")
            seen.add(key)
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = tuple(_check_label(lab, k) for k, lab in enumerate(self.labels))
            if len(labels) != self.n:
                raise InputError("need exactly one label per vertex", "labels")
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_arrays(self):
        """``(u, v, w)`` as numpy arrays."""
        if not self.edges:
            return np.zeros(0, int), np.zeros(0, int), np.zeros(0)
        u, v, w = zip(*self.edges)
        return np.array(u, dtype=np.int64), np.array(v, dtype=np.int64), np.array(w, dtype=float)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        u, v, w = self.edge_arrays
        a = sp.coo_matrix((np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
                          shape=(self.n, self.n))
        return a.tocsr()

    @cached_property
    def degrees(self) -> np.ndarray:
        """Unweighted vertex degrees."""
        u, v, _ = self.edge_arrays
        return np.bincount(np.concatenate([u, v]), minlength=self.n)

    def weighted_degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def total_weight(self) -> float:
        return float(self.edge_arrays[2].sum())

    def laplacian(self, sparse: bool = False):
        lap = sp.diags(self.weighted_degrees()) - self.adjacency
        return lap.tocsr() if sparse else lap.toarray()

    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def to_json(self) -> dict:
        out = {"n": self.n, "edges": [[u, v, w] for u, v, w in self.edges]}
        if self.labels is not None:
            out["labels"] = [list(lab) for lab in self.labels]
        return out

    @classmethod
    def from_json(cls, data) -> "Graph":
        if not isinstance(data, dict):
            raise InputError("graph must be a JSON object", "graph")
        if "n" not in data:
            raise InputError("missing", "n")
        if not isinstance(data["n"], int) or isinstance(data["n"], bool):
            raise InputError("must be an integer", "n")
        raw = data.get("edges")
        if not isinstance(raw, list):
            raise InputError("must be a list of [u, v, w] triples", "edges")
        edges = []
        for k, e in enumerate(raw):
            if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
                raise InputError("expected [u, v] or [u, v, w]", f"edges[{k}]")
            if not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in e):
                raise InputError("entries must be numbers", f"edges[{k}]")
            if any(float(t) != int(t) for t in e[:2]):
                raise InputError("endpoints must be integers", f"edges[{k}]")
            edges.append((int(e[0]), int(e[1]), float(e[2]) if len(e) == 3 else 1.0))
        labels = data.get("labels")
        if labels is not None and not isinstance(labels, list):
            raise InputError("must be a list", "labels")
        return cls(data["n"], tuple(edges), None if labels is None else tuple(labels))


def _check_label(lab, k):
    if not isinstance(lab, (list, tuple)) or len(lab) != 3 or lab[0] not in ROLES:
        raise InputError(f"expected [role, i, alpha] with role in {ROLES}", f"labels[{k}]")
    role, i, alpha = lab
    return (role, int(i), None if alpha is None else int(alpha))


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v [w]`` lines; ``n`` is one more than the largest vertex id."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputError("expected 'u v [w]'", f"line {lineno}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise InputError(f"cannot parse {line!r}", f"line {lineno}") from None
        edges.append((u, v, w))
    n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return Graph(n, tuple(edges))


def load_graph(path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON ({exc.msg} at line {exc.lineno})", str(path)) from None
        if isinstance(data, dict) and "graph" in data and "n" not in data:
            data = data["graph"]
        return Graph.from_json(data)
    return parse_edge_list(text)


def save_graph(g: Graph, path) -> None:
    Path(path).write_text(json.dumps(g.to_json(), indent=1) + "\n")


# ---------------------------------------------------------------------------
# generators

def make_named_graph(kind: str, n: int, p: Optional[float] = None, seed=None) -> Graph:
    """Unweighted ``complete``, ``cycle``, ``path`` or ``erdos_renyi`` graph."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if kind == "complete":
        edges = [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)]
    elif kind == "cycle":
        if n < 3:
            raise ValueError("a cycle needs n >= 3")
        edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    elif kind == "path":
        edges = [(i, i + 1, 1.0) for i in range(n - 1)]
    elif kind == "erdos_renyi":
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {p!r}")
        rng = np.random.default_rng(seed)
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(iu.size) < p
        edges = [(int(i), int(j), 1.0) for i, j in zip(iu[keep], ju[keep])]
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    return Graph(n, tuple(edges))


@dataclass(frozen=True)
class SpectralCertificate:
    lambda_max: float
    gap: float
    connected: bool
    bipartition: tuple  # (A vertex ids, B vertex ids)

    def to_json(self) -> dict:
        return {
            "lambda_max": self.lambda_max,
            "gap": self.gap,
            "connected": self.connected,
            "bipartition": [list(self.bipartition[0]), list(self.bipartition[1])],
        }

    @classmethod
    def from_json(cls, data) -> "SpectralCertificate":
        try:
            a, b = data["bipartition"]
            return cls(float(data["lambda_max"]), float(data["gap"]), bool(data["connected"]),
                       (tuple(int(x) for x in a), tuple(int(x) for x in b)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate ({exc})", "expander_cert") from None


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    ncomp, _ = connected_components(g.adjacency, directed=False)
    return ncomp == 1


def bipartition(g: Graph) -> tuple:
    """Two-colouring by BFS; raises :class:`NotBipartiteError` on an odd cycle."""
    colour = np.full(g.n, -1)
    for root in range(g.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    raise NotBipartiteError(f"odd cycle through edge ({u}, {v})")
    return tuple(np.flatnonzero(colour == 0).tolist()), tuple(np.flatnonzero(colour == 1).tolist())


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """All Laplacian eigenvalues in ascending order (dense solve)."""
    if g.n == 0:
        raise ValueError("empty graph")
    if g.n > DENSE_LIMIT:
        raise ValueError(f"full spectrum limited to {DENSE_LIMIT} vertices; use top_laplacian_eigenvalues")
    return np.linalg.eigvalsh(g.laplacian())


def top_laplacian_eigenvalues(g: Graph, count: int = 2) -> np.ndarray:
    """Largest ``count`` Laplacian eigenvalues, descending.

    Dense for small graphs, Lanczos (ARPACK) above ``DENSE_LIMIT``; in the
    sparse case the eigen-residuals are checked against ``EIG_RESIDUAL``
    relative to the spectral radius bound ``2 * max degree``.
    """
    if g.n <= DENSE_LIMIT:
        return laplacian_spectrum(g)[::-1][:count].copy()
    lap = g.laplacian(sparse=True)
    rng = np.random.default_rng(0)
    vals, vecs = eigsh(lap, k=count, which="LA", tol=1e-13, v0=rng.standard_normal(g.n), maxiter=20 * g.n)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    scale = max(1.0, 2 * float(g.weighted_degrees().max()))
    res = np.linalg.norm(lap @ vecs - vecs * vals, axis=0)
    if np.any(res > EIG_RESIDUAL * scale * 10):
        raise ExpanderError(f"Lanczos residual too large: {res.max():.3g}")
    return vals


def check_bipartite_symmetry(g: Graph, parts: Optional[tuple] = None, tol: float = 1e-9) -> bool:
    """True iff the adjacency spectrum is symmetric about zero."""
    if parts is None:
        parts = bipartition(g)
    else:
        side = np.full(g.n, -1)
        side[list(parts[0])] = 0
        side[list(parts[1])] = 1
        u, v, _ = g.edge_arrays
        if np.any(side < 0) or np.any(side[u] == side[v]):
            raise NotBipartiteError("given vertex split is not a bipartition of the graph")
    ev = np.linalg.eigvalsh(g.adjacency.toarray())
    return bool(np.allclose(ev, -ev[::-1], atol=tol))


def certify(g: Graph, parts: Optional[tuple] = None) -> SpectralCertificate:
    if parts is None:
        parts = bipartition(g)
    top = top_laplacian_eigenvalues(g, 2)
    gap = float(top[0] - top[1]) if top.size > 1 else 0.0
    return SpectralCertificate(float(top[0]), max(gap, 0.0), is_connected(g), parts)


def make_bipartite_expander(half_size: int, d: int, gap_target: float, seed=None,
                            max_attempts: int = 50, matching_tries: int = 2000):
    """Random ``d``-regular bipartite graph with a certified Laplacian gap.

    Vertices ``0..half_size-1`` form side A and ``half_size..2*half_size-1``
    side B. The graph is a union of ``d`` uniformly random perfect matchings;
    a matching that repeats an existing edge is resampled whole. Attempts
    that come out disconnected or with gap below ``gap_target`` are thrown
    away and rebuilt from the same generator.

    Returns ``(graph, SpectralCertificate)``.
    """
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if half_size < d:
        raise ValueError(f"half_size ({half_size}) < d ({d})")
    if not gap_target > 0:
        raise ValueError("gap_target must be positive")
    rng = np.random.default_rng(seed)
    parts = (tuple(range(half_size)), tuple(range(half_size, 2 * half_size)))
    best_gap = None
    for _ in range(max_attempts):
        partner = _random_matchings(half_size, d, rng, matching_tries)
        if partner is None:
            continue
        edges = sorted((a, half_size + int(b), 1.0) for a in range(half_size) for b in partner[a])
        g = Graph(2 * half_size, tuple(edges))
        if not is_connected(g):
            continue
        cert = certify(g, parts)
        best_gap = cert.gap if best_gap is None else max(best_gap, cert.gap)
        if cert.gap >= gap_target:
            if abs(cert.lambda_max - 2 * d) > 1e-8:
                raise ExpanderError(f"lambda_max {cert.lambda_max} != 2d for a connected bipartite regular graph")
            return g, cert
    raise ExpanderError(
        f"no connected {d}-regular bipartite graph on 2x{half_size} vertices with gap >= {gap_target} "
        f"after {max_attempts} attempts (best gap {best_gap})")


def _random_matchings(h, d, rng, tries):
    rows = np.arange(h)
    used = np.zeros(0, dtype=np.int64)  # sorted codes a * h + b
    for _ in range(d):
        for _ in range(tries):
            codes = rows * h + rng.permutation(h)
            if used.size == 0 or not np.isin(codes, used, assume_unique=True).any():
                break
        else:
            return None
        used = np.union1d(used, codes)
    return _split_rows(used, h)


def _split_rows(codes, h):
    a, b = np.divmod(codes, h)
    bounds = np.searchsorted(a, np.arange(h + 1))
    return [b[bounds[i]:bounds[i + 1]].tolist() for i in range(h)]


def relabel_edges(edges: Iterable, mapping: Sequence[int]):
    return [(mapping[u], mapping[v], w) for u, v, w in edges]
