"""Local qubit Hamiltonians in Pauli coefficient form, exact maximum
eigenvalues, and product-state (Bloch vector) optimisation.

A term acting on qubits ``support = (i_1, ..., i_k)`` stores a real
``4 x ... x 4`` coefficient tensor ``M`` with

    h = sum_a M[a_1, ..., a_k] sigma^(a_1)_{i_1} ... sigma^(a_k)_{i_k}

where ``sigma^(0) = I, sigma^(1) = X, sigma^(2) = Y, sigma^(3) = Z``.
Qubit 0 is the most significant tensor factor of dense matrices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .graphs import Graph, InputError

PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

MAX_QUBITS = 12
MAX_DIM = 1 << MAX_QUBITS
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass
class Term:
    support: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        self.support = tuple(int(i) for i in self.support)
        self.coeffs = np.asarray(self.coeffs)
        if np.iscomplexobj(self.coeffs):
            if np.abs(self.coeffs.imag).max(initial=0.0) > HERMITIAN_TOL:
                raise ValueError("Pauli coefficients of a Hermitian term must be real")
            self.coeffs = self.coeffs.real
        self.coeffs = self.coeffs.astype(float)
        k = len(self.support)
        if len(set(self.support)) != k:
            raise ValueError(f"repeated qubit in support {self.support}")
        if self.coeffs.shape != (4,) * k:
            raise ValueError(f"coefficient tensor must have shape {(4,) * k}, got {self.coeffs.shape}")

    @property
    def k(self) -> int:
        return len(self.support)

    def nonzero(self):
        for idx in zip(*np.nonzero(self.coeffs)):
            yield tuple(int(a) for a in idx), float(self.coeffs[idx])


@dataclass
class LocalHamiltonian:
    n: int
    terms: list = field(default_factory=list)
    psd_terms: bool = False

    def __post_init__(self):
        for t in self.terms:
            if any(not 0 <= i < self.n for i in t.support):
                raise ValueError(f"support {t.support} out of range for {self.n} qubits")

    @property
    def locality(self) -> int:
        return max((t.k for t in self.terms), default=0)

    def scaled(self, factor: float) -> "LocalHamiltonian":
        return LocalHamiltonian(self.n, [Term(t.support, factor * t.coeffs) for t in self.terms], self.psd_terms)

    def check_psd_terms(self, tol: float = PSD_TOL) -> bool:
        """Every term is positive semidefinite (dense check on its support)."""
        return all(np.linalg.eigvalsh(term_matrix(t))[0] >= -tol for t in self.terms)

    def to_json(self) -> dict:
        terms = []
        for t in self.terms:
            coeffs = {"".join(map(str, idx)): val for idx, val in t.nonzero()}
            terms.append({"support": list(t.support), "coeffs": coeffs})
        return {"n": self.n, "terms": terms, "psd_terms": self.psd_terms}

    @classmethod
    def from_json(cls, data) -> "LocalHamiltonian":
        if not isinstance(data, dict):
            raise InputError("Hamiltonian must be a JSON object", "hamiltonian")
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise InputError("must be a non-negative integer", "n")
        raw = data.get("terms")
        if not isinstance(raw, list):
            raise InputError("must be a list", "terms")
        terms = []
        for j, item in enumerate(raw):
            where = f"terms[{j}]"
            if not isinstance(item, dict) or "support" not in item or "coeffs" not in item:
                raise InputError("expected {'support': [...], 'coeffs': {...}}", where)
            support = item["support"]
            if not isinstance(support, list) or not all(isinstance(i, int) for i in support):
                raise InputError("must be a list of qubit indices", where + ".support")
            k = len(support)
            m = np.zeros((4,) * k)
            if not isinstance(item["coeffs"], dict):
                raise InputError("must map Pauli label strings to numbers", where + ".coeffs")
            for label, val in item["coeffs"].items():
                if len(label) != k or any(ch not in "0123" for ch in label):
                    raise InputError(f"bad Pauli label {label!r}", f"{where}.coeffs")
                if not isinstance(val, (int, float)) or isinstance(val, bool):
                    raise InputError(f"coefficient for {label!r} must be a real number", f"{where}.coeffs")
                m[tuple(int(ch) for ch in label)] = val
            try:
                terms.append(Term(tuple(support), m))
            except ValueError as exc:
                raise InputError(str(exc), where) from None
        try:
            h = cls(n, terms, bool(data.get("psd_terms", False)))
        except ValueError as exc:
            raise InputError(str(exc), "terms") from None
        return h

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "LocalHamiltonian":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON ({exc.msg})", str(path)) from None
        return cls.from_json(data)


def _edge_hamiltonian(g: Graph, diag) -> LocalHamiltonian:
    terms = []
    for u, v, w in g.edges:
        m = np.zeros((4, 4))
        m[0, 0] = w / 4
        for a, on in zip((1, 2, 3), diag):
            if on:
                m[a, a] = -w / 4
        terms.append(Term((u, v), m))
    return LocalHamiltonian(g.n, terms, psd_terms=True)


def qmc_hamiltonian(g: Graph) -> LocalHamiltonian:
    """``sum_ij w_ij (I - XX - YY - ZZ) / 4``; each term is w times the singlet projector."""
    return _edge_hamiltonian(g, (True, True, True))


def xy_hamiltonian(g: Graph) -> LocalHamiltonian:
    """``sum_ij w_ij (I - XX - YY) / 4``."""
    return _edge_hamiltonian(g, (True, True, False))


# ---------------------------------------------------------------------------
# dense matrices

def term_matrix(t: Term) -> np.ndarray:
    """Dense matrix of a term on its own ``k`` qubits."""
    out = np.zeros((1 << t.k, 1 << t.k), dtype=complex)
    for idx, val in t.nonzero():
        op = np.ones((1, 1), dtype=complex)
        for a in idx:
            op = np.kron(op, PAULI[a])
        out += val * op
    return out


def pauli_string_sparse(n: int, support, labels) -> sp.csr_matrix:
    """Sparse ``2^n`` matrix of a Pauli string, built as a signed permutation.

    ``P|r> = i^{#Y} (-1)^{|r & (zmask|ymask)|} |r ^ (xmask|ymask)>``.
    """
    flip = phase_mask = 0
    ny = 0
    for q, a in zip(support, labels):
        bit = 1 << (n - 1 - q)
        if a in (1, 2):
            flip |= bit
        if a in (2, 3):
            phase_mask |= bit
        ny += a == 2
    r = np.arange(1 << n, dtype=np.int64)
    parity = np.zeros(r.size, dtype=np.int64)
    masked = r & phase_mask
    while np.any(masked):
        parity ^= masked & 1
        masked >>= 1
    vals = (1j ** ny) * (1 - 2 * parity)
    return sp.csr_matrix((vals.astype(complex), (r ^ flip, r)), shape=(1 << n, 1 << n))


def to_sparse(h: LocalHamiltonian) -> sp.csr_matrix:
    if h.n > MAX_QUBITS:
        raise ValueError(f"dense/sparse assembly limited to {MAX_QUBITS} qubits, got {h.n}")
    dim = 1 << h.n
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for t in h.terms:
        for idx, val in t.nonzero():
            out = out + val * pauli_string_sparse(h.n, t.support, idx)
    return out


def to_dense(h: LocalHamiltonian) -> np.ndarray:
    """Exact ``2^n x 2^n`` complex matrix (n <= 12), checked Hermitian."""
    mat = to_sparse(h).toarray()
    check_hermitian(mat)
    return mat


def check_hermitian(mat, tol: float = HERMITIAN_TOL) -> None:
    if mat.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {mat.shape[0]} exceeds {MAX_DIM}")
    err = np.abs(mat - mat.conj().T).max(initial=0.0)
    if err > tol * max(1.0, np.abs(mat).max(initial=0.0)):
        raise ValueError(f"matrix is not Hermitian (deviation {err:.3g})")


def max_eigenvalue(mat) -> float:
    """Largest eigenvalue of a dense Hermitian matrix."""
    mat = np.asarray(mat)
    dim = mat.shape[0]
    if dim > MAX_DIM:
        raise ValueError(f"dimension {dim} exceeds {MAX_DIM}")
    if dim <= 64:
        return float(np.linalg.eigvalsh(mat)[-1])
    return float(sla.eigh(mat, eigvals_only=True, subset_by_index=[dim - 1, dim - 1])[0])


def opt(h: LocalHamiltonian) -> float:
    """``OPT(H)``: maximum of ``Tr(H rho)`` over all states, i.e. ``lambda_max(H)``."""
    if not h.terms:
        return 0.0
    return max_eigenvalue(to_dense(h))


# ---------------------------------------------------------------------------
# product states

def _hat(x: np.ndarray) -> np.ndarray:
    """Bloch vectors with the identity coordinate prepended: ``(1, x1, x2, x3)``."""
    return np.hstack([np.ones((x.shape[0], 1)), x])


def product_energy(h: LocalHamiltonian, bloch) -> float:
    """``Tr(H rho_1 x ... x rho_n)`` with ``rho_i = (I + x_i . sigma) / 2``."""
    xh = _hat(np.asarray(bloch, dtype=float))
    total = 0.0
    for t in h.terms:
        val = t.coeffs
        for q in t.support:
            val = np.tensordot(val, xh[q], axes=([0], [0]))
        total += float(val)
    return total


def product_value_and_gradient(h: LocalHamiltonian, bloch, form=None):
    """Product energy and its gradient in the Bloch vectors (``form`` is a
    precomputed :func:`_pair_form`)."""
    bloch = np.asarray(bloch, dtype=float)
    if h.locality <= 2:
        w, b, const, _ = form if form is not None else _pair_form(h)
        xh = _hat(bloch)
        flat = xh.ravel()
        field_ = (w @ flat).reshape(-1, 4) + b
        return float(0.5 * flat @ w @ flat + np.sum(b * xh) + const), field_[:, 1:]
    incidence = _incidence(h)
    xh = _hat(bloch)
    grad = np.array([_effective_field(h, incidence, xh, q) for q in range(h.n)]).reshape(h.n, 3)
    return product_energy(h, bloch), grad


def _incidence(h: LocalHamiltonian) -> list:
    incidence = [[] for _ in range(h.n)]
    for j, t in enumerate(h.terms):
        for leg, q in enumerate(t.support):
            incidence[q].append((j, leg))
    return incidence


def _effective_field(h: LocalHamiltonian, incidence, xh, q) -> np.ndarray:
    """Gradient of the product energy in the Bloch vector of qubit ``q``
    (the energy is affine in each single Bloch vector)."""
    f = np.zeros(4)
    for j, leg in incidence[q]:
        t = h.terms[j]
        val = np.moveaxis(t.coeffs, leg, 0)
        others = [p for l, p in enumerate(t.support) if l != leg]
        for p in others:
            val = np.tensordot(val, xh[p], axes=([1], [0]))
        f += val
    return f[1:]


@dataclass
class ProductResult:
    value: float
    bloch: np.ndarray
    converged: bool
    sweeps: int

    def to_json(self) -> dict:
        return {"value": self.value, "bloch": self.bloch.tolist(), "converged": self.converged,
                "sweeps": self.sweeps}


def _pair_form(h: LocalHamiltonian):
    """``(W, b, classes)`` with ``E = x^T W x / 2 + b . x`` over the stacked
    ``(1, x_i)`` vectors of a Hamiltonian with at most 2-local terms, plus
    qubit classes that share no term."""
    import networkx as nx

    n = h.n
    w = np.zeros((n, 4, n, 4))
    b = np.zeros((n, 4))
    const = 0.0
    coupling = nx.Graph()
    coupling.add_nodes_from(range(n))
    for t in h.terms:
        if t.k == 0:
            const += float(t.coeffs)
        elif t.k == 1:
            b[t.support[0]] += t.coeffs
        else:
            i, j = t.support
            w[i, :, j, :] += t.coeffs
            w[j, :, i, :] += t.coeffs.T
            coupling.add_edge(i, j)
    colouring = nx.greedy_color(coupling, strategy="largest_first")
    groups = {}
    for q, c in colouring.items():
        groups.setdefault(c, []).append(q)
    classes = [np.array(sorted(groups[c])) for c in sorted(groups)]
    return w.reshape(4 * n, 4 * n), b, const, classes


def product_ascent(h: LocalHamiltonian, x0, tol: float = 1e-12, max_sweeps: int = 10000,
                   form=None) -> ProductResult:
    """Coordinate ascent over pure product states: each qubit is set to the
    unit vector along its effective field (kept when the field vanishes).

    Qubits that share no term are updated together, which is the same as
    updating them one by one.
    """
    x = np.array(x0, dtype=float)
    value = product_energy(h, x)
    if h.locality <= 2:
        w, b, const, classes = form if form is not None else _pair_form(h)
        xh = _hat(x)
        flat = xh.reshape(-1)
        blocks = [(cls, w[(4 * cls[:, None] + np.arange(4)).ravel()]) for cls in classes]

        def pair_energy():
            return float(0.5 * flat @ w @ flat + np.sum(b * xh) + const)

        for sweep in range(1, max_sweeps + 1):
            start = value
            for cls, rows in blocks:
                f = (rows @ flat).reshape(-1, 4)[:, 1:] + b[cls, 1:]
                nf = np.sqrt(np.einsum("ij,ij->i", f, f))
                move = nf >= 1e-14
                xh[cls[move], 1:] = f[move] / nf[move, None]
            value = pair_energy()
            if value < start - 1e-10 * max(1.0, abs(start)):
                raise AssertionError("product ascent decreased the energy")
            if value - start < tol:
                x = xh[:, 1:].copy()
                return ProductResult(product_energy(h, x), x, True, sweep)
        x = xh[:, 1:].copy()
        return ProductResult(product_energy(h, x), x, False, max_sweeps)

    incidence = _incidence(h)
    for sweep in range(1, max_sweeps + 1):
        start = value
        for q in range(h.n):
            f = _effective_field(h, incidence, _hat(x), q)
            nf = np.linalg.norm(f)
            if nf < 1e-14:
                continue
            x[q] = f / nf
        value = product_energy(h, x)
        if value < start - 1e-10 * max(1.0, abs(start)):
            raise AssertionError("product ascent decreased the energy")
        if value - start < tol:
            return ProductResult(value, x, True, sweep)
    return ProductResult(value, x, False, max_sweeps)


def opt_prod(h: LocalHamiltonian, restarts: int = 16, seed=None, tol: float = 1e-12,
             max_sweeps: int = 10000, polish: bool = True) -> ProductResult:
    """Best product-state energy over ``restarts`` random pure starts.

    With ``polish`` every coarse local maximum is refined by
    :func:`qmcred.rankcut.polish_on_spheres`.
    Ascent only certifies a lower bound on the product optimum.
    """
    from .rankcut import COARSE_TOL, POLISH_SWEEPS, polish_on_spheres

    rng = np.random.default_rng(seed)
    form = _pair_form(h) if h.locality <= 2 else None
    best = None
    for _ in range(max(1, restarts)):
        x0 = rng.standard_normal((h.n, 3))
        x0 /= np.linalg.norm(x0, axis=1, keepdims=True)
        if polish:
            res = product_ascent(h, x0, max(tol, COARSE_TOL), max_sweeps, form)
            res = polish_on_spheres(res, lambda x: product_ascent(h, x, tol, POLISH_SWEEPS, form),
                                    lambda x: product_value_and_gradient(h, x, form))
        else:
            res = product_ascent(h, x0, tol, max_sweeps, form)
        if best is None or res.value > best.value:
            best = res
    if not h.terms:
        best.value = 0.0
    return best


def bloch_states(bloch) -> list:
    """Single-qubit density matrices ``(I + x . sigma) / 2``."""
    return [0.5 * (PAULI[0] + np.tensordot(x, PAULI[1:], axes=1)) for x in np.asarray(bloch, dtype=float)]


def random_local_hamiltonian(n: int, k: int, n_terms: int, rng, psd: bool = False) -> LocalHamiltonian:
    """Random real-coefficient k-local Hamiltonian; with ``psd`` every term is
    shifted by its smallest eigenvalue."""
    terms = []
    for _ in range(n_terms):
        support = tuple(rng.choice(n, size=k, replace=False).tolist())
        m = rng.standard_normal((4,) * k)
        if psd:
            lo = np.linalg.eigvalsh(term_matrix(Term(support, m)))[0]
            m[(0,) * k] -= min(lo, 0.0)
        terms.append(Term(support, m))
    return LocalHamiltonian(n, terms, psd_terms=psd)


def all_pauli_labels(k: int):
    return itertools.product(range(4), repeat=k)
