"""Spin-J representations of su(2) normalised so spin-1/2 gives the Pauli
matrices, the decomposition of ``T`` qubits into spin blocks, and the spin
variants ``H(J)`` and ``H~(J)`` of a local qubit Hamiltonian.

Spins are handled as doubled integers ``two_j = 2J`` throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
import scipy.sparse as sp

from .quantum import (MAX_DIM, LocalHamiltonian, Term, check_hermitian, max_eigenvalue, opt, opt_prod,
                      pauli_string_sparse)
from .report import Report


def two_j_of(J) -> int:
    """Doubled spin from a half-integer given as int, float, Fraction or string."""
    if isinstance(J, float):
        two = round(2 * J)
        ok = abs(2 * J - two) < 1e-12
    else:
        doubled = 2 * Fraction(J)
        two, ok = int(doubled), doubled.denominator == 1
    if not ok or two < 0:
        raise ValueError(f"J must be a non-negative half-integer, got {J!r}")
    return int(two)


def format_spin(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


@dataclass(frozen=True)
class SpinRep:
    two_j: int
    matrices: np.ndarray  # shape (4, 2J+1, 2J+1): images of I, X, Y, Z

    @property
    def J(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def commutator_residual(self) -> float:
        """Largest deviation from ``[R(X), R(Y)] = 2i R(Z)`` and its cyclic versions."""
        _, x, y, z = self.matrices
        res = 0.0
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            res = max(res, float(np.abs(a @ b - b @ a - 2j * c).max()))
        return res


@lru_cache(maxsize=None)
def _spin_matrices(two_j: int) -> SpinRep:
    d = two_j + 1
    m = (two_j - 2 * np.arange(d)) / 2.0  # J, J-1, ..., -J
    jz = np.diag(m).astype(complex)
    jp = np.zeros((d, d), dtype=complex)
    J = two_j / 2.0
    for r in range(1, d):  # <m+1| J+ |m>
        jp[r - 1, r] = np.sqrt(J * (J + 1) - m[r] * (m[r] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    mats = np.stack([np.eye(d, dtype=complex), 2 * jx, 2 * jy, 2 * jz])
    mats.setflags(write=False)
    return SpinRep(two_j, mats)


def spin_matrices(J) -> SpinRep:
    """``R_J(sigma^(a))`` for a = 0..3 from the ladder operators, ``R_J = 2 S_J``.

    ``J = 0`` gives the one-dimensional representation with
    ``R_0(X) = R_0(Y) = R_0(Z) = 0``.
    """
    return _spin_matrices(two_j_of(J))


def spin_values(T: int) -> list:
    """Doubled spins ``T, T-2, ...`` down to 0 or 1."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return list(range(T, -1, -2))


def multiplicities(T: int) -> dict:
    """``two_j -> g_J``: copies of spin J inside ``T`` qubits,
    ``C(T, T/2 - J) - C(T, T/2 - J - 1)``."""
    out = {}
    for tj in spin_values(T):
        low = (T - tj) // 2
        out[tj] = comb(T, low) - (comb(T, low - 1) if low >= 1 else 0)
    return out


def collective_operator(T: int, a: int) -> np.ndarray:
    """``sum_t sigma^(a)_t`` on ``T`` qubits (dense)."""
    dim = 1 << T
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for t in range(T):
        out = out + pauli_string_sparse(T, (t,), (a,))
    return out.toarray()


def block_spectrum(T: int, a: int) -> np.ndarray:
    """Sorted spectrum of ``(+)_J R_J(sigma^(a)) x I_{g_J}``."""
    vals = []
    for tj, g in multiplicities(T).items():
        ev = np.linalg.eigvalsh(_spin_matrices(tj).matrices[a])
        vals.extend(np.repeat(ev, g))
    return np.sort(np.array(vals))


def verify_block_decomposition(T: int, tol: float = 1e-10) -> Report:
    """Spectral check that ``T`` qubits split into spin blocks with multiplicities ``g_J``."""
    if not 1 <= T <= 8:
        raise ValueError(f"block verification supports 1 <= T <= 8, got {T}")
    rep = Report("verify-blocks")
    rep.meta["T"] = T
    rep.meta["multiplicities"] = {format_spin(tj): g for tj, g in multiplicities(T).items()}
    dims = sum((tj + 1) * g for tj, g in multiplicities(T).items())
    rep.add("block-dimension", "sum_J (2J+1) g_J = 2^T", dims, 1 << T, "=", 0.0, "exact", "spin-block-decomposition")
    for a, name in ((1, "X"), (2, "Y"), (3, "Z")):
        direct = np.linalg.eigvalsh(collective_operator(T, a))
        blocks = block_spectrum(T, a)
        rep.add(f"block-spectrum-{name}", f"spectrum of sum_t {name}_t equals the block spectrum (max deviation)",
                float(np.abs(direct - blocks).max()), 0.0, "<=", tol, "exact", "spin-block-decomposition")
    return rep.finish()


# ---------------------------------------------------------------------------
# spin variants of a qubit Hamiltonian

def _check_two_js(h: LocalHamiltonian, two_js) -> tuple:
    two_js = tuple(int(t) for t in two_js)
    if len(two_js) != h.n or any(t < 0 for t in two_js):
        raise ValueError(f"need {h.n} non-negative doubled spins, got {two_js}")
    return two_js


def build_HJ(h: LocalHamiltonian, two_js, identity_weight: float = 1.0) -> np.ndarray:
    """Dense ``H(J)``: every ``sigma^(a)`` on qubit i becomes ``R_{J_i}(sigma^(a))``.

    ``identity_weight`` multiplies the image of ``sigma^(0)`` on every leg
    (1 gives the plain representation; the cloud size ``T`` gives the block
    of the cloud Hamiltonian, where the identity leg sums to ``T I``).
    """
    two_js = _check_two_js(h, two_js)
    dims = [t + 1 for t in two_js]
    dim = int(np.prod(dims)) if dims else 1
    if dim > MAX_DIM:
        raise ValueError(f"spin Hilbert space dimension {dim} exceeds {MAX_DIM}")
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for t in h.terms:
        for idx, val in t.nonzero():
            legs = dict(zip(t.support, idx))
            factor = val * identity_weight ** sum(1 for a in idx if a == 0)
            op = sp.identity(1, dtype=complex, format="csr")
            for q in range(h.n):
                if q in legs:
                    block = sp.csr_matrix(_spin_matrices(two_js[q]).matrices[legs[q]])
                else:
                    block = sp.identity(dims[q], dtype=complex, format="csr")
                op = sp.kron(op, block, format="csr")
            out = out + factor * op
    mat = out.toarray()
    check_hermitian(mat)
    return mat


def build_tilde_HJ(h: LocalHamiltonian, two_js) -> LocalHamiltonian:
    """Qubit Hamiltonian with each term scaled by ``prod_l 2 J_{i_l}`` over its support."""
    two_js = _check_two_js(h, two_js)
    terms = [Term(t.support, float(np.prod([two_js[q] for q in t.support])) * t.coeffs) for t in h.terms]
    return LocalHamiltonian(h.n, terms, h.psd_terms)


def spin_vectors(n: int, T: int):
    """All ``two_js`` in ``{T, T-2, ...}^n``."""
    return itertools.product(spin_values(T), repeat=n)


def verify_lieb(h: LocalHamiltonian, two_js, restarts: int = 16, seed=None, tol: float = 1e-8,
                report: Report | None = None) -> Report:
    """``OPT(H(J)) <= OPTprod(H~(J + 1))`` with the right side from product ascent.

    The ascent value is a lower bound on the true product optimum, so a
    pass here implies the inequality itself.
    """
    if not h.psd_terms:
        raise ValueError("Lieb check expects a Hamiltonian flagged psd_terms")
    two_js = _check_two_js(h, two_js)
    rep = report if report is not None else Report("verify-lieb", seed=seed)
    lhs = max_eigenvalue(build_HJ(h, two_js)) if h.terms else 0.0
    shifted = tuple(t + 2 for t in two_js)
    rhs = opt_prod(build_tilde_HJ(h, shifted), restarts=restarts, seed=seed).value
    label = ",".join(format_spin(t) for t in two_js)
    note = "J = 0 legs use the one-dimensional zero representation" if 0 in two_js else ""
    rep.add(f"lieb[{label}]", "OPT(H(J)) <= OPTprod(H~(J+1))", lhs, rhs, "<=", tol, "ascent-lower-bound",
            "lieb-inequality", note)
    return rep


def verify_opt_maxJ(h: LocalHamiltonian, T: int, tol: float = 1e-8) -> Report:
    """Compare ``OPT(H')`` of the cloud Hamiltonian with the spin-block maxima.

    Two claims are checked. ``opt-max-hj`` is the literal statement
    ``OPT(H') = max_J OPT(H(J))``. ``opt-max-hj-cloud`` uses blocks in which
    each identity leg carries weight ``T`` (``sum_t I = T I``); this is the
    exact block form of ``H'``. The two coincide when no term has an
    identity component, or when ``T = 1``.
    """
    from .cloud import blow_up_hamiltonian

    if h.n * T > 12:
        raise ValueError(f"direct side needs n T <= 12 qubits, got {h.n * T}")
    hp, _ = blow_up_hamiltonian(h, T)
    direct = opt(hp)
    rep = Report("verify-opt-maxJ")
    best_plain, best_cloud, arg_plain, arg_cloud = -np.inf, -np.inf, None, None
    per_j = {}
    for two_js in spin_vectors(h.n, T):
        plain = max_eigenvalue(build_HJ(h, two_js))
        cloud = max_eigenvalue(build_HJ(h, two_js, identity_weight=T))
        per_j[",".join(format_spin(t) for t in two_js)] = {"plain": plain, "cloud": cloud}
        if plain > best_plain + 1e-12:
            best_plain, arg_plain = plain, two_js
        if cloud > best_cloud + 1e-12:
            best_cloud, arg_cloud = cloud, two_js
    top = tuple([T] * h.n)
    rep.add("opt-max-hj", "OPT(H') = max_J OPT(H(J))", direct, best_plain, "=", tol, "exact", "cloud-spin-blocks",
            note=f"argmax J = {[format_spin(t) for t in arg_plain]}")
    rep.add("opt-max-hj-cloud", "OPT(H') = max_J OPT(block of H' at J)", direct, best_cloud, "=", tol, "exact",
            "cloud-spin-blocks", note=f"argmax J = {[format_spin(t) for t in arg_cloud]}")
    rep.add("opt-max-hj-top-spin", "maximal block attained at J = (T/2, ..., T/2)",
            per_j[",".join(format_spin(t) for t in top)]["cloud"], best_cloud, "=", tol, "exact",
            "cloud-spin-blocks")
    rep.meta.update(T=T, opt_h_prime=direct, blocks=per_j,
                    argmax_plain=[format_spin(t) for t in arg_plain],
                    argmax_cloud=[format_spin(t) for t in arg_cloud])
    return rep.finish()


def lieb_spin_vectors(n: int, max_two_j: int = 6, max_dim: int = MAX_DIM):
    """Doubled spin vectors with ``2 J_i <= max_two_j`` and ``prod (2 J_i + 1) <= max_dim``."""
    for two_js in itertools.product(range(max_two_j + 1), repeat=n):
        if int(np.prod([t + 1 for t in two_js])) <= max_dim:
            yield two_js


def verify_lieb_all(h: LocalHamiltonian, max_two_j: int = 6, restarts: int = 16, seed=None,
                    tol: float = 1e-8) -> Report:
    """:func:`verify_lieb` for every vector from :func:`lieb_spin_vectors`."""
    rep = Report("verify-lieb", seed=seed)
    for two_js in lieb_spin_vectors(h.n, max_two_j):
        verify_lieb(h, two_js, restarts=restarts, seed=seed, tol=tol, report=rep)
    rep.meta.update(max_two_j=max_two_j, max_dim=MAX_DIM, vectors=len(rep.claims))
    return rep.finish()
