"""Cloud blow-up: every qubit (or vertex) becomes ``T`` copies and every
term is repeated over all choices of copies."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import Graph
from .quantum import LocalHamiltonian, Term, opt, opt_prod, product_energy, qmc_hamiltonian
from .rankcut import solve_rankk
from .report import Report


@dataclass(frozen=True)
class CloudMap:
    n: int
    T: int

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("cloud size T must be >= 1")

    def __call__(self, i: int, t: int) -> int:
        return i * self.T + t

    def cloud(self, i: int) -> range:
        return range(i * self.T, (i + 1) * self.T)

    def inverse(self, q: int) -> tuple:
        return divmod(q, self.T)


def blow_up_hamiltonian(h: LocalHamiltonian, T: int):
    """``H'`` on ``n T`` qubits: each term copied onto every ``(t_1, ..., t_k)``."""
    cmap = CloudMap(h.n, T)
    terms = []
    for term in h.terms:
        for ts in itertools.product(range(T), repeat=term.k):
            terms.append(Term(tuple(cmap(i, t) for i, t in zip(term.support, ts)), term.coeffs.copy()))
    return LocalHamiltonian(h.n * T, terms, h.psd_terms), cmap


def blow_up_graph(g: Graph, T: int):
    """Complete bipartite connections between the clouds of adjacent vertices."""
    if not g.is_unweighted():
        raise ValueError("graph blow-up takes unweighted graphs")
    cmap = CloudMap(g.n, T)
    edges = [(cmap(u, s), cmap(v, t), 1.0) for u, v, _ in g.edges for s in range(T) for t in range(T)]
    return Graph(g.n * T, tuple(edges)), cmap


def product_lift_energy(h: LocalHamiltonian, T: int, bloch) -> float:
    """Energy on ``H'`` of the product state repeating ``bloch[i]`` over cloud ``i``."""
    hp, _ = blow_up_hamiltonian(h, T)
    return product_energy(hp, np.repeat(np.asarray(bloch, dtype=float), T, axis=0))


def verify_sandwich(h: LocalHamiltonian, T: int, restarts: int = 32, seed=None, graph: Optional[Graph] = None,
                    tol: float = 1e-8) -> Report:
    """``T^k OPTprod(H) <= OPT(H') <= (T+2)^k OPTprod(H)``.

    ``OPTprod`` comes from multi-start product ascent and, when the
    Hamiltonian is the QMC Hamiltonian of ``graph``, from half the best
    rank-3 cut as well. Being a lower bound on the product optimum, it makes
    the left inequality a sound check of itself, while the right one is only
    as good as the ascent, and is flagged conditional.
    """
    if h.n * T > 12:
        raise ValueError(f"H' would have {h.n * T} qubits; limit is 12")
    if not (h.psd_terms and h.check_psd_terms()):
        raise ValueError("psd precondition: every term must be positive semidefinite")
    rep = Report("verify-sandwich", seed=seed)
    k = h.locality
    prod = opt_prod(h, restarts=restarts, seed=seed).value
    source = "product ascent"
    if graph is not None:
        if qmc_hamiltonian(graph).to_json() != h.to_json():
            raise ValueError("graph does not match the Hamiltonian")
        bridge = 0.5 * solve_rankk(graph, 3, restarts=restarts, seed=seed).value
        if bridge > prod:
            prod, source = bridge, "rank-3 cut bridge"
    hp, _ = blow_up_hamiltonian(h, T)
    full = opt(hp)
    rep.add("sandwich-lower", "T^k OPTprod(H) <= OPT(H')", T ** k * prod, full, "<=", tol, "ascent-lower-bound",
            "product-state-sandwich")
    rep.add("sandwich-upper", "OPT(H') <= (T+2)^k OPTprod(H)", full, (T + 2) ** k * prod, "<=", tol,
            "ascent-lower-bound", "product-state-sandwich",
            note="conditional on ascent optimality of OPTprod")
    rep.meta.update(T=T, k=k, opt_prod=prod, opt_prod_source=source, opt_h_prime=full,
                    lower=T ** k * prod, upper=(T + 2) ** k * prod)
    return rep.finish()
