from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmcred.cloud import CloudMap, blow_up_graph, blow_up_hamiltonian, product_lift_energy, verify_sandwich
from qmcred.graphs import make_named_graph
from qmcred.quantum import (PAULI, LocalHamiltonian, Term, opt, opt_prod, product_energy, qmc_hamiltonian,
                            random_local_hamiltonian, to_dense)
from qmcred.rankcut import normalize_rows


def cloud_oracle(h, T):
    """Dense H' assembled directly: for every term and cloud choice, a Kronecker product."""
    n = h.n * T
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for t in h.terms:
        for choice in np.ndindex(*([T] * t.k)):
            qubits = [i * T + c for i, c in zip(t.support, choice)]
            for idx in np.ndindex(*t.coeffs.shape):
                if t.coeffs[idx] == 0:
                    continue
                labels = dict(zip(qubits, idx))
                out += t.coeffs[idx] * reduce(np.kron, [PAULI[labels.get(q, 0)] for q in range(n)])
    return out


def test_cloud_map():
    cmap = CloudMap(3, 2)
    assert [cmap(i, t) for i in range(3) for t in range(2)] == list(range(6))
    assert list(cmap.cloud(1)) == [2, 3]
    assert cmap.inverse(5) == (2, 1)
    with pytest.raises(ValueError):
        CloudMap(2, 0)


def test_blow_up_sizes():
    h = qmc_hamiltonian(make_named_graph("path", 3))
    hp, _ = blow_up_hamiltonian(h, 3)
    assert hp.n == 9 and len(hp.terms) == 2 * 9
    g, _ = blow_up_graph(make_named_graph("path", 3), 2)
    assert g.n == 6 and g.m == 8


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_blow_up_matches_oracle(n, T, seed):
    if n * T > 8:
        T = 8 // n
    h = random_local_hamiltonian(n, min(2, n), 2, np.random.default_rng(seed))
    hp, _ = blow_up_hamiltonian(h, T)
    np.testing.assert_allclose(to_dense(hp), cloud_oracle(h, T), atol=1e-10)


@pytest.mark.parametrize("kind,n,T,value", [
    ("complete", 2, 1, 1.0),
    ("complete", 2, 2, 3.0),
    ("complete", 2, 3, 6.0),
    ("path", 3, 2, 5.0),
])
def test_cloud_optima(kind, n, T, value):
    h = qmc_hamiltonian(make_named_graph(kind, n))
    hp, _ = blow_up_hamiltonian(h, T)
    assert opt(hp) == pytest.approx(value, abs=1e-9)
    assert np.linalg.eigvalsh(cloud_oracle(h, T))[-1] == pytest.approx(value, abs=1e-9)


@given(st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_lifted_product_energy(T, seed):
    rng = np.random.default_rng(seed)
    h = random_local_hamiltonian(3, 2, 3, rng)
    x = normalize_rows(rng.standard_normal((3, 3)))
    # each k-local term is repeated T^k times with identical product expectation
    assert product_lift_energy(h, T, x) == pytest.approx(T ** 2 * product_energy(h, x), abs=1e-9)


@pytest.mark.parametrize("kind,n,T", [("complete", 2, 1), ("complete", 2, 2), ("complete", 2, 3), ("path", 3, 2)])
def test_sandwich(kind, n, T):
    g = make_named_graph(kind, n)
    rep = verify_sandwich(qmc_hamiltonian(g), T, restarts=8, seed=0, graph=g)
    assert rep.passed, rep.summary()
    assert rep.meta["opt_h_prime"] >= rep.meta["lower"]


def test_sandwich_k2_t2_numbers():
    g = make_named_graph("complete", 2)
    rep = verify_sandwich(qmc_hamiltonian(g), 2, seed=0, graph=g)
    assert rep.meta["lower"] == pytest.approx(2.0)
    assert rep.meta["opt_h_prime"] == pytest.approx(3.0)
    assert rep.meta["upper"] == pytest.approx(8.0)


def test_sandwich_preconditions():
    h = LocalHamiltonian(2, [Term((0, 1), -np.eye(4))], psd_terms=False)
    with pytest.raises(ValueError):
        verify_sandwich(h, 2)
    with pytest.raises(ValueError):
        verify_sandwich(qmc_hamiltonian(make_named_graph("complete", 5)), 3)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_sandwich_random_psd(seed):
    h = random_local_hamiltonian(3, 2, 3, np.random.default_rng(seed), psd=True)
    rep = verify_sandwich(h, 2, restarts=8, seed=0)
    assert rep.claims[0].passed
