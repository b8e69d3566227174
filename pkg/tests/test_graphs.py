import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmcred.graphs import (ExpanderError, Graph, InputError, NotBipartiteError, SpectralCertificate, bipartition,
                           certify, check_bipartite_symmetry, is_connected, laplacian_spectrum, load_graph,
                           make_bipartite_expander, make_named_graph, parse_edge_list, save_graph,
                           top_laplacian_eigenvalues)


@st.composite
def graphs(draw, max_n=9, weighted=False):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if weighted:
        ws = draw(st.lists(st.floats(0.1, 5.0), min_size=len(chosen), max_size=len(chosen)))
    else:
        ws = [1.0] * len(chosen)
    return Graph(n, tuple((u, v, w) for (u, v), w in zip(chosen, ws)))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges)
    return h


def test_validation():
    with pytest.raises(ValueError):
        Graph(3, ((0, 0, 1.0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1, 1.0), (1, 0, 1.0)))
    with pytest.raises(ValueError):
        Graph(3, ((0, 3, 1.0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1, -1.0),))


def test_named_graphs():
    assert make_named_graph("complete", 3).m == 3
    assert make_named_graph("cycle", 5).m == 5
    assert make_named_graph("path", 3).m == 2
    g = make_named_graph("erdos_renyi", 10, p=0.5, seed=3)
    assert g == make_named_graph("erdos_renyi", 10, p=0.5, seed=3)
    with pytest.raises(ValueError):
        make_named_graph("star", 4)


@given(graphs(weighted=True))
def test_laplacian_matches_networkx(g):
    ref = nx.laplacian_matrix(to_nx(g), nodelist=range(g.n), weight="weight").toarray()
    np.testing.assert_allclose(g.laplacian(), ref, atol=1e-12)
    np.testing.assert_allclose(g.laplacian(sparse=True).toarray(), ref, atol=1e-12)


@given(graphs(weighted=True))
def test_laplacian_psd_and_kernel(g):
    ev = laplacian_spectrum(g)
    assert ev[0] > -1e-9
    assert abs(ev[0]) < 1e-9
    np.testing.assert_allclose(g.laplacian() @ np.ones(g.n), 0.0, atol=1e-12)


@given(graphs(weighted=True))
def test_json_round_trip(g):
    assert Graph.from_json(json.loads(json.dumps(g.to_json()))) == g


@given(graphs())
def test_connectivity_and_bipartiteness(g):
    h = to_nx(g)
    assert is_connected(g) == nx.is_connected(h)
    if nx.is_bipartite(h):
        a, b = bipartition(g)
        side = {v: 0 for v in a} | {v: 1 for v in b}
        assert all(side[u] != side[v] for u, v, _ in g.edges)
        assert check_bipartite_symmetry(g)
    else:
        with pytest.raises(NotBipartiteError):
            bipartition(g)


def test_from_json_names_field():
    with pytest.raises(InputError) as err:
        Graph.from_json({"n": 3, "edges": [[0, 1], [1, "x"]]})
    assert err.value.field == "edges[1]"
    with pytest.raises(InputError) as err:
        Graph.from_json({"edges": []})
    assert err.value.field == "n"


def test_edge_list_and_files(tmp_path):
    g = parse_edge_list("# triangle\n0 1\n1 2 2.5\n0 2\n")
    assert g.n == 3 and g.total_weight() == 4.5
    path = tmp_path / "g.json"
    save_graph(g, path)
    assert load_graph(path) == g
    txt = tmp_path / "g.txt"
    txt.write_text("0 1\n1 2 2.5\n0 2\n")
    assert load_graph(txt) == g
    bad = tmp_path / "bad.json"
    bad.write_text("{\"n\": 2,")
    with pytest.raises(InputError):
        load_graph(bad)


def test_expander_example():
    g, cert = make_bipartite_expander(12, 4, 0.5, seed=0)
    assert g.n == 24 and g.m == 48
    assert np.all(g.degrees == 4)
    assert cert.connected and cert.gap >= 0.5
    assert cert.lambda_max == pytest.approx(8.0, abs=1e-9)
    ev = laplacian_spectrum(g)
    assert cert.gap == pytest.approx(ev[-1] - ev[-2], abs=1e-9)
    assert set(cert.bipartition[0]) == set(range(12))


def test_expander_k33():
    g, cert = make_bipartite_expander(3, 3, 0.1, seed=5)
    np.testing.assert_allclose(laplacian_spectrum(g), [0, 3, 3, 3, 3, 6], atol=1e-9)
    assert cert.gap == pytest.approx(3.0, abs=1e-9)


def test_expander_errors():
    with pytest.raises(ValueError):
        make_bipartite_expander(2, 4, 0.5)
    with pytest.raises(ExpanderError):
        make_bipartite_expander(6, 2, 5.0, seed=0, max_attempts=3)


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 20), st.integers(2, 4), st.integers(0, 10 ** 6))
def test_expander_invariants(h, d, seed):
    d = min(d, h)
    g, cert = make_bipartite_expander(h, d, 1e-6, seed=seed)
    assert np.all(g.degrees == d)
    assert cert.lambda_max == pytest.approx(2 * d, abs=1e-8)
    assert cert.gap >= 0
    assert check_bipartite_symmetry(g, cert.bipartition)
    assert SpectralCertificate.from_json(cert.to_json()) == cert


def test_sparse_top_eigenvalues_agree_with_dense():
    g, _ = make_bipartite_expander(30, 4, 0.1, seed=2)
    dense = laplacian_spectrum(g)[::-1][:2]
    np.testing.assert_allclose(top_laplacian_eigenvalues(g, 2), dense, atol=1e-10)


def test_certify_path():
    cert = certify(make_named_graph("path", 3))
    # path P3 Laplacian spectrum is {0, 1, 3}
    assert cert.lambda_max == pytest.approx(3.0)
    assert cert.gap == pytest.approx(2.0)
