import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_graph, random_graph
from core2vec.coreness import kcore_fast, kcore_naive, write_coreness_tsv
from core2vec.graph import Graph, les_miserables

BOTH = pytest.mark.parametrize("kcore", [kcore_fast, kcore_naive], ids=["fast", "naive"])


@BOTH
def test_triangle(kcore, triangle):
    assert kcore(triangle).core_of.tolist() == [2, 2, 2]


@BOTH
def test_path(kcore, path3):
    assert kcore(path3).core_of.tolist() == [1, 1, 1]


@BOTH
def test_pendant_triangle(kcore, pendant_triangle):
    # peeling removes d at k=1; the triangle survives k=2
    assert kcore(pendant_triangle).core_of.tolist() == [2, 2, 2, 1]


@BOTH
def test_no_edges(kcore):
    g = Graph.from_edges(5, [], [])
    assert kcore(g).core_of.tolist() == [0] * 5


@BOTH
def test_complete_graph(kcore):
    g = make_graph([(u, v) for u in range(5) for v in range(u + 1, 5)])
    assert kcore(g).core_of.tolist() == [4] * 5


@BOTH
def test_isolated_node_has_core_zero(kcore):
    g = make_graph([(0, 1), (1, 2), (2, 0)], n=4)
    assert kcore(g).core_of.tolist() == [2, 2, 2, 0]


def test_random_g20_matches_oracle():
    g = random_graph(np.random.default_rng(20), 20, 0.3)
    assert kcore_fast(g) == kcore_naive(g)


def test_lesmis_matches_networkx():
    g = les_miserables()
    nxg = nx.Graph()
    nxg.add_edges_from(zip(*g.edges()[:2]))
    ref = nx.core_number(nxg)
    assert kcore_fast(g).core_of.tolist() == [ref[i] for i in range(g.node_count)]


def test_shells_partition(pendant_triangle):
    cores = kcore_fast(pendant_triangle)
    assert {k: v.tolist() for k, v in cores.shells.items()} == {1: [3], 2: [0, 1, 2]}
    assert cores.max_core == 2
    assert cores.shell_sizes() == {1: 1, 2: 3}


def test_tsv(tmp_path, pendant_triangle):
    path = tmp_path / "c.tsv"
    write_coreness_tsv(pendant_triangle, kcore_fast(pendant_triangle), path)
    assert path.read_text() == "a\t2\nb\t2\nc\t2\nd\t1\n"


graphs = st.builds(
    lambda n, p, seed: random_graph(np.random.default_rng(seed), n, p),
    st.integers(1, 40),
    st.floats(0.0, 0.6),
    st.integers(0, 2**32 - 1),
)


@settings(max_examples=80, deadline=None)
@given(g=graphs)
def test_core_invariants(g):
    cores = kcore_fast(g)
    assert cores == kcore_naive(g)
    core_of = cores.core_of
    assert np.all(core_of <= g.degrees)
    for k in range(1, cores.max_core + 1):
        assert g.induced_min_degree(core_of >= k) >= k
    # maximality: the (max_core+1)-core is empty
    assert not np.any(core_of > cores.max_core)


@settings(max_examples=80, deadline=None)
@given(g=graphs, data=st.data())
def test_adding_an_edge_never_lowers_coreness(g, data):
    n = g.node_count
    if n < 2:
        return
    u = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1).filter(lambda x: x != u))
    a, b, _ = g.edges()
    h = Graph.from_edges(n, np.append(a, u), np.append(b, v), collapse="max")
    assert np.all(kcore_fast(h).core_of >= kcore_fast(g).core_of)
