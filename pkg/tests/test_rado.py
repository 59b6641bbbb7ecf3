import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cantorhm.colorings import PairColoring
from cantorhm.errors import ParseError, ResourceError, UsageError
from cantorhm.rado import (
    FiniteGraph, embed_graph, extension_witness, find_induced_embedding, is_induced_embedding,
    least_with_bits,
    norm, rado_edge, rado_graph,
)


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield FiniteGraph(n, [e for k, e in enumerate(pairs) if bits >> k & 1])


def random_graph(n, rng, prob=0.5):
    return FiniteGraph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < prob])


def test_rado_edge_examples():
    assert rado_edge(0, 1) == 1
    assert rado_edge(0, 2) == 0
    assert rado_edge(1, 3) == 1
    assert rado_edge(3, 1) == 1
    with pytest.raises(UsageError):
        rado_edge(4, 4)


def test_extension_witness_examples():
    assert extension_witness({0}, {1}) == 5
    assert extension_witness(set(), set()) == 2
    assert extension_witness({1, 2}, {0}) == 14
    with pytest.raises(UsageError):
        extension_witness({1}, {1, 2})


def test_extension_property_exhaustive():
    count = 0
    for assign in itertools.product(range(3), repeat=8):
        U = {i for i, a in enumerate(assign) if a == 1}
        V = {i for i, a in enumerate(assign) if a == 2}
        z = extension_witness(U, V)
        assert z not in U | V
        assert all(rado_edge(z, u) for u in U)
        assert not any(rado_edge(z, v) for v in V)
        count += 1
    assert count == 3 ** 8


def test_embed_graph_small():
    assert embed_graph(FiniteGraph(1)) == [0]
    K3 = FiniteGraph(3, [(0, 1), (0, 2), (1, 2)])
    img = embed_graph(K3)
    assert all(rado_edge(a, b) for a, b in itertools.combinations(img, 2))
    C5 = FiniteGraph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert is_induced_embedding(C5, embed_graph(C5))


def test_embed_graph_all_four_vertex_graphs():
    graphs = list(all_graphs(4))
    assert len(graphs) == 64
    for G in graphs:
        img = embed_graph(G)
        assert len(set(img)) == 4
        assert is_induced_embedding(G, img)


def test_embed_graph_random_eight_vertex_graphs():
    rng = random.Random(8)
    for _ in range(100):
        G = random_graph(8, rng)
        assert is_induced_embedding(G, embed_graph(G))


def test_graph_text_roundtrip():
    G = FiniteGraph(4, [(0, 1), (2, 3), (1, 3)])
    assert FiniteGraph.from_text(G.to_text()) == G
    with pytest.raises(ParseError, match="line 2"):
        FiniteGraph.from_text("graph 3\ne 0 5\n")
    with pytest.raises(ParseError):
        FiniteGraph.from_text("graph 3\ne 1 1\n")
    with pytest.raises(ParseError, match="line 1"):
        FiniteGraph.from_text("grph 3\n")


def test_finite_graph_invariants():
    with pytest.raises(UsageError):
        FiniteGraph(3, [(1, 1)])
    G = FiniteGraph(3, [(0, 2)])
    assert G.has_edge(2, 0) and not G.has_edge(0, 1)
    assert G.complement().edges() == [(0, 1), (1, 2)]


def test_find_induced_embedding_oracle():
    # brute force over injections on small graphs
    rng = random.Random(3)
    for _ in range(40):
        P = random_graph(rng.randrange(1, 4), rng)
        T = random_graph(rng.randrange(1, 6), rng)
        found = find_induced_embedding(P, T)
        brute = next((list(m) for m in itertools.permutations(range(T.n), P.n)
                      if all(P.has_edge(a, b) == T.has_edge(m[a], m[b])
                             for a, b in itertools.combinations(range(P.n), 2))), None)
        assert found == brute


def _coloring(G):
    return PairColoring.from_graph(G)


def test_norm_examples():
    for n in range(0, 7):
        assert norm(_coloring(rado_graph(n))) == n
    for m in range(2, 7):
        assert norm(_coloring(FiniteGraph(m, itertools.combinations(range(m), 2)))) == 2
    for m in range(1, 7):
        assert norm(_coloring(FiniteGraph(m))) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 2 ** 28 - 1), st.integers(0, 2 ** 8 - 1))
def test_norm_bounded_and_monotone(n, bits, extra):
    pairs = list(itertools.combinations(range(n), 2))
    G = FiniteGraph(n, [e for k, e in enumerate(pairs) if bits >> k & 1])
    base = norm(G)
    assert base <= n
    bigger = FiniteGraph(n + 1, G.edges() + [(v, n) for v in range(n) if extra >> v & 1])
    assert norm(bigger) >= base


@given(st.integers(0, 300), st.integers(0, 255), st.integers(0, 255))
def test_least_with_bits_matches_scan(t, ones, fixed):
    ones &= fixed
    z = least_with_bits(t, ones, fixed)
    assert z >= t and z & fixed == ones
    assert all(w & fixed != ones for w in range(t, z))


def test_embed_graph_clique_labels_are_towers():
    assert embed_graph(FiniteGraph(3, [(0, 1), (0, 2), (1, 2)])) == [0, 1, 3]
    K6 = FiniteGraph(6, itertools.combinations(range(6), 2))
    img = embed_graph(K6)
    assert is_induced_embedding(K6, img)
    with pytest.raises(ResourceError):
        embed_graph(FiniteGraph(7, itertools.combinations(range(7), 2)))
