import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CONGRESS, graph
from oracles import laplacian_by_hand, random_connected_edges
from sbviz.sgraph import (
    GraphError,
    ParseError,
    SignedGraph,
    is_connected,
    parse_edge_list,
    read_edge_list,
    serialize_edge_list,
    signed_adjacency,
    signed_laplacian,
    unsigned_degree_matrix,
)


def test_parse_simple():
    g = parse_edge_list("a b +\nb c -")
    assert g.node_count == 3
    assert g.edges == ((0, 1, 1), (1, 2, -1))
    assert g.node_labels == ("a", "b", "c")


def test_parse_sign_tokens_comments_crlf():
    text = "# header\r\n\r\nx y 1\r\ny z -1\r\nz w +1\r\n  # indented comment\nw x -\n"
    g = parse_edge_list(text)
    assert [s for _, _, s in g.edges] == [1, -1, 1, -1]
    assert g.node_labels == ("x", "y", "z", "w")


def test_parse_normalizes_orientation():
    g = parse_edge_list("a b +\nc a -")
    assert g.edges == ((0, 1, 1), (0, 2, -1))


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("a b +\na b -", 2, "conflicting"),
        ("a b +\nb a +", 2, "duplicate"),
        ("a b +\nc d", 2, "3 fields"),
        ("a b x", 1, "sign"),
        ("a b + extra", 1, "3 fields"),
        ("a b +\n\nq q +", 3, "self-loop"),
    ],
)
def test_parse_errors_name_line(text, lineno, fragment):
    with pytest.raises(ParseError) as err:
        parse_edge_list(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)
    assert fragment in str(err.value)


def test_non_strict_tolerates_exact_repeat_only():
    g = parse_edge_list("a b +\nb a +", strict=False)
    assert g.edge_count == 1
    with pytest.raises(ParseError):
        parse_edge_list("a b +\nb a -", strict=False)


def test_graph_invariants_enforced():
    with pytest.raises(GraphError):
        SignedGraph(2, ((0, 0, 1),))
    with pytest.raises(GraphError):
        SignedGraph(2, ((0, 1, 1), (1, 0, -1)))
    with pytest.raises(GraphError):
        SignedGraph(2, ((0, 1, 2),))
    with pytest.raises(GraphError):
        SignedGraph(2, ((0, 5, 1),))
    with pytest.raises(GraphError):
        SignedGraph(2, (), ("only-one",))


def test_is_connected():
    assert is_connected(graph(3, [(0, 1, 1), (1, 2, -1)]))
    assert not is_connected(graph(4, [(0, 1, 1), (2, 3, 1)]))
    assert is_connected(SignedGraph(0))
    assert is_connected(SignedGraph(1))
    assert not is_connected(SignedGraph(2))


def test_adjacency_examples(triangle_ppn):
    np.testing.assert_array_equal(signed_adjacency(graph(2, [(0, 1, 1)])), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(signed_adjacency(graph(2, [(0, 1, -1)])), [[0, -1], [-1, 0]])
    np.testing.assert_array_equal(
        signed_adjacency(triangle_ppn), [[0, 1, 1], [1, 0, -1], [1, -1, 0]]
    )


def test_laplacian_examples(triangle_ppn):
    np.testing.assert_array_equal(signed_laplacian(graph(2, [(0, 1, 1)])), [[1, -1], [-1, 1]])
    np.testing.assert_array_equal(signed_laplacian(graph(2, [(0, 1, -1)])), [[1, 1], [1, 1]])
    # hand expansion of D - A for the triangle
    np.testing.assert_array_equal(
        signed_laplacian(triangle_ppn), [[2, -1, -1], [-1, 2, 1], [-1, 1, 2]]
    )


def test_matrices_are_read_only(triangle_ppn):
    lap = signed_laplacian(triangle_ppn)
    with pytest.raises(ValueError):
        lap[0, 0] = 7


def _random_graphs(count, seed=1):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, 12))
        yield graph(n, random_connected_edges(rng, n, float(rng.random()), float(rng.random())))


def test_laplacian_properties():
    rng = np.random.default_rng(99)
    for g in _random_graphs(100):
        lap = signed_laplacian(g)
        assert np.array_equal(lap, lap.T)
        np.testing.assert_array_equal(lap, unsigned_degree_matrix(g) - signed_adjacency(g))
        np.testing.assert_array_equal(lap, laplacian_by_hand(g.node_count, g.edges))
        neg = np.zeros(g.node_count)
        for u, v, s in g.edges:
            if s < 0:
                neg[u] += 1
                neg[v] += 1
        np.testing.assert_array_equal(lap.sum(axis=1), 2 * neg)
        for _ in range(100):
            x = rng.standard_normal(g.node_count)
            assert x @ lap @ x >= -1e-12


edge_lines = st.lists(
    st.tuples(
        st.integers(0, 9), st.integers(0, 9), st.sampled_from(["+", "-", "+1", "-1", "1"])
    ),
    max_size=30,
)


@given(edge_lines)
@settings(max_examples=200, deadline=None)
def test_round_trip(lines):
    seen = set()
    text = []
    for a, b, s in lines:
        key = frozenset((a, b))
        if a == b or key in seen:
            continue
        seen.add(key)
        text.append(f"n{a} n{b} {s}")
    g = parse_edge_list("\n".join(text))
    out = serialize_edge_list(g)
    assert parse_edge_list(out) == g
    assert serialize_edge_list(parse_edge_list(out)) == out


@pytest.mark.skipif(not CONGRESS.exists(), reason="Congress data not present; see tests/fixtures/README.md")
def test_congress_fixture_shape():
    g = read_edge_list(CONGRESS)
    assert (g.node_count, g.edge_count) == (219, 521)
    assert is_connected(g)
