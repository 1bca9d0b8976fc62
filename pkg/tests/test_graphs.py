import pytest

from smallcuts.graphs import (
    FaultSet,
    GraphParseError,
    Multigraph,
    format_graph,
    from_edge_list,
    parse_graph,
)

TRIANGLE_TEXT = "3 3\n0 1\n1 2\n2 0\n"


def test_parse_triangle():
    g = parse_graph(TRIANGLE_TEXT)
    assert g.n == 3
    assert g.m == 3
    assert g.edges == ((1, 0, 1), (2, 1, 2), (3, 2, 0))


def test_parse_duplicate_line_gives_parallel_edges():
    g = parse_graph("2 2\n0 1\n0 1\n")
    assert g.m == 2
    assert g.adjacency[0] == ((1, 1), (2, 1))
    assert g.neighbor_edges[0] == {1: (1, 2)}


def test_parse_rejects_self_loop_with_line_number():
    with pytest.raises(GraphParseError, match="self-loop at line 3"):
        parse_graph("2 2\n0 1\n0 0\n")


def test_parse_rejects_out_of_range_endpoint():
    with pytest.raises(GraphParseError, match="line 2"):
        parse_graph("2 1\n0 5\n")


def test_parse_rejects_malformed_line():
    with pytest.raises(GraphParseError, match="line 2"):
        parse_graph("2 1\nnope\n")


def test_parse_skips_comments_and_blanks():
    text = "# a triangle\n\n3 3\n0 1\n# middle\n1 2\n\n2 0\n"
    assert parse_graph(text).m == 3


def test_parse_edge_count_mismatch():
    with pytest.raises(GraphParseError):
        parse_graph("3 3\n0 1\n1 2\n")
    with pytest.raises(GraphParseError):
        parse_graph("3 1\n0 1\n1 2\n")


def test_format_round_trips_bit_exactly():
    g = parse_graph(TRIANGLE_TEXT)
    assert format_graph(g) == TRIANGLE_TEXT
    assert format_graph(parse_graph(format_graph(g))) == TRIANGLE_TEXT


def test_roundtrip_with_parallel_edges():
    g = from_edge_list(4, [(0, 1), (0, 1), (1, 2), (2, 3), (3, 0)])
    assert parse_graph(format_graph(g)) == g


def test_constructor_invariants():
    with pytest.raises(ValueError):
        Multigraph(2, ((1, 0, 0),))  # self-loop
    with pytest.raises(ValueError):
        Multigraph(2, ((1, 0, 1), (1, 1, 0)))  # duplicate id
    with pytest.raises(ValueError):
        Multigraph(2, ((1, 0, 5),))  # out of range


def test_diameter_and_degree():
    g = parse_graph("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n")  # C6
    assert g.diameter == 3
    assert g.max_degree == 2
    assert g.eccentricity(0) == 3


def test_diameter_of_disconnected_graph_is_max_within_components():
    g = from_edge_list(5, [(0, 1), (1, 2), (3, 4)])
    assert not g.is_connected
    assert g.diameter == 2
    assert g.components() == [[0, 1, 2], [3, 4]]


def test_bfs_distances_with_bans():
    g = parse_graph(TRIANGLE_TEXT)
    assert g.bfs_distances(0) == {0: 0, 1: 1, 2: 1}
    assert g.bfs_distances(0, banned_edges={1})[1] == 2
    assert 1 not in g.bfs_distances(0, banned_vertices={1})


def test_fault_set_validation(bridge_graph):
    FaultSet.edges([1, 7]).validate(bridge_graph)
    with pytest.raises(ValueError):
        FaultSet.edges([99]).validate(bridge_graph)
    with pytest.raises(ValueError):
        FaultSet.vertices([17]).validate(bridge_graph)
    with pytest.raises(ValueError):
        FaultSet("nodes", frozenset())
