import pytest

from vmi2stro import GraphFormatError, ProblemError
from vmi2stro.problems import (
    Graph,
    cycle_graph,
    cut_value,
    cut_vector,
    maxcut_bruteforce,
    parse_graph,
    load_graph,
    index_to_bitstring,
    bitstring_to_index,
)


@pytest.mark.parametrize("g,z,expected", [
    (cycle_graph(2), "01", 1),
    (cycle_graph(2), "00", 0),
    (cycle_graph(5), "01010", 4),
    (cycle_graph(6), "010101", 6),
])
def test_cut_value(g, z, expected):
    assert cut_value(g, z) == expected
    assert cut_value(g, [int(ch) for ch in z]) == expected


def test_cut_vector_matches_cut_value():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    cuts = cut_vector(g)
    for index in range(16):
        assert cuts[index] == cut_value(g, index_to_bitstring(index, 4))


def test_bit_order():
    assert index_to_bitstring(1, 2) == "10"
    assert bitstring_to_index("10") == 1
    assert bitstring_to_index(index_to_bitstring(22, 5)) == 22


@pytest.mark.parametrize("g,expected", [
    (cycle_graph(5), 4),
    (cycle_graph(6), 6),
    (Graph(3), 0),
])
def test_bruteforce(g, expected):
    value, z = maxcut_bruteforce(g)
    assert value == expected
    assert cut_value(g, z) == expected


def test_bad_cuts_and_graphs():
    g = cycle_graph(3)
    with pytest.raises(ProblemError):
        cut_value(g, "0101")
    with pytest.raises(ProblemError):
        cut_value(g, "01x")
    with pytest.raises(ProblemError):
        Graph(3, [(0, 0)])
    with pytest.raises(ProblemError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ProblemError):
        Graph(3, [(0, 3)])
    with pytest.raises(ProblemError):
        Graph(0)


def test_edges_are_normalized():
    assert Graph(3, [(2, 0)]).edges == ((0, 2),)
    assert Graph(3, [(0, 1), (1, 2)]) == Graph(3, [(2, 1), (1, 0)])


def test_parse_graph():
    text = "# a triangle\n3 3\n0 1\n1 2  # last two\n\n2 0\n"
    g = parse_graph(text)
    assert g.n == 3
    assert g.m == 3
    assert maxcut_bruteforce(g)[0] == 2


@pytest.mark.parametrize("text,fragment", [
    ("", "empty"),
    ("3\n", ":1:"),
    ("3 2\n0 1\n", "declares 2 edges"),
    ("3 1\n0 5\n", ":2:"),
    ("3 2\n0 1\n1 0\n", "duplicate"),
    ("3 1\n0 a\n", ":2:"),
])
def test_parse_graph_errors(text, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text, source="g.txt")
    assert fragment in str(info.value)


def test_load_graph(tmp_path):
    path = tmp_path / "c4.txt"
    path.write_text("4 4\n0 1\n1 2\n2 3\n3 0\n")
    assert load_graph(str(path)) == cycle_graph(4)
