import pytest

from qlab.errors import BudgetExceeded, ParameterError
from qlab.graphs import build_commuting_graph, build_kneser_graph
from qlab.perm import GroundSet
from qlab.simplicial import boundary_matrix, chain_data, clique_complex, parse_complex
from conftest import commuting_cx, kneser_cx


def test_kneser_four_example():
    cx = kneser_cx(4, 2, max_dim=1)
    assert [cx.n_simplices(k) for k in range(3)] == [6, 3, 0]
    d1 = boundary_matrix(cx, 1)
    assert d1.shape == (6, 3)
    for j in range(3):
        assert sorted(d1.column(j).values()) == [-1, 1]


def test_perfect_matchings_of_k6():
    cx = commuting_cx(6, max_dim=2)
    assert cx.n_simplices(2) == 15


def test_empty_graph_gives_empty_complex():
    cx = clique_complex(build_commuting_graph(GroundSet.range(1), 2, 1), 2)
    assert all(cx.n_simplices(k) == 0 for k in range(4))
    assert cx.dimension() is None


def test_single_edge_orientation():
    # p = 1 Kneser graph on two labels: two vertices joined by one edge
    cx = kneser_cx(2, 1, max_dim=1)
    assert cx.simplices(1) == [(0, 1)]
    assert boundary_matrix(cx, 1).to_dense() == [[-1], [1]]
    assert boundary_matrix(cx, 0).to_dense() == [[1, 1]]
    assert boundary_matrix(cx, 0, reduced=False).shape == (0, 2)


@pytest.mark.parametrize("build", [
    lambda: commuting_cx(7, 2, 1, 2),
    lambda: commuting_cx(6, 2, 2, 3),
    lambda: commuting_cx(7, 3, 2, 2),
    lambda: kneser_cx(8, 2, 2),
    lambda: kneser_cx(5, 1, 3),
])
def test_boundary_squares_vanish(build):
    cx = build()
    data = chain_data(cx)
    data.check_squares()
    for k in range(1, cx.stored_top + 1):
        assert (boundary_matrix(cx, k - 1) @ boundary_matrix(cx, k)).is_zero()
        assert (boundary_matrix(cx, k - 1, False) @ boundary_matrix(cx, k, False)).is_zero()
    assert data.ranks[-1] == 1


def test_simplices_sorted_and_cliques():
    cx = commuting_cx(6, 2, 2, 2)
    g = cx.graph
    for k in range(cx.stored_top + 1):
        simp = cx.simplices(k)
        assert simp == sorted(simp)
        for s in simp:
            assert list(s) == sorted(set(s)) and g.is_clique(s)
            assert cx.index(k, s) == simp.index(s)


def test_boundary_out_of_range():
    cx = commuting_cx(5, max_dim=1)
    with pytest.raises(ParameterError):
        boundary_matrix(cx, 3)
    with pytest.raises(ParameterError):
        clique_complex(cx.graph, -1)


def test_simplex_budget():
    g = build_commuting_graph(GroundSet.range(8), 2, 2)
    with pytest.raises(BudgetExceeded) as err:
        clique_complex(g, 2, max_simplices=1000)
    assert "counts_per_dim" in err.value.counts


def test_dump_parse_round_trip():
    for g in (build_commuting_graph(GroundSet.range(6), 3, None), build_kneser_graph(GroundSet.range(7), 2)):
        cx = clique_complex(g, 2)
        text = cx.dumps()
        back = parse_complex(text, g)
        assert back.skeleton == cx.skeleton and back.max_dim == cx.max_dim
        assert text.splitlines()[0] == cx.header()
    assert commuting_cx(5, 2, None, 1).header() == "qlab-complex v1 5 2 unbounded 1"
    assert kneser_cx(5, 2).header() == "qlab-complex v1 5 2 kneser 1"


def test_parse_rejects_wrong_graph():
    cx = commuting_cx(5, max_dim=1)
    other = build_commuting_graph(GroundSet.range(6), 2, 1)
    with pytest.raises(ValueError):
        parse_complex(cx.dumps(), other)
    with pytest.raises(ValueError):
        parse_complex("junk\n", cx.graph)


def test_truncation_flag():
    cx = commuting_cx(8, 2, 1, 1)
    assert cx.is_truncated()
    assert not commuting_cx(5, 2, 1, 1).is_truncated()
