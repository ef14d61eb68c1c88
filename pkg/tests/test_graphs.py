"""Graph type, edge-list files, random regular generation."""

import pytest

from lpncsim.graphs import (
    Graph,
    format_edge_list,
    parse_edge_list,
    random_regular_graph,
)


class TestGraph:
    def test_normalization(self):
        g = Graph(4, ((2, 1), (0, 3)))
        assert g.edges == ((0, 3), (1, 2))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(3, ((1, 1),))

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 1), (1, 0)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 3),))

    def test_degrees_and_regularity(self):
        tri = Graph(3, ((0, 1), (1, 2), (0, 2)))
        assert tri.degrees() == [2, 2, 2]
        assert tri.regularity == 2
        path = Graph(3, ((0, 1), (1, 2)))
        assert path.regularity is None
        assert path.max_degree == 2

    def test_neighbors(self):
        g = Graph(4, ((0, 1), (0, 2), (2, 3)))
        assert g.neighbors(0) == [1, 2]
        assert g.neighbors(3) == [2]


class TestEdgeListFormat:
    def test_round_trip(self):
        g = Graph(5, ((0, 4), (1, 2), (2, 3)))
        assert parse_edge_list(format_edge_list(g)) == g

    def test_comments_and_blanks(self):
        text = "# header\n0 1\n\n1 2\n"
        g = parse_edge_list(text)
        assert g.edges == ((0, 1), (1, 2))
        assert g.vertex_count == 3

    def test_bad_line(self):
        with pytest.raises(ValueError):
            parse_edge_list("0 1 2\n")

    def test_explicit_vertex_count(self):
        g = parse_edge_list("0 1\n", vertex_count=5)
        assert g.vertex_count == 5


class TestRandomRegular:
    def test_k4_is_unique(self):
        g = random_regular_graph(4, 3, seed=0)
        assert g.edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

    def test_degrees(self):
        g = random_regular_graph(30, 3, seed=11)
        assert g.edge_count == 45
        assert g.regularity == 3

    def test_deterministic(self):
        assert random_regular_graph(20, 3, seed=5) == random_regular_graph(
            20, 3, seed=5
        )
        assert random_regular_graph(20, 3, seed=5) != random_regular_graph(
            20, 3, seed=6
        )

    def test_odd_product_rejected(self):
        with pytest.raises(ValueError):
            random_regular_graph(5, 3, seed=0)

    def test_degree_bound_rejected(self):
        with pytest.raises(ValueError):
            random_regular_graph(4, 4, seed=0)
