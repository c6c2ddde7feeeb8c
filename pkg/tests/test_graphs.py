import pytest

from purisim.graphs import (
    NotTwoColorableError,
    ghz_star,
    grid_cluster,
    linear_cluster,
    make_graph,
    partition_for_target,
    pauli_flip_mask,
    two_coloring,
)

ZOO = [
    linear_cluster(2),
    linear_cluster(4),
    linear_cluster(8),
    grid_cluster(2, 2),
    grid_cluster(3, 4),
    ghz_star(1, [2, 3]).graph,
    ghz_star(2, [1, 3, 4]).graph,
]


def test_linear_cluster_smallest():
    g = linear_cluster(2)
    assert g.edges == frozenset({(1, 2)})


def test_linear_cluster_eight():
    g = linear_cluster(8)
    assert g.edge_count == 7
    assert g.degree(1) == g.degree(8) == 1
    assert all(g.degree(v) == 2 for v in range(2, 8))


def test_linear_cluster_degenerate():
    g = linear_cluster(1)
    assert g.n == 1 and g.edge_count == 0


def test_linear_cluster_rejects_zero():
    with pytest.raises(ValueError):
        linear_cluster(0)


def test_grid_3x4():
    g = grid_cluster(3, 4)
    assert g.n == 12
    assert g.edge_count == 17
    for corner in (1, 4, 9, 12):
        assert g.degree(corner) == 2


def test_grid_row_equals_linear():
    assert grid_cluster(1, 6).edges == linear_cluster(6).edges


def test_grid_2x2_is_cycle():
    g = grid_cluster(2, 2)
    assert g.n == 4 and g.edge_count == 4
    assert all(g.degree(v) == 2 for v in range(1, 5))


def test_grid_rejects_zero_dimension():
    with pytest.raises(ValueError):
        grid_cluster(0, 3)


def test_ghz_star_leaf_target():
    star = ghz_star(1, [2])
    assert star.graph.n == 2
    assert star.graph.edges == frozenset({(1, 2)})
    assert star.physical == (1, 2)


def test_ghz_star_interior_target():
    star = ghz_star(2, [1, 3])
    assert star.graph.n == 3
    assert star.center == 1
    assert star.physical == (2, 1, 3)
    assert star.graph.edges == frozenset({(1, 2), (1, 3)})
    assert star.aux_label(1) == 2 and star.aux_label(3) == 3


def test_ghz_star_grid_neighborhood():
    g = grid_cluster(3, 4)
    star = ghz_star(6, g.neighbors(6))
    assert g.neighbors(6) == (2, 5, 7, 10)
    assert star.graph.n == 5
    assert star.physical == (6, 2, 5, 7, 10)


def test_ghz_star_rejects_empty_leaves():
    with pytest.raises(ValueError):
        ghz_star(1, [])


def test_ghz_star_rejects_center_in_leaves():
    with pytest.raises(ValueError):
        ghz_star(2, [1, 2])


def test_two_coloring_linear4():
    c = two_coloring(linear_cluster(4))
    assert c.set_a == frozenset({1, 3})
    assert c.set_b == frozenset({2, 4})


def test_two_coloring_triangle_fails():
    tri = make_graph(3, [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(NotTwoColorableError):
        two_coloring(tri)


def test_two_coloring_star():
    c = two_coloring(ghz_star(1, [2, 3]).graph)
    assert c.set_a == frozenset({1})
    assert c.set_b == frozenset({2, 3})


def test_two_coloring_no_monochromatic_edge():
    for g in ZOO:
        c = two_coloring(g)
        assert c.set_a | c.set_b == frozenset(range(1, g.n + 1))
        assert not c.set_a & c.set_b
        for u, v in g.edges:
            assert (u in c.set_a) != (v in c.set_a)


def test_partition_leaf_target():
    p = partition_for_target(linear_cluster(8), 1)
    assert p.target == 1
    assert p.neighbors == frozenset({2})
    assert p.rest == frozenset(range(3, 9))


def test_partition_interior_target():
    p = partition_for_target(linear_cluster(8), 4)
    assert p.neighbors == frozenset({3, 5})
    assert p.rest == frozenset({1, 2, 6, 7, 8})


def test_partition_grid_corner():
    p = partition_for_target(grid_cluster(3, 4), 1)
    assert p.neighbors == frozenset({2, 5})
    assert len(p.rest) == 9


def test_partition_rejects_bad_target():
    with pytest.raises(ValueError):
        partition_for_target(linear_cluster(4), 5)


def test_partition_covers_all_vertices():
    for g in ZOO:
        full = frozenset(range(1, g.n + 1))
        for t in range(1, g.n + 1):
            p = partition_for_target(g, t)
            assert {p.target} | p.neighbors | p.rest == full
            assert p.target not in p.neighbors
            assert not p.neighbors & p.rest


def test_flip_mask_examples():
    g = linear_cluster(4)
    assert pauli_flip_mask(g, 1, "Z").as_string() == "1000"
    assert pauli_flip_mask(g, 2, "X").as_string() == "1010"
    assert pauli_flip_mask(g, 2, "Y").as_string() == "1110"


def test_flip_mask_composition_everywhere():
    for g in ZOO:
        for v in range(1, g.n + 1):
            x = pauli_flip_mask(g, v, "X").bits
            y = pauli_flip_mask(g, v, "Y").bits
            z = pauli_flip_mask(g, v, "Z").bits
            assert x ^ z == y


def test_flip_mask_rejects_bad_inputs():
    g = linear_cluster(4)
    with pytest.raises(ValueError):
        pauli_flip_mask(g, 5, "Z")
    with pytest.raises(ValueError):
        pauli_flip_mask(g, 1, "W")


def test_make_graph_validation():
    with pytest.raises(ValueError):
        make_graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        make_graph(3, [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        make_graph(3, [(1, 4)])
