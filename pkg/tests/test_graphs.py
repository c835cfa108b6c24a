"""Levelled input graphs: generators, statistics, gluing."""

import json
import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbow import graphs as gr
from rainbow.graphs import GraphError, LevelledGraph


def to_nx(g: LevelledGraph) -> nx.Graph:
    out = nx.Graph()
    for i, l in enumerate(g.levels):
        out.add_node(i, level=l)
    out.add_edges_from(g.edges)
    return out


def isomorphic(g1: LevelledGraph, g2: LevelledGraph) -> bool:
    return nx.is_isomorphic(
        to_nx(g1), to_nx(g2), node_match=lambda a, b: a["level"] == b["level"]
    )


# -- validation ----------------------------------------------------------------


def test_rejects_self_loop_duplicate_and_same_level_edges():
    with pytest.raises(GraphError):
        LevelledGraph([0, 1], [(0, 0)])
    with pytest.raises(GraphError):
        LevelledGraph([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        LevelledGraph([0, 0], [(0, 1)])
    with pytest.raises(GraphError):
        LevelledGraph([0, 2], [])


# -- generators ------------------------------------------------------------------


def test_cycle_4():
    g = gr.make_cycle(4)
    assert g.level_counts() == (2, 2)
    assert g.n_edges == 4
    assert gr.girth(g) == 4
    assert g.degrees() == [2, 2, 2, 2]


def test_cycle_6_and_8():
    assert gr.girth(gr.make_cycle(6)) == 6
    g8 = gr.make_cycle(8)
    assert g8.n_vertices == 8 and g8.n_edges == 8


@pytest.mark.parametrize("bad", [3, 2, 0, -4, 5])
def test_cycle_rejects_bad_lengths(bad):
    with pytest.raises(GraphError):
        gr.make_cycle(bad)


def test_figure_eight_shape():
    g = gr.make_figure_eight()
    assert g.n_vertices == 7 and g.n_edges == 8
    assert g.level_counts() == (4, 3)
    degs = g.degrees()
    four = [v for v, d in enumerate(degs) if d == 4]
    assert len(four) == 1 and g.levels[four[0]] == 1
    assert all(d in (2, 4) for d in degs)
    assert gr.circuit_rank(g) == 2
    assert gr.girth(g) == 4


def test_figure_eight_is_a_glued_cycle_pair():
    two = gr.disjoint_union(gr.make_cycle(4), gr.make_cycle(4))
    glued, record = gr.glue(two, 1, 5)
    assert isomorphic(glued, gr.make_figure_eight())
    assert record.level == 1 and not record.merged_parallel


def test_complete_bipartite():
    g = gr.make_complete_bipartite(4, 4)
    assert g.n_edges == 16
    assert gr.circuit_rank(g) == 9
    assert gr.girth(g) == 4
    assert gr.make_complete_bipartite(1, 1).n_edges == 1
    assert gr.circuit_rank(gr.make_complete_bipartite(1, 1)) == 0
    assert isomorphic(gr.make_complete_bipartite(2, 2), gr.make_cycle(4))
    with pytest.raises(GraphError):
        gr.make_complete_bipartite(0, 3)


# -- statistics -------------------------------------------------------------------


def test_circuit_rank_counts_components():
    one = gr.make_cycle(4)
    assert gr.circuit_rank(one) == 1
    assert gr.circuit_rank(gr.disjoint_union(one, gr.make_cycle(6))) == 2


def test_girth_of_tree_is_infinite():
    tree = LevelledGraph([0, 1, 0], [(0, 1), (1, 2)])
    assert gr.girth(tree) == math.inf


@given(st.integers(2, 5), st.integers(2, 5))
def test_girth_matches_networkx(a, b):
    g = gr.make_complete_bipartite(a, b)
    assert gr.girth(g) == nx.girth(to_nx(g))


def test_even_degree_census():
    assert gr.is_all_even_degree(gr.make_figure_eight())
    assert gr.is_all_even_degree(gr.make_complete_bipartite(4, 4))
    path = LevelledGraph([0, 1, 0], [(0, 1), (1, 2)])
    assert not gr.is_all_even_degree(path)


# -- cycle decomposition ------------------------------------------------------------


def check_partition(g: LevelledGraph, walks) -> None:
    used = []
    for walk in walks:
        assert walk[0] == walk[-1]
        for a, b in zip(walk, walk[1:]):
            assert (min(a, b), max(a, b)) in set(g.edges)
            used.append((min(a, b), max(a, b)))
    assert sorted(used) == sorted(g.edges)  # exact partition, no repeats


def test_cycle_decomposition_figure_eight():
    g = gr.make_figure_eight()
    walks = gr.cycle_decomposition(g)
    assert sorted(len(w) - 1 for w in walks) == [4, 4]
    check_partition(g, walks)


def test_cycle_decomposition_of_cycle_is_itself():
    g = gr.make_cycle(6)
    walks = gr.cycle_decomposition(g)
    assert len(walks) == 1 and len(walks[0]) == 7
    check_partition(g, walks)


def test_cycle_decomposition_complete_bipartite():
    g = gr.make_complete_bipartite(4, 4)
    walks = gr.cycle_decomposition(g)
    assert sorted(len(w) - 1 for w in walks) == [8, 8]
    check_partition(g, walks)


def test_cycle_decomposition_rejects_odd_degree():
    path = LevelledGraph([0, 1, 0], [(0, 1), (1, 2)])
    with pytest.raises(GraphError) as err:
        gr.cycle_decomposition(path)
    assert err.value.vertex == 0


@given(st.lists(st.sampled_from([4, 6, 8]), min_size=1, max_size=3), st.randoms())
def test_cycle_decomposition_partitions_glued_unions(lengths, rnd):
    g = gr.make_cycle(lengths[0])
    for length in lengths[1:]:
        g = gr.disjoint_union(g, gr.make_cycle(length))
        pool = [
            (k, r)
            for k in range(g.n_vertices)
            for r in range(g.n_vertices)
            if k != r
            and g.levels[k] == g.levels[r]
            and k not in g.neighbours(r)
        ]
        if pool and rnd.random() < 0.7:
            k, r = rnd.choice(pool)
            g, _ = gr.glue(g, k, r)
    if gr.is_all_even_degree(g):
        check_partition(g, gr.cycle_decomposition(g))


# -- gluing ---------------------------------------------------------------------------


def test_glue_neighbourhood_union():
    two = gr.disjoint_union(gr.make_cycle(4), gr.make_cycle(4))
    before = set(two.neighbours(1)) | set(two.neighbours(5))
    glued, record = gr.glue(two, 1, 5)

    def shift(v):
        return v if v < 5 else v - 1

    assert set(glued.neighbours(1)) == {shift(v) for v in before}
    assert record.moved_neighbours == (4, 6)


def test_glue_rejects_unequal_levels_and_bad_ids():
    g = gr.make_cycle(4)
    with pytest.raises(GraphError):
        gr.glue(g, 0, 1)  # levels 0 and 1
    with pytest.raises(GraphError):
        gr.glue(g, 0, 0)
    with pytest.raises(GraphError):
        gr.glue(g, 0, 9)


def test_glue_merges_parallel_edges_with_flag():
    g = gr.make_complete_bipartite(2, 2)
    glued, record = gr.glue(g, 0, 1)
    assert record.merged_parallel
    assert glued.n_edges == 2  # two parallel pairs collapsed
    with pytest.raises(GraphError):
        gr.undo_glue(glued, record)


def test_glue_then_undo_is_identity():
    two = gr.disjoint_union(gr.make_cycle(4), gr.make_cycle(6))
    for keep, remove in [(1, 5), (0, 4), (3, 9)]:
        glued, record = gr.glue(two, keep, remove)
        assert gr.undo_glue(glued, record) == two


def test_glue_order_independence():
    three = gr.disjoint_union(
        gr.disjoint_union(gr.make_cycle(4), gr.make_cycle(4)), gr.make_cycle(4)
    )
    # merge level-1 vertices across components in two different orders
    first, _ = gr.glue(three, 1, 5)
    a, _ = gr.glue(first, 1, 8)  # original vertex 9 shifted down once
    second, _ = gr.glue(three, 5, 9)
    b, _ = gr.glue(second, 1, 5)
    assert isomorphic(a, b)


# -- ungluing ----------------------------------------------------------------------------


def test_unglue_splits_figure_eight():
    g = gr.make_figure_eight()
    hub = next(v for v, d in enumerate(g.degrees()) if d == 4)
    incident = [e for e in g.edges if hub in e]
    split = gr.unglue(g, hub, incident[:2])
    two = gr.disjoint_union(gr.make_cycle(4), gr.make_cycle(4))
    # one of the three 2-edge splits separates the squares; try them all
    candidates = [
        gr.unglue(g, hub, [incident[i], incident[j]])
        for i in range(4)
        for j in range(i + 1, 4)
    ]
    assert any(isomorphic(c, two) for c in candidates)
    assert split.n_vertices == 8 and split.n_edges == 8


def test_unglue_with_no_edges_adds_isolated_vertex():
    g = gr.make_cycle(4)
    out = gr.unglue(g, 1, [])
    assert out.n_vertices == 5
    assert out.edges == g.edges
    assert out.levels[4] == g.levels[1]


def test_unglue_rejects_foreign_edges():
    g = gr.make_cycle(4)
    with pytest.raises(GraphError):
        gr.unglue(g, 0, [(1, 2)])


# -- serialization ---------------------------------------------------------------------------


def test_json_round_trip(tmp_path):
    g = gr.make_figure_eight()
    path = tmp_path / "g.json"
    gr.save_graph(g, path)
    assert gr.load_graph(path) == g
    doc = json.loads(path.read_text())
    assert {"vertices", "edges"} <= set(doc)


def test_load_remaps_sparse_ids():
    doc = {
        "vertices": [{"id": 10, "level": 0}, {"id": 3, "level": 1}],
        "edges": [[10, 3]],
    }
    g = gr.from_json_dict(doc)
    assert g.n_vertices == 2
    assert g.edges == ((0, 1),)
    assert g.levels == (1, 0)  # id 3 sorts first


def test_load_rejects_duplicates_and_missing():
    with pytest.raises(GraphError):
        gr.from_json_dict(
            {"vertices": [{"id": 0, "level": 0}, {"id": 0, "level": 1}], "edges": []}
        )
    with pytest.raises(GraphError):
        gr.from_json_dict({"vertices": [{"id": 0, "level": 0}], "edges": [[0, 1]]})


def test_parse_factor_shorthands(tmp_path):
    assert gr.parse_factor("cycle:6") == gr.make_cycle(6)
    assert gr.parse_factor("fig8") == gr.make_figure_eight()
    assert gr.parse_factor("kbip:2,3") == gr.make_complete_bipartite(2, 3)
    path = tmp_path / "g.json"
    gr.save_graph(gr.make_cycle(4), path)
    assert gr.parse_factor(str(path)) == gr.make_cycle(4)
    with pytest.raises(GraphError):
        gr.parse_factor("mystery:9")
