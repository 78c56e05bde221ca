import pytest

from core.errors import PreconditionError
from core.families import (
    AkEdge,
    FamilyKind,
    FamilySpec,
    SplitMix64,
    ak_edge,
    ak_edge_labels,
    ak_edges,
    ak_line_vertex,
    ak_m,
    ak_predicted_distance,
    gen_ak,
    gen_basic,
    gen_random_connected,
    gen_random_tree,
    gen_tk,
)
from core.graph_core import bfs_all_pairs, blocks_and_cut_vertices, is_connected, is_tree, line_graph, max_degree


def test_splitmix64_reference_value():
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF


def test_below_stays_in_range():
    rng = SplitMix64(42)
    draws = [rng.below(7) for _ in range(500)]
    assert min(draws) == 0 and max(draws) == 6
    with pytest.raises(PreconditionError):
        rng.below(0)


@pytest.mark.parametrize("kind, n, m", [("path", 5, 4), ("cycle", 5, 5), ("star", 5, 4), ("complete", 5, 10)])
def test_basic_families(kind, n, m):
    g = gen_basic(kind, n)
    assert (g.n, g.m) == (n, m)


def test_star_center_is_zero():
    assert max_degree(gen_basic("star", 6)) == 5
    assert gen_basic("star", 6).degrees[0] == 5


def test_ak_shape():
    g = gen_ak(5)
    assert (g.n, g.m, max_degree(g)) == (12, 16, 5)
    assert ak_m(5) == 3 and ak_m(3) == 2 and ak_m(4) == 3
    # v3 = 0b011 only meets w2
    v3 = g.vertex_of_label("v3")
    assert [g.label_of(x) for x in g.neighbors(v3)] == ["u", "w2"]


def test_tk_shape():
    g = gen_tk(3)
    assert (g.n, g.m, max_degree(g)) == (7, 9, 6)
    assert g.label_of(1) == "x1" and g.label_of(2) == "y1"


def test_random_tree_is_seeded():
    a = gen_random_tree(40, 9)
    assert is_tree(a)
    assert a == gen_random_tree(40, 9)
    assert a != gen_random_tree(40, 10)
    assert gen_random_tree(2, 5).edges == ((0, 1),)


def test_random_connected():
    g = gen_random_connected(8, 6, 11)
    assert g.m == 7 + 6
    assert is_connected(g)
    assert g == gen_random_connected(8, 6, 11)
    assert gen_random_connected(5, 6, 0).m == 10


def test_family_spec():
    spec = FamilySpec.parse("random_tree", n=10, seed=4)
    assert spec.kind is FamilyKind.RANDOM_TREE
    assert spec.describe() == "random_tree n=10 seed=4"
    assert spec.build() == gen_random_tree(10, 4)
    assert FamilySpec.parse("ak", k=3).build() == gen_ak(3)


@pytest.mark.parametrize("kind, params", [
    ("ak", {"k": 1}),
    ("tk", {"k": 0}),
    ("cycle", {"n": 2}),
    ("path", {}),
    ("hypercube", {"n": 3}),
    ("random_connected", {"n": 4, "extra": 4, "seed": 0}),
])
def test_family_spec_rejects(kind, params):
    with pytest.raises(PreconditionError):
        FamilySpec.parse(kind, **params)


def test_ak_edge_descriptors():
    assert ak_edge(4, "w'1", "w1") == AkEdge("ww", i=1)
    assert ak_edge(4, "w0", "v2") == AkEdge("wv", i=0, j=2)
    assert ak_edge(4, "v4", "u") == AkEdge("uv", j=4)
    assert ak_edge_labels(AkEdge("wv", i=0, j=2)) == ("v2", "w0")
    with pytest.raises(PreconditionError):
        ak_edge(4, "w0", "v1")
    with pytest.raises(PreconditionError):
        ak_edge(4, "u", "v5")


def test_ak_distances_match_bfs():
    k = 6
    g = gen_ak(k)
    dm = bfs_all_pairs(line_graph(g)[0])
    edges = ak_edges(k)
    assert len(edges) == g.m
    for e1 in (e for e in edges if e.form == "ww"):
        for e2 in edges:
            assert ak_predicted_distance(k, e1, e2) == dm(ak_line_vertex(g, e1), ak_line_vertex(g, e2))


def test_ak_distance_needs_ww_edge():
    with pytest.raises(PreconditionError):
        ak_predicted_distance(4, AkEdge("uv", j=1), AkEdge("ww", i=0))


def test_example_tree_labels(example):
    assert (example.n, example.m) == (13, 12)
    assert example.label_of(0) == "v1"
    assert is_tree(example)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_tk_blocks_are_triangles_at_u(k):
    dec = blocks_and_cut_vertices(gen_tk(k))
    assert len(dec.blocks) == k
    assert all(len(b) == 3 and 0 in b for b in dec.blocks)
    assert dec.cut_vertices == (0,)
