import pytest

from core.errors import InstanceFormatError, PreconditionError, WorkLimitExceeded
from core.graph_core import bfs_all_pairs, is_connected, line_graph
from core.reduction import (
    SAMPLE_INSTANCE,
    SAMPLE_MATCHING,
    ThreeDMInstance,
    build_reduction,
    drs_from_matching,
    edge_distance_class,
    k_threshold,
    lambda_of,
    parse_3dm,
    r_prime,
    random_3dm,
    sd_line_vertex,
    solve_3dm_exhaustive,
    write_3dm,
)
from core.resolving import is_doubly_distance_resolving_on, is_drs_fast

SINGLE = ThreeDMInstance(1, ((0, 0, 0),))


def test_parse_3dm():
    inst = parse_3dm("3dm 1 1\n0 0 0\n")
    assert inst == SINGLE
    assert parse_3dm(write_3dm(SAMPLE_INSTANCE)) == SAMPLE_INSTANCE


@pytest.mark.parametrize("text, line", [
    ("3dm 1 1\n0 0 1\n", 2),
    ("3dm 2 2\n0 0 0\n0 0 0\n", 3),
    ("3dm 1 2\n0 0 0\n", 2),
    ("dm 1 1\n", 1),
])
def test_parse_3dm_errors(text, line):
    with pytest.raises(InstanceFormatError) as exc:
        parse_3dm(text)
    assert exc.value.line == line


def test_lambda():
    assert [lambda_of(t) for t in (1, 2, 3, 4, 5, 7, 8, 9)] == [0, 1, 2, 2, 3, 3, 3, 4]


def test_single_triple_gadget():
    rg = build_reduction(SINGLE, 1)
    assert (rg.tau, rg.lam, rg.K) == (1, 0, 5)
    assert (rg.graph.n, rg.graph.m) == (13, 14)
    assert (rg.i_side, rg.j_side) == (5, 8)
    assert is_connected(rg.graph)


def test_replicated_gadget():
    rg = build_reduction(SINGLE, 2)
    assert (rg.tau, rg.lam, rg.K) == (2, 1, 6)
    assert rg.graph.n == 20
    assert (rg.i_side, rg.j_side) == (7, 13)
    assert rg.sizes["vertices"] == 20
    assert rg.graph.label_of(rg.vertex("a", 0, 1)) == "a0.1"


@pytest.mark.parametrize("N", [1, 2])
def test_gadget_is_bipartite_across_sides(N):
    rg = build_reduction(SAMPLE_INSTANCE, N)
    assert all(u < rg.i_side <= v for u, v in rg.graph.edges)
    n, T = SAMPLE_INSTANCE.n, SAMPLE_INSTANCE.t
    assert rg.i_side == rg.tau + 4 + rg.lam
    assert rg.j_side == 3 * n * N + rg.tau + 4 + rg.lam
    assert rg.tau == N * T


def test_sample_bit_rule():
    rg = build_reduction(SAMPLE_INSTANCE, 1)
    g = rg.graph
    for i, want in enumerate([["s1", "s3", "s5"], ["s2", "s3", "s6"], ["s4", "s5", "s6"]]):
        nbrs = [g.label_of(x) for x in g.neighbors(rg.vertex("d", i))]
        assert [x for x in nbrs if x[1:].isdigit()] == want
        assert "sD" in nbrs and f"d'{i}" in nbrs


def test_k_threshold():
    assert k_threshold(SAMPLE_INSTANCE) == 10
    assert k_threshold(SINGLE) == 5
    assert k_threshold(SINGLE, 2) == 6
    with pytest.raises(PreconditionError):
        k_threshold(SINGLE, 0)
    with pytest.raises(PreconditionError):
        build_reduction(SINGLE, 0)


def test_solve_3dm():
    assert solve_3dm_exhaustive(SAMPLE_INSTANCE) == SAMPLE_MATCHING
    assert solve_3dm_exhaustive(SINGLE) == (0,)
    assert solve_3dm_exhaustive(ThreeDMInstance(2, ((0, 0, 0), (1, 1, 0)))) is None
    with pytest.raises(WorkLimitExceeded):
        solve_3dm_exhaustive(SAMPLE_INSTANCE, work_limit=2)


def test_sample_matching_covers_everything():
    assert SAMPLE_INSTANCE.is_matching(SAMPLE_MATCHING)
    assert not SAMPLE_INSTANCE.is_matching((0, 1, 5))


def test_certificate_on_single_triple():
    rg = build_reduction(SINGLE, 1)
    R = drs_from_matching(rg, [0])
    lg, _ = line_graph(rg.graph)
    assert sorted(lg.label_of(v) for v in R) == sorted(["s0_s'0", "sA_s'A", "sB_s'B", "sC_s'C", "sD_s'D"])
    assert is_drs_fast(bfs_all_pairs(lg), R)


@pytest.mark.parametrize("N", [1, 2])
def test_certificate_on_sample(N):
    rg = build_reduction(SAMPLE_INSTANCE, N)
    R = drs_from_matching(rg, SAMPLE_MATCHING)
    assert len(R) == rg.K == k_threshold(SAMPLE_INSTANCE, N)
    lg, _ = line_graph(rg.graph)
    assert is_drs_fast(bfs_all_pairs(lg), R)


def test_certificate_rejects_bad_matching():
    rg = build_reduction(SAMPLE_INSTANCE, 1)
    with pytest.raises(PreconditionError):
        drs_from_matching(rg, [0, 1, 5])


def test_edge_classes_by_role():
    rg = build_reduction(SINGLE, 1)
    v = rg.vertex
    assert edge_distance_class(rg, (v("sD"), v("s'D"))) == 0
    assert edge_distance_class(rg, (v("a", 0, 0), v("sD"))) == 1
    assert edge_distance_class(rg, (v("sA"), v("a", 0, 0))) == 2
    assert edge_distance_class(rg, (v("s", 0), v("s'", 0))) == 3
    assert edge_distance_class(rg, (v("sA"), v("s'A"))) == 3
    with pytest.raises(PreconditionError):
        edge_distance_class(rg, (v("sA"), v("sB")))


@pytest.mark.parametrize("N", [1, 2])
def test_edge_classes_match_bfs(N):
    rg = build_reduction(SAMPLE_INSTANCE, N)
    lg, _ = line_graph(rg.graph)
    dm = bfs_all_pairs(lg)
    sd = sd_line_vertex(rg)
    for i, e in enumerate(rg.graph.edges):
        assert edge_distance_class(rg, e) == dm(i, sd), rg.graph.label_of(e[0]) + "-" + rg.graph.label_of(e[1])
    assert is_doubly_distance_resolving_on(dm, r_prime(rg), sd)


def test_random_3dm_plants_a_matching():
    inst = random_3dm(3, 6, seed=5)
    assert inst.t == 6
    assert inst == random_3dm(3, 6, seed=5)
    assert solve_3dm_exhaustive(inst) is not None
    with pytest.raises(PreconditionError):
        random_3dm(2, 9, seed=0)
