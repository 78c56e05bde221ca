import pytest

from core.experiments import (
    CHECKS,
    check_ak_distances,
    check_clique_lemma,
    check_line_tree_blocks,
    check_tk_family,
    connected_graphs,
    run_checks,
    summarize,
    triangle_census,
)


def test_connected_graph_counts():
    assert sum(1 for _ in connected_graphs(3)) == 4
    assert sum(1 for _ in connected_graphs(4)) == 38


def test_triangle_census():
    drs, bad = triangle_census(2)
    assert drs > 0
    assert bad == 0


def test_clique_lemma(settings):
    df = check_clique_lemma(settings, quick=True)
    assert len(df) == sum(2 ** n for n in range(2, 7))
    assert df["match"].all()


def test_tk_family(settings):
    df = check_tk_family(settings, quick=True)
    assert df["match"].all()
    assert df.loc[df["k"] == 3, "psi"].iloc[0] == 6


def test_ak_distances(settings):
    df = check_ak_distances(settings, quick=True)
    assert df["match"].all()
    assert set(df["instance"]) >= {"A_4", "A_6", "A_2 labels", "A_3 labels"}


def test_line_tree_blocks(settings):
    df = check_line_tree_blocks(settings, quick=True)
    assert len(df) == 10
    assert df["match"].all()


def test_run_checks_and_summary(settings):
    results = run_checks(["clique_lemma", "ak_family"], settings, quick=True)
    assert list(results) == ["clique_lemma", "ak_family"]
    assert results["ak_family"]["psi"].tolist() == [2, 2, 3, 3]
    summary = summarize(results)
    assert list(summary.columns) == ["check", "instances", "mismatches", "seconds"]
    assert summary["mismatches"].sum() == 0
    assert (summary["seconds"] >= 0).all()


def test_unknown_check(settings):
    with pytest.raises(KeyError):
        run_checks(["no_such_check"], settings)


@pytest.mark.slow
@pytest.mark.parametrize("name", list(CHECKS))
def test_every_check_passes_in_quick_mode(settings, name):
    df = run_checks([name], settings, quick=True)[name]
    assert len(df) > 0
    assert df["match"].all(), df[~df["match"].astype(bool)].to_string()
