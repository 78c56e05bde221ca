import pytest

from core.constants import DEFAULT_WORK_LIMIT
from core.errors import PreconditionError
from core.io import load_config, load_settings


@pytest.fixture
def cfg(tmp_path, monkeypatch):
    monkeypatch.delenv("DRS_WORK_LIMIT", raising=False)
    monkeypatch.delenv("DRS_THREADS", raising=False)
    path = tmp_path / "config.yaml"
    path.write_text(
        "defaults:\n"
        "  work_limit: 5000\n"
        "  threads: 2\n"
        "  reduction_copies: 2\n"
        "checks:\n"
        "  seed: 7\n"
        "  tree_formula: {random_trees: 50}\n"
        "  quick:\n"
        "    tree_formula: {random_trees: 5}\n",
        encoding="utf-8",
    )
    return path


def test_missing_config_is_empty(tmp_path):
    assert load_config(tmp_path / "nope.yaml") == {}


def test_yaml_values(cfg):
    s = load_settings(cfg)
    assert (s.work_limit, s.threads, s.reduction_copies) == (5000, 2, 2)
    assert s.worker_threads == 2
    assert s.checks["seed"] == 7


def test_defaults_without_file(tmp_path, monkeypatch):
    monkeypatch.delenv("DRS_WORK_LIMIT", raising=False)
    s = load_settings(tmp_path / "nope.yaml")
    assert s.work_limit == DEFAULT_WORK_LIMIT
    assert s.worker_threads >= 1


def test_environment_beats_yaml(cfg, monkeypatch):
    monkeypatch.setenv("DRS_WORK_LIMIT", "1_000")
    monkeypatch.setenv("DRS_THREADS", "3")
    s = load_settings(cfg)
    assert (s.work_limit, s.threads) == (1000, 3)


def test_arguments_beat_environment(cfg, monkeypatch):
    monkeypatch.setenv("DRS_WORK_LIMIT", "1000")
    s = load_settings(cfg, work_limit=77, threads=1)
    assert (s.work_limit, s.threads) == (77, 1)


def test_bad_values(cfg, monkeypatch):
    monkeypatch.setenv("DRS_THREADS", "many")
    with pytest.raises(PreconditionError):
        load_settings(cfg)
    monkeypatch.delenv("DRS_THREADS")
    with pytest.raises(PreconditionError):
        load_settings(cfg, work_limit=0)


def test_check_param_quick_overrides(cfg):
    s = load_settings(cfg)
    assert s.check_param("tree_formula", "random_trees", 200) == 50
    assert s.check_param("tree_formula", "random_trees", 200, quick=True) == 5
    assert s.check_param("tree_formula", "n_max", 9, quick=True) == 9
