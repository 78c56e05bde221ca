from pathlib import Path

import pytest

from core.families import example_tree, gen_basic
from core.graph_core import Graph, write_graph
from core.io import load_settings

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def example() -> Graph:
    return example_tree()


@pytest.fixture
def k4() -> Graph:
    return gen_basic("complete", 4)


@pytest.fixture
def p3() -> Graph:
    return gen_basic("path", 3)


@pytest.fixture
def settings(monkeypatch):
    monkeypatch.delenv("DRS_WORK_LIMIT", raising=False)
    monkeypatch.delenv("DRS_THREADS", raising=False)
    return load_settings(ROOT / "config.yaml", threads=1)


@pytest.fixture
def graph_file(tmp_path):
    """Write a Graph to tmp_path/<name> and return the path as a string."""
    def write(g: Graph, name: str = "g.g") -> str:
        path = tmp_path / name
        path.write_text(write_graph(g), encoding="ascii")
        return str(path)
    return write
