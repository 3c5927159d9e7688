"""
Shared fixtures: small named graphs and a graph-file writer
"""

import pytest

from geomt.constructions import gen_standard
from geomt.io import serialize_graph


@pytest.fixture
def petersen():
    return gen_standard("petersen")


@pytest.fixture
def k4():
    return gen_standard("complete", 4)


@pytest.fixture
def square():
    return gen_standard("cycle", 4)


@pytest.fixture
def path4():
    return gen_standard("path", 4)


@pytest.fixture
def write_graph(tmp_path):
    """Write a graph to tmp_path/<name>.txt and return the path as a string"""

    def _write(name, g, directory=None):
        target = (directory or tmp_path) / f"{name}.txt"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(serialize_graph(g), encoding="utf-8")
        return str(target)

    return _write
