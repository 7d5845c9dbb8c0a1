import os
from pathlib import Path

import numpy as np
import pytest
import structlog

from src.entity.models.hypergraph import build_incidence


@pytest.fixture(autouse=True)
def quiet_logging():
    structlog.configure(
        processors=[structlog.processors.JSONRenderer()],
        wrapper_class=structlog.make_filtering_bound_logger(40),
        cache_logger_on_first_use=False,
    )
    yield


@pytest.fixture
def make_graph():
    """Hypergraph over the dense id range; node count defaults to max id + 1."""

    def _make(edges, num_nodes=None):
        if num_nodes is None:
            num_nodes = max((max(e) for e in edges if len(e)), default=-1) + 1
        return build_incidence(edges, num_nodes)

    return _make


@pytest.fixture
def toy_graph(make_graph):
    return make_graph([[0, 1, 2], [0, 1], [1, 2, 3], [3, 4]])


@pytest.fixture
def write_edges(tmp_path):
    """Write edge-list lines to a file under tmp_path and return its path."""

    def _write(lines, name="edges.txt"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def toy_dataset(write_edges):
    return write_edges(["a b c", "a b", "b c d", "d e", "e f a", "c f"])


@pytest.fixture
def block_dataset(write_edges):
    """Two 8-node communities; every hyperedge stays inside one of them."""
    rng = np.random.default_rng(11)
    lines = []
    for block in range(2):
        members = [f"n{block * 8 + i}" for i in range(8)]
        for _ in range(40):
            size = int(rng.integers(2, 5))
            lines.append(" ".join(rng.choice(members, size=size, replace=False)))
    return write_edges(lines, name="blocks.txt")


def discrete_power_law(alpha: float, xmin: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Approximate discrete power-law draws by rounding the continuous inverse CDF."""
    u = rng.random(n)
    return np.floor((xmin - 0.5) * (1.0 - u) ** (-1.0 / (alpha - 1.0)) + 0.5)


@pytest.fixture(scope="session")
def power_law_sample():
    return discrete_power_law


@pytest.fixture
def enron_paths():
    """email-Enron in nverts form from HYPERLAP_DATA_DIR; skipped when not available."""
    data_dir = os.getenv("HYPERLAP_DATA_DIR")
    if not data_dir:
        pytest.skip("HYPERLAP_DATA_DIR is not set")
    prefix = Path(data_dir) / "email-Enron" / "email-Enron"
    nverts = Path(f"{prefix}-nverts.txt")
    simplices = Path(f"{prefix}-simplices.txt")
    if not nverts.exists() or not simplices.exists():
        pytest.skip(f"email-Enron files not found under {data_dir}")
    return [str(nverts), str(simplices)]
