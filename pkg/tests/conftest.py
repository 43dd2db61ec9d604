import numpy as np
import pytest

from pkgroles import _kernels
from pkgroles.graph import DependencyGraph

ACCEPTANCE_RESULTS = []

# edge a -> b reads "a depends on b"; Figs 1 and 2 share one drawing
FIG12_EDGES = [("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"), ("c", "f")]
FIG3_EDGES = [("a", "n2"), ("a", "n3"), ("b", "n1"), ("b", "n2"), ("b", "n3"), ("c", "n3")]


@pytest.fixture
def fig1():
    return DependencyGraph.from_label_edges(FIG12_EDGES)


@pytest.fixture
def fig2():
    return DependencyGraph.from_label_edges(FIG12_EDGES)


@pytest.fixture
def fig3():
    return DependencyGraph.from_label_edges(FIG3_EDGES)


@pytest.fixture(params=sorted(_kernels.available_backends()))
def kernels(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _kernels.available_backends()[request.param]
    for name in ("predecessor_pairs", "pam_build", "pam_swap"):
        monkeypatch.setattr(_kernels, name, getattr(mod, name))
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
