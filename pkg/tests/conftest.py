import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from vertexmodels.graphs import DirectedMultigraph, Multigraph  # noqa: E402
from vertexmodels.models import random_model  # noqa: E402
from vertexmodels.scalars import Gaussian  # noqa: E402

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")


# --------------------------------------------------------------------------
# Hypothesis strategies


@st.composite
def multigraphs(draw, max_n=5, max_e=6, min_n=0, directed=False):
    n = draw(st.integers(min_n, max_n))
    if n == 0:
        return DirectedMultigraph(0) if directed else Multigraph(0)
    vertex = st.integers(0, n - 1)
    edges = draw(st.lists(st.tuples(vertex, vertex), max_size=max_e))
    return DirectedMultigraph(n, edges) if directed else Multigraph(n, edges)


def exact_scalars(gaussian=False, span=4):
    q = st.builds(Fraction, st.integers(-span, span), st.sampled_from([1, 2, 3]))
    if gaussian:
        return st.builds(Gaussian, q, q)
    return q


@st.composite
def models_st(draw, k=None, cap=12, directed=False, ring=None):
    k = draw(st.integers(1, 3)) if k is None else k
    ring = ring or draw(st.sampled_from(["rational", "gaussian"]))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_model(random.Random(seed), k, cap, ring, span=3, denominators=(1, 2, 3),
                        density=0.8, directed=directed)


# --------------------------------------------------------------------------
# One summary line per acceptance criterion

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config.addinivalue_line("markers", "slow: long-running exhaustive check")


def pytest_runtest_logreport(report):
    item_info = _CRITERIA.get(report.nodeid)
    if item_info is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        item_info["outcome"] = report.outcome


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = {"n": mark.args[0], "title": mark.args[1], "outcome": "not run"}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for info in sorted(_CRITERIA.values(), key=lambda i: i["n"]):
        status = {"passed": "PASS", "failed": "FAIL"}.get(info["outcome"], info["outcome"].upper())
        terminalreporter.write_line(f"criterion {info['n']}: {status}  {info['title']}")


@pytest.fixture
def rng():
    return random.Random(20261016)
