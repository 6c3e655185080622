import random

import numpy as np
import pytest
from hypothesis import strategies as st

from starcanon.graph import Graph


def random_permutation(n, rng):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


@st.composite
def graphs(draw, max_n=7, directed=None):
    n = draw(st.integers(0, max_n))
    is_directed = draw(st.booleans()) if directed is None else directed
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n) if is_directed else range(i + 1, n):
            if i != j and draw(st.booleans()):
                adj[i, j] = 1
                if not is_directed:
                    adj[j, i] = 1
    return Graph(n, adj)


@st.composite
def graphs_with_perm(draw, max_n=7, directed=None):
    g = draw(graphs(max_n, directed))
    return g, tuple(draw(st.permutations(range(g.n))))


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion this test belongs to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    k, title = marker.args
    outcomes = _criteria.setdefault(k, [title])
    if call.when == "call" and call.excinfo is not None:
        outcomes.append(item.name)
    elif call.when == "setup" and call.excinfo is not None:
        outcomes.append(item.name + " (setup)")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        title, *failed = _criteria[k]
        status = "FAIL" if failed else "PASS"
        suffix = f"  [{', '.join(failed)}]" if failed else ""
        terminalreporter.write_line(f"criterion {k}: {status}  {title}{suffix}")
