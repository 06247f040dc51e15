import itertools

import numpy as np
import pytest

from pcentered.generators import gnp
from pcentered.graph import Graph


def atlas_graphs(max_n):
    """All non-isomorphic graphs with 1..max_n vertices (max_n <= 7)."""
    import networkx as nx

    out = []
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= max_n:
            out.append(Graph(h.number_of_nodes(), list(h.edges())))
    return out


def random_graphs(count, n_lo, n_hi, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        q = float(rng.uniform(0.15, 0.75))
        out.append(gnp(n, q, int(rng.integers(0, 2**63))))
    return out


def random_colorings(n, count, rng, max_k=None):
    from pcentered.centered import Coloring

    out = []
    for _ in range(count):
        k = int(rng.integers(1, (max_k or n) + 1))
        out.append(Coloring(tuple(int(c) for c in rng.integers(0, k, n)), k))
    return out


def all_colorings(n, k):
    from pcentered.centered import Coloring

    for cols in itertools.product(range(k), repeat=n):
        yield Coloring(cols, k)


@pytest.fixture(scope="session")
def small_atlas():
    return atlas_graphs(6)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(criterion, ok, detail=""):
        ACCEPTANCE[criterion] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[crit]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}: {detail}")
