import os
import random

import pytest

from crystal.canon import decode
from crystal.graphs import ColouredGraph, is_connected
from crystal.io_formats import ensure_catalogue

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CACHE = os.environ.get("CRYSTAL_CACHE") or os.path.join(ROOT, "var", "catalogues")


@pytest.fixture(scope="session")
def cache_dir():
    os.makedirs(CACHE, exist_ok=True)
    return CACHE


@pytest.fixture(scope="session")
def catalogues(cache_dir):
    """Catalogues for 2p = 2..20; higher orders are built by the acceptance
    suite and shared through the same cache directory."""
    return {
        tp: ensure_catalogue(tp, directory=cache_dir, threads=2)
        for tp in range(2, 21, 2)
    }


@pytest.fixture(scope="session")
def m14(catalogues):
    return decode(catalogues[14].non_bipartite_codes[0])


@pytest.fixture(scope="session")
def m16(catalogues):
    return decode(catalogues[16].non_bipartite_codes[0])


def random_matching(order, rng):
    verts = list(range(1, order + 1))
    rng.shuffle(verts)
    return [(verts[i], verts[i + 1]) for i in range(0, order, 2)]


def random_coloured_graph(n, order, rng, connected=True):
    """A random properly coloured (n+1)-regular graph."""
    while True:
        pairs = [random_matching(order, rng) for _ in range(n + 1)]
        g = ColouredGraph.from_pairs(n, order, pairs)
        if not connected or is_connected(g):
            return g


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
