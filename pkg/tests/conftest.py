import numpy as np
import pytest

from gaitgraph.graph import _build, build_complete_digraph
from gaitgraph.learning import synthetic_weights


@pytest.fixture(scope="session")
def g4():
    """Two-limb binary robot: 4 states, 12 primitives."""
    return build_complete_digraph(2, 2)


@pytest.fixture(scope="session")
def g8():
    """Three-limb binary robot: 8 states, 56 primitives."""
    return build_complete_digraph(3, 2)


@pytest.fixture(scope="session")
def g16():
    """Four-limb binary robot: 16 states, 240 primitives."""
    return build_complete_digraph(4, 2)


def complete_graph(n):
    """Complete digraph on n vertices (one n-state limb)."""
    return _build(1, n)


@pytest.fixture(scope="session")
def w4(g4):
    return synthetic_weights(g4, seed=12345)


@pytest.fixture(scope="session")
def w8(g8):
    return synthetic_weights(g8, seed=12345)


def random_cycle_weights(rng, length):
    """Random (p, theta) edge weights for a cycle of the given length."""
    return [
        (rng.uniform(-10, 10, 2), rng.uniform(-0.8, 0.8))
        for _ in range(length)
    ]
