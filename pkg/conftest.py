"""
Shared fixtures: small rings, Koszul towers and the hand-checked block modules.
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.algebra.dg_algebra import koszul_tower
from src.modules.dg_module import make_block_module, make_semifree
from src.ring.truncated_ring import TruncatedRing
from src.utils.instance_generator import make_rng


@pytest.fixture
def f2():
    return TruncatedRing.prime_field(2, 2)


@pytest.fixture
def f2_cubed():
    return TruncatedRing.prime_field(2, 3)


@pytest.fixture
def tower(f2):
    """R -> K(t) over F2[t]/(t^2)."""
    return koszul_tower(f2, [f2.t])


@pytest.fixture
def index(tower):
    return tower.indices[0]


@pytest.fixture
def three_step(f2, index):
    """b0, b1, b2 in degrees 0..2 with alpha(b1) = t b0, alpha(b2) = t b1, delta(b2) = t b0."""
    t = f2.t
    return make_block_module(index, {0: 1, 1: 1, 2: 1}, {1: (t,), 2: (t,)}, {2: (t,)},
                             labels=["b0", "b1", "b2"])


@pytest.fixture
def unliftable(f2, index):
    """b0 in degree 0 and b2 in degree 2 with delta(b2) = t b0."""
    return make_block_module(index, {0: 1, 2: 1}, None, {1: (f2.t,)}, labels=["b0", "b2"])


@pytest.fixture
def contractible(f2, tower):
    """x <- y over R."""
    return make_semifree(tower.algebras[0], {0: 1, 1: 1}, {1: (f2.one,)}, labels=["x", "y"])


@pytest.fixture
def rng():
    return make_rng(7)
