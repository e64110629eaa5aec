"""
Semi-free and block modules: validators, homology, suspension and the base change.
"""
import pytest
from hypothesis import given, settings, strategies as st

from src.algebra.dg_algebra import koszul_tower
from src.modules.dg_module import (BlockDGModule, base_change, check_block_module, expand_to_r_linear,
                                   free_module, homology, is_minimal, make_block_module, make_semifree,
                                   same_module, suspend, validate_block_data, validate_semifree)
from src.modules.presented import cyclic_module
from src.ring.truncated_ring import TruncatedRing
from src.utils.exceptions import DimensionMismatch, SquareNonzero, WindowTooWide
from src.utils.instance_generator import make_rng, planted_complex, random_block_candidate

VALIDATOR_INDICES = [koszul_tower(ring, [ring.t]).indices[0]
                     for ring in (TruncatedRing.prime_field(2, 2), TruncatedRing.prime_field(3, 2))]


@pytest.fixture
def default_lift(f2, tower):
    """alpha(b1) = 0, alpha(b2) = t b1 over R."""
    return make_semifree(tower.algebras[0], {0: 1, 1: 1, 2: 1}, {2: (f2.t,)}, labels=["b0", "b1", "b2"])


@pytest.mark.parametrize("index", VALIDATOR_INDICES, ids=lambda index: str(index.ring))
@given(seed=st.integers(0, 2 ** 32 - 1), count=st.integers(1, 4))
@settings(max_examples=260, deadline=None)
def test_block_validator_matches_square_zero(index, seed, count):
    rng = make_rng(seed)
    candidate = random_block_candidate(index, rng, sorted(int(d) for d in rng.integers(0, 3, size=count)))
    assert validate_block_data(candidate).passed == expand_to_r_linear(candidate).is_complex()


def test_three_step_is_a_complex(three_step):
    assert validate_block_data(three_step).passed
    assert expand_to_r_linear(three_step).is_complex()
    assert three_step.delta_valuation() == 1
    assert three_step.over_b.labels == ("b0", "b1", "b2")


def test_block_round_trip_through_over_b(three_step, index):
    again = BlockDGModule.from_semifree(three_step.over_b, index)
    assert again.alpha == three_step.alpha
    assert again.delta == three_step.delta


def test_bad_block_data_is_rejected(f2, index):
    one, t = f2.one, f2.t
    with pytest.raises(SquareNonzero):
        make_block_module(index, {0: 1, 1: 1, 2: 1}, {1: (one,), 2: (one,)})
    with pytest.raises(DimensionMismatch):
        make_block_module(index, {0: 1, 1: 1}, {1: (t, t)})


def test_homology_of_a_lift(default_lift):
    assert homology(default_lift, (0, 2)) == {0: [2], 1: [1], 2: [1]}
    assert validate_semifree(default_lift).passed
    assert is_minimal(default_lift)


def test_contractible_pair(contractible):
    assert homology(contractible) == {0: [], 1: []}
    assert not is_minimal(contractible)


def test_suspension_shifts_homology(default_lift):
    shifted = suspend(default_lift, 3)
    assert shifted.degrees == (3, 4, 5)
    assert homology(shifted, (3, 5)) == {3: [2], 4: [1], 5: [1]}


def test_base_change_has_no_delta(default_lift, index):
    block = base_change(default_lift, index)
    assert block.delta_valuation() == block.ring.precision
    check_block_module(block)
    assert same_module(block.underlying, default_lift)


def test_base_change_of_r_is_koszul_homology(tower, index):
    block = base_change(free_module(tower.algebras[0]), index)
    assert homology(block, (0, 1)) == {0: [1], 1: [1]}


def test_window_beyond_truncation(f2, tower):
    module = make_semifree(tower.algebras[0], {0: 1}, truncated_at=1)
    assert homology(module) == {0: [2]}
    with pytest.raises(WindowTooWide):
        homology(module, (0, 1))


def test_planted_complex_has_the_homology_of_r(tower):
    module = planted_complex(tower.algebras[0], make_rng(3), pairs=3)
    assert validate_semifree(module).passed
    computed = homology(module)
    assert computed[0] == [2]
    assert all(not inv for n, inv in computed.items() if n != 0)


def test_presented_homology(tower):
    module = cyclic_module(tower.top, 1)
    assert module.homology((0, 1)) == {0: [1], 1: []}
