"""
The lifting loop, uniqueness of lifts, descent of null-homotopies and lifting through a tower.
"""
import pytest
from hypothesis import given, settings, strategies as st

from src.algebra.dg_algebra import koszul_tower, make_algebra
from src.hom.graded_hom import GradedHom, check_isomorphism, hom_differential, identity_hom
from src.hom.ext import SEMIDUALIZING, ZERO, ext_is_zero
from src.lifting.engine import carried_delta, kernel_choice, lift, lift_one_step
from src.lifting.iterated import (base_change_through, descend_null_homotopy, lift_iterated, semidualizing_lift,
                                  shift_equivalent, verify_quasilift)
from src.lifting.uniqueness import (identity_uniqueness, iso_between_lifts, uniqueness_between_lifts,
                                    uniqueness_iso)
from src.modules.dg_module import base_change, free_module, homology, make_semifree, suspend
from src.modules.presented import cyclic_module
from src.ring.truncated_ring import TruncatedRing
from src.utils.exceptions import (Ext1Obstruction, MathematicalObstruction, NotAnIso, NotNullHomotopic,
                                  ObstructionNonzero, ShapeError)
from src.utils.instance_generator import make_rng, planted_block_module, planted_complex, planted_tower_module

F2_CUBED = TruncatedRing.prime_field(2, 3)
F2_SQUARED = TruncatedRing.prime_field(2, 2)
PLANTED_INDEX = koszul_tower(F2_CUBED, [F2_CUBED.t]).indices[0]
OTHER_RINGS = [TruncatedRing.p_adic(3, 2), TruncatedRing.rational(2)]
TWO_VARIABLES = koszul_tower(F2_SQUARED, [F2_SQUARED.t, F2_SQUARED.t])


def _alpha(module):
    """alpha as lists of digit lists, for readable comparisons."""
    return [[c.to_json() for c in v] for v in module.values]


# The three-step example

def test_three_step_default_lift(three_step):
    result = lift(three_step)
    assert _alpha(result.lifted) == [[], [[0, 0]], [[0, 1]]]
    assert len(result.steps) == 1
    assert result.delta_valuations == [1, 2]
    assert [r["solved"] for r in result.transcript] == [True, True]


def test_three_step_other_kernel_choice(three_step):
    result = lift(three_step, perturbation=kernel_choice({1: 2}))
    assert _alpha(result.lifted) == [[], [[0, 1]], [[0, 0]]]


def test_lifts_have_base_change_isomorphic_to_the_input(three_step):
    for choices in ({}, {1: 2}):
        result = lift(three_step, perturbation=kernel_choice(choices))
        check_isomorphism(result.iso, "lift isomorphism")
        check_isomorphism(result.iso_inverse, "inverse")
        assert result.composite_from_steps().values == result.iso.values
        assert verify_quasilift(result.lifted, three_step, three_step.index)


def test_step_record(three_step):
    step = lift_one_step(three_step, 1)
    record = step.record()
    assert record["n"] == 1
    assert record["solved"]
    assert record["delta_valuation"] == 2
    assert len(record["params"]) == 3


def test_stage_numbers_start_at_one(three_step):
    with pytest.raises(ShapeError):
        lift_one_step(three_step, 0)


def test_carried_delta_divides_the_block(unliftable):
    step = lift_one_step(unliftable, 1)
    assert carried_delta(step.next_module, 2) == step.delta
    with pytest.raises(ShapeError):
        carried_delta(unliftable, 3)


def test_unliftable_is_obstructed_at_stage_two(unliftable):
    with pytest.raises(ObstructionNonzero) as info:
        lift(unliftable)
    assert info.value.stage == 2
    assert info.value.witness
    assert [r["solved"] for r in info.value.transcript] == [True, True, False]
    assert isinstance(info.value, MathematicalObstruction)


def test_too_few_stages(unliftable):
    with pytest.raises(ShapeError):
        lift(unliftable, stages=1)


def test_base_change_needs_no_corrections(f2, index):
    module = make_semifree(index.base, {0: 1, 1: 1, 2: 1}, {2: (f2.t,)})
    result = lift(base_change(module, index))
    assert result.steps == ()
    assert result.lifted.values == module.values
    assert result.iso.values == identity_hom(result.base_changed).values


@given(seed=st.integers(0, 2 ** 32 - 1), torsion_pairs=st.integers(0, 1))
@settings(max_examples=100, deadline=None)
def test_base_changes_lift_back_to_themselves(seed, torsion_pairs):
    module = planted_complex(PLANTED_INDEX.base, make_rng(seed), pairs=2, torsion_pairs=torsion_pairs)
    block = base_change(module, PLANTED_INDEX)
    result = lift(block)
    assert result.steps == ()
    assert homology(result.lifted) == homology(module)
    assert verify_quasilift(result.lifted, block, PLANTED_INDEX)


@given(seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=100, deadline=None)
def test_planted_modules_lift(seed):
    ring = PLANTED_INDEX.ring
    planted, block = planted_block_module(PLANTED_INDEX, make_rng(seed), pairs=2)
    assert ext_is_zero(2, block, block).status == ZERO
    result = lift(block)
    for step in result.steps:
        assert step.delta_valuation >= step.stage
    assert all(v >= n for n, v in enumerate(result.delta_valuations))
    assert result.delta_valuations[-1] == ring.precision
    check_isomorphism(result.iso, "lift isomorphism")
    assert verify_quasilift(result.lifted, block, PLANTED_INDEX)
    assert homology(result.lifted) == homology(planted, (result.lifted.min_degree, result.lifted.max_degree))


@pytest.mark.parametrize("ring", OTHER_RINGS, ids=str)
@given(seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=10, deadline=None)
def test_planted_modules_lift_over_other_rings(ring, seed):
    index = koszul_tower(ring, [ring.t]).indices[0]
    planted, block = planted_block_module(index, make_rng(seed), pairs=2)
    result = lift(block)
    check_isomorphism(result.iso, "lift isomorphism")
    assert verify_quasilift(result.lifted, block, index)
    assert homology(result.lifted) == homology(planted, (result.lifted.min_degree, result.lifted.max_degree))


# Uniqueness

def test_identity_uniqueness(three_step):
    lifted = lift(three_step).lifted
    result = identity_uniqueness(lifted, three_step.index)
    assert result.stages == 0
    assert result.local
    assert result.iso.values == identity_hom(lifted).values


def test_two_lifts_of_three_step_are_not_isomorphic(three_step):
    first = lift(three_step)
    second = lift(three_step, perturbation=kernel_choice({1: 2}))
    check_isomorphism(iso_between_lifts(first, second))
    with pytest.raises(Ext1Obstruction) as info:
        uniqueness_between_lifts(first, second)
    assert info.value.stage == 0


@given(seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_planted_lifts_are_unique(seed):
    ring = PLANTED_INDEX.ring
    _, block = planted_block_module(PLANTED_INDEX, make_rng(seed), pairs=2)
    assert ext_is_zero(1, block, block).status == ZERO
    first = lift(block)
    second = lift(block, perturbation=kernel_choice({n: 0 for n in range(1, ring.precision + 1)}))
    result = uniqueness_between_lifts(first, second)
    assert result.stages <= ring.precision
    check_isomorphism(result.iso, "uniqueness map")
    assert result.iso.source is first.lifted
    assert result.iso.target is second.lifted


def test_upsilon_must_be_an_isomorphism(contractible, index):
    block = base_change(contractible, index)
    upsilon = GradedHom(block, block, 0, (block.over_b.generator(0), block.over_b.zero(1)))
    with pytest.raises(NotAnIso):
        uniqueness_iso(contractible, contractible, upsilon)


def test_upsilon_must_start_from_a_base_change(three_step):
    lifted = lift(three_step).lifted
    with pytest.raises(NotAnIso):
        uniqueness_iso(lifted, lifted, identity_hom(three_step))


def test_non_local_algebras_are_flagged(f2):
    zero = (f2.zero, f2.zero)
    algebra = make_algebra(f2, [2], {}, {(0, 1, 0, 1): zero}, [["1", "x"]], "R[x]/(x^2)")
    tower = koszul_tower(f2, [f2.t], algebra)
    result = identity_uniqueness(free_module(algebra), tower.indices[0])
    assert not result.local


# Descent

def test_descent_of_a_contractible_identity(contractible, index):
    f = identity_hom(contractible)
    eta = descend_null_homotopy(f, index)
    assert eta.degree == 1
    assert hom_differential(eta).values == f.values


def test_descent_refuses_essential_cycles(f2, tower, index):
    module = free_module(tower.algebras[0])
    with pytest.raises(NotNullHomotopic):
        descend_null_homotopy(identity_hom(module), index)
    with pytest.raises(NotNullHomotopic):
        descend_null_homotopy(identity_hom(module).scale(f2.t), index)


@given(seed=st.integers(0, 2 ** 32 - 1), torsion_pairs=st.integers(0, 1))
@settings(max_examples=60, deadline=None)
def test_ext2_vanishing_descends_to_the_lift(seed, torsion_pairs):
    _, block = planted_block_module(PLANTED_INDEX, make_rng(seed), pairs=2, torsion_pairs=torsion_pairs)
    if ext_is_zero(2, block, block).status != ZERO:
        return
    lifted = lift(block).lifted
    assert ext_is_zero(2, lifted, lifted).status == ZERO


def test_descent_needs_an_a_linear_map(three_step, index):
    with pytest.raises(TypeError):
        descend_null_homotopy(identity_hom(three_step), index)


# Towers

def test_lift_through_two_variables(f2):
    tower = koszul_tower(f2, [f2.t, f2.t])
    module = free_module(tower.top)
    result = lift_iterated(module, tower, record_ext=True)
    assert result.complex.degrees == (0,)
    assert result.complex.algebra is tower.algebras[0]
    assert [r["variable"] for r in result.transcript] == [2, 1]
    assert set(result.ext_status) == {1, 2}
    assert verify_quasilift(result.complex, module, tower)
    assert base_change_through(result.complex, tower).degrees == (0,)


@given(seed=st.integers(0, 2 ** 32 - 1), pairs=st.integers(1, 2))
@settings(max_examples=20, deadline=None)
def test_planted_towers_lift(seed, pairs):
    _, module = planted_tower_module(TWO_VARIABLES, make_rng(seed), pairs=pairs)
    result = lift_iterated(module, TWO_VARIABLES)
    assert result.complex.algebra is TWO_VARIABLES.algebras[0]
    assert verify_quasilift(result.complex, module, TWO_VARIABLES)


def test_residue_field_is_obstructed(tower):
    with pytest.raises(ObstructionNonzero) as info:
        lift_iterated(cyclic_module(tower.top, 1), tower, (0, 3))
    assert info.value.variable == 1
    assert info.value.stage == 2


def test_semidualizing_lift_of_the_algebra(f2):
    tower = koszul_tower(f2, [f2.t, f2.t])
    result = semidualizing_lift(free_module(tower.top), tower)
    assert result.lifted_report.status == SEMIDUALIZING
    assert result.agrees
    assert result.to_dict()["agrees"]


def test_shift_equivalence(f2, tower):
    module = make_semifree(tower.algebras[0], {0: 1, 1: 1, 2: 1}, {2: (f2.t,)})
    assert shift_equivalent(module, suspend(module, 2)) == 2
    assert shift_equivalent(module, module) == 0
    assert shift_equivalent(module, free_module(tower.algebras[0])) is None
