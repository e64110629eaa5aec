"""
Hom complexes, null-homotopies, Ext vanishing, homothety and resolutions.
"""
import itertools

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from src.algebra.dg_algebra import koszul_tower
from src.hom.ext import INCONCLUSIVE, NO, NONZERO, SEMIDUALIZING, ZERO, ext_is_zero, homothety_check
from src.hom.graded_hom import (GradedHom, base_change_hom, compose, hom_differential, hom_slice, identity_hom,
                                is_cycle, is_isomorphism, null_homotopy)
from src.hom.resolution import resolution_agrees, semi_free_resolution
from src.modules.dg_module import base_change, free_module, make_semifree
from src.modules.presented import cyclic_module
from src.ring.linalg import vec_add, vec_scale, zero_vector
from src.ring.truncated_ring import TruncatedRing
from src.utils.exceptions import NotACycle, NotNullHomotopic, WindowExhausted
from src.utils.instance_generator import (apply_transvections, make_rng, planted_complex, random_hom,
                                          random_transvections)

F2 = TruncatedRing.prime_field(2, 2)
BASE = koszul_tower(F2, [F2.t]).algebras[0]


@pytest.fixture
def default_lift(f2, tower):
    return make_semifree(tower.algebras[0], {0: 1, 1: 1, 2: 1}, {2: (f2.t,)}, labels=["b0", "b1", "b2"])


def _all_homs(module, degree):
    homs = hom_slice(module, module, degree)
    for params in itertools.product(module.ring.elements(), repeat=homs.size):
        yield homs.to_hom(params)


@pytest.mark.parametrize("name", ["default_lift", "contractible"])
def test_null_homotopy_agrees_with_enumeration(request, name):
    module = request.getfixturevalue(name)
    homotopies = list(_all_homs(module, 1))
    for f in _all_homs(module, 0):
        if not is_cycle(f):
            continue
        exists = any(hom_differential(s).values == f.values for s in homotopies)
        try:
            s = null_homotopy(f)
        except NotNullHomotopic:
            assert not exists
        else:
            assert exists
            assert hom_differential(s).values == f.values


def _key(vector):
    return tuple(tuple(c.to_json()) for c in vector)


@given(seed=st.integers(0, 2 ** 32 - 1), degree=st.sampled_from([-1, -2]), pairs=st.integers(0, 1))
@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
def test_random_cycles_against_brute_force(seed, degree, pairs):
    rng = make_rng(seed)
    module = planted_complex(BASE, rng, pairs=pairs, torsion_pairs=1)
    module = apply_transvections(module, random_transvections(module, rng, 2))
    cycles = hom_slice(module, module, degree)
    homotopies = hom_slice(module, module, degree + 1)
    assume(0 < cycles.size <= 12 and homotopies.size <= 5)

    boundaries = {_key(homotopies.matrix.apply(x)) for x in itertools.product(F2.elements(), repeat=homotopies.size)}
    candidates = [cycles.params_of(hom_differential(random_hom(module, module, degree + 1, rng)))]
    for _ in range(2):
        combo = zero_vector(F2, cycles.size)
        for generator in cycles.kernel():
            combo = vec_add(combo, vec_scale(F2.random_element(rng), generator))
        candidates.append(combo)

    for params in candidates:
        f = cycles.to_hom(params)
        assert is_cycle(f)
        try:
            s = null_homotopy(f)
        except NotNullHomotopic:
            assert _key(params) not in boundaries
        else:
            assert _key(params) in boundaries
            assert hom_differential(s).values == f.values


def test_null_homotopy_needs_a_cycle(contractible):
    f = GradedHom(contractible, contractible, 0, (contractible.generator(0), contractible.zero(1)))
    assert not is_cycle(f)
    with pytest.raises(NotACycle):
        null_homotopy(f)


def test_hom_differential_squares_to_zero(default_lift, rng):
    for degree in (-1, 0, 1):
        f = random_hom(default_lift, default_lift, degree, rng)
        assert hom_differential(hom_differential(f)).is_zero()


def test_slice_matrix_is_the_hom_differential(default_lift):
    homs = hom_slice(default_lift, default_lift, 0)
    below = hom_slice(default_lift, default_lift, -1)
    for params in itertools.product(default_lift.ring.elements(), repeat=homs.size):
        f = homs.to_hom(params)
        assert below.params_of(hom_differential(f)) == homs.matrix.apply(params)


def test_base_change_of_a_chain_map(default_lift, index):
    block = base_change(default_lift, index)
    f = identity_hom(default_lift).scale(default_lift.ring.t)
    lifted = base_change_hom(f, index, block, block)
    assert lifted.linearity == "B"
    assert is_cycle(lifted)
    identity = base_change_hom(identity_hom(default_lift), index, block, block)
    assert is_isomorphism(identity)
    assert compose(identity, lifted).values == lifted.values


def test_ext_of_a_base_change_vanishes(tower, index):
    block = base_change(free_module(tower.algebras[0]), index)
    assert ext_is_zero(2, block, block).status == ZERO
    assert ext_is_zero(1, block, block).status == ZERO


def test_ext2_of_three_step_is_nonzero(three_step):
    report = ext_is_zero(2, three_step, three_step)
    assert report.status == NONZERO
    assert report.invariants == (1,)
    assert report.witness
    assert report.to_dict()["status"] == "nonzero"


def test_ext_of_truncated_source_is_inconclusive(f2, tower):
    module = make_semifree(tower.algebras[0], {0: 1}, truncated_at=1)
    report = ext_is_zero(1, module, module)
    assert report.status == INCONCLUSIVE
    assert report.reason


def test_homothety(tower):
    base = tower.algebras[0]
    assert homothety_check(free_module(base)).status == SEMIDUALIZING
    assert homothety_check(free_module(tower.top)).status == SEMIDUALIZING
    report = homothety_check(make_semifree(base, {0: 2}))
    assert report.status == NO
    assert report.degree == 0


def test_resolution_of_the_residue_field(tower):
    module = cyclic_module(tower.top, 1)
    result = semi_free_resolution(module, (0, 3))
    assert result.betti_numbers() == {0: 1, 2: 1, 4: 1}
    assert not result.complete
    assert result.module.truncated_at == 4
    assert resolution_agrees(result, module)
    with pytest.raises(WindowExhausted):
        result.require_complete()


def test_resolution_in_block_form(tower, index):
    result = semi_free_resolution(cyclic_module(tower.top, 1), (0, 3), index=index)
    block = result.module
    assert block.degrees == (0, 2, 4)
    assert all(all(c.is_zero() for c in a) for a in block.alpha)
    assert block.delta_valuation() == 1


def test_resolution_of_a_free_module_is_itself(tower):
    module = free_module(tower.top)
    result = semi_free_resolution(module, require_complete=True)
    assert result.module is module
    assert result.complete
