"""
Koszul algebras, the block algebra K(t) tensor A and the axiom checker.
"""
import pytest

from src.algebra.dg_algebra import (algebra_homology, check_h0_reduction, koszul_algebra,
                                    koszul_identification, koszul_tower, make_algebra, tensor_with_koszul,
                                    validate_algebra)
from src.ring.linalg import RMatrix
from src.ring.truncated_ring import TruncatedRing
from src.utils.exceptions import RingMismatch


@pytest.mark.parametrize("count,ranks", [(0, (1,)), (1, (1, 1)), (2, (1, 2, 1)), (3, (1, 3, 3, 1))])
def test_koszul_algebras_are_valid(f2_cubed, count, ranks):
    ring = f2_cubed
    elements = [ring.t_power(1 + k % 2) for k in range(count)]
    algebra = koszul_algebra(ring, elements)
    assert validate_algebra(algebra).passed
    assert algebra.ranks == ranks


@pytest.mark.parametrize("ring", [TruncatedRing.prime_field(3, 2), TruncatedRing.p_adic(3, 2),
                                  TruncatedRing.rational(2)], ids=str)
def test_block_construction_matches_koszul(ring):
    assert koszul_identification(ring, [ring.t])
    assert koszul_identification(ring, [ring.t, ring.parse("1+t")])


def test_tower_levels_are_valid_and_reduce_h0(f2):
    tower = koszul_tower(f2, [f2.t, f2.t])
    assert tower.length == 2
    for algebra in tower.algebras:
        assert validate_algebra(algebra).passed
    for k, index in enumerate(tower.indices):
        assert index.block is tower.algebras[k + 1]
        assert check_h0_reduction(index, index.block)


def test_block_layout(f2, index):
    block = index.block
    assert block.ranks == (1, 1)
    assert index.locate(1, 0) == ("upper", 0, 0)
    assert index.locate(0, 0) == ("lower", 0, 0)
    assert block.basis_label(1, 0) == "e*1"


def test_homology_of_koszul_on_t(f2):
    algebra = koszul_algebra(f2, [f2.t])
    assert algebra_homology(algebra, 0) == [1]
    assert algebra_homology(algebra, 1) == [1]


def test_koszul_on_a_unit_is_acyclic(f2):
    algebra = koszul_algebra(f2, [f2.one])
    assert algebra_homology(algebra, 0) == []
    assert algebra_homology(algebra, 1) == []


def test_nonsquare_zero_differential_is_reported(f2):
    differential = {1: RMatrix.from_rows(f2, [[f2.t]]), 2: RMatrix.from_rows(f2, [[f2.one]])}
    algebra = make_algebra(f2, [1, 1, 1], differential, {})
    report = validate_algebra(algebra)
    assert not report.passed
    assert "differential_squares_to_zero" in [c.name for c in report.failures()]
    assert report.to_dict()["differential_squares_to_zero"]["witness"] == [2]


def test_non_local_degree_zero_part(f2):
    """A_0 = R[x]/(x^2) is a valid algebra and tensors like any other."""
    zero = (f2.zero, f2.zero)
    algebra = make_algebra(f2, [2], {}, {(0, 1, 0, 1): zero}, [["1", "x"]], "R[x]/(x^2)")
    assert validate_algebra(algebra).passed
    block, index = tensor_with_koszul(algebra, f2.t)
    assert block.ranks == (2, 2)
    assert validate_algebra(block).passed


def test_foreign_koszul_element(f2):
    other = TruncatedRing.prime_field(3, 2)
    with pytest.raises(RingMismatch):
        koszul_algebra(f2, [other.t])
