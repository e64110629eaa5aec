"""
Truncated ring arithmetic and the Smith-form solver.
"""
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.ring.linalg import (RMatrix, in_span, is_invertible, kernel_generators, matrix_inverse,
                             module_invariants, solve_linear, vec_is_zero)
from src.ring.truncated_ring import TruncatedRing, invert
from src.utils.exceptions import NoSolution, NotAUnit, RingMismatch

F3 = TruncatedRing.prime_field(3, 3)
Z5 = TruncatedRing.p_adic(5, 3)
Q = TruncatedRing.rational(3)
F2 = TruncatedRing.prime_field(2, 2)


def elements_of(ring):
    if ring.is_finite:
        digits = st.lists(st.integers(0, ring.p - 1), min_size=ring.precision, max_size=ring.precision)
    else:
        digits = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                          min_size=ring.precision, max_size=ring.precision)
    return digits.map(ring.element)


def matrices_of(ring, max_rows=3, max_cols=3):
    @st.composite
    def build(draw):
        rows = draw(st.integers(1, max_rows))
        cols = draw(st.integers(1, max_cols))
        entries = draw(st.lists(st.lists(elements_of(ring), min_size=cols, max_size=cols),
                                min_size=rows, max_size=rows))
        return RMatrix.from_rows(ring, entries, cols)
    return build()


@pytest.mark.parametrize("ring", [F3, Z5, Q], ids=str)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(ring, data):
    a, b, c = (data.draw(elements_of(ring)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ring.zero
    assert a * ring.one == a


@pytest.mark.parametrize("ring", [F3, Z5, Q], ids=str)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_units_invert(ring, data):
    a = data.draw(elements_of(ring))
    if a.is_unit():
        assert a * invert(a) == ring.one
    else:
        with pytest.raises(NotAUnit):
            invert(a)


@pytest.mark.parametrize("ring", [F3, Z5], ids=str)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_valuation_and_division(ring, data):
    a = data.draw(elements_of(ring))
    v = a.valuation()
    if a.is_zero():
        assert v == ring.precision
        return
    quotient = a.divide_by_t_power(v)
    assert quotient.is_unit()
    assert ring.t_power(v) * quotient == a


def test_t_power_vanishes_at_precision():
    assert F3.t_power(3).is_zero()
    assert F3.t ** 3 == F3.zero
    assert Z5.t == Z5.from_int(5)
    assert (Z5.t ** 2).value == 25


def test_parse():
    assert F3.parse("1+t").digits == (1, 1, 0)
    assert F3.parse("2*t^2 - t").digits == (0, 2, 2)
    assert Q.parse("3/2*t").digits == (0, Fraction(3, 2), 0)
    assert Z5.parse("1+p").value == 6
    assert F3.parse([1, 0, 2]) == F3.element([1, 0, 2])
    assert F3.parse(4) == F3.one
    with pytest.raises(ValueError):
        F3.parse("t^")
    with pytest.raises(ValueError):
        F3.parse("")


def test_rational_scalars_need_invertible_denominators():
    assert F3.scalar(Fraction(1, 2)) * F3.from_int(2) == F3.one
    with pytest.raises(NotAUnit):
        F3.scalar(Fraction(1, 3))


def test_ring_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        TruncatedRing.prime_field(4, 2)
    with pytest.raises(ValueError):
        TruncatedRing.rational(0)
    with pytest.raises(RingMismatch):
        F3.one + F2.one


def test_elements_enumerates_the_ring():
    assert len(list(F2.elements())) == 4
    with pytest.raises(ValueError):
        next(Q.elements())


@pytest.mark.parametrize("ring", [F3, Z5, Q], ids=str)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_solve_recovers_consistent_systems(ring, data):
    matrix = data.draw(matrices_of(ring))
    x = tuple(data.draw(elements_of(ring)) for _ in range(matrix.ncols))
    rhs = matrix.apply(x)
    y = solve_linear(matrix, rhs)
    assert matrix.apply(y) == rhs


@pytest.mark.parametrize("ring", [F3, Z5], ids=str)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_kernel_generators_are_in_the_kernel(ring, data):
    matrix = data.draw(matrices_of(ring))
    for k in kernel_generators(matrix):
        assert vec_is_zero(matrix.apply(k))


@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_kernel_and_solvability_match_enumeration(data):
    matrix = data.draw(matrices_of(F2, 2, 2))
    vectors = list(itertools.product(F2.elements(), repeat=matrix.ncols))
    image = {matrix.apply(x) for x in vectors}
    gens = kernel_generators(matrix)
    for x in vectors:
        if vec_is_zero(matrix.apply(x)):
            assert in_span(F2, matrix.ncols, x, gens)
    for rhs in itertools.product(F2.elements(), repeat=matrix.nrows):
        if rhs in image:
            assert matrix.apply(solve_linear(matrix, rhs)) == rhs
        else:
            with pytest.raises(NoSolution):
                solve_linear(matrix, rhs)


@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_invariants_count_the_cokernel(data):
    matrix = data.draw(matrices_of(F2, 2, 2))
    image = {matrix.apply(x) for x in itertools.product(F2.elements(), repeat=matrix.ncols)}
    invariants = module_invariants(matrix)
    assert 4 ** matrix.nrows // len(image) == 2 ** sum(invariants)


def test_module_invariants_of_a_diagonal():
    t = F3.t
    diag = RMatrix.from_rows(F3, [[t, F3.zero], [F3.zero, F3.zero]])
    assert module_invariants(diag) == [1, 3]
    assert module_invariants(RMatrix.identity(F3, 2)) == []


def test_unsolvable_system():
    with pytest.raises(NoSolution):
        solve_linear(RMatrix.from_rows(F3, [[F3.t]]), (F3.one,))


def test_matrix_inverse():
    m = RMatrix.from_rows(F3, [[F3.one, F3.t], [F3.zero, F3.parse("1+t")]])
    assert is_invertible(m)
    assert matrix_inverse(m) @ m == RMatrix.identity(F3, 2)
    assert not is_invertible(RMatrix.from_rows(F3, [[F3.t]]))
