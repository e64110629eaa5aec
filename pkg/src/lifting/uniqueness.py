"""
Isomorphisms between two lifts of the same B-module.

Given an isomorphism Upsilon: B (x) M -> B (x) M' with Upsilon(e_b) = [v(b); z(b)], the map z is a
chain map up to t. Each stage solves d(T) = [0; p] for a degree 0 B-linear T with
T(e_b) = [p'(b); u(b)], starting from p = v; after precision-many stages z + t * sum t^j u^(j)
is an honest chain isomorphism M -> M'.
"""
from dataclasses import dataclass
from typing import List, Tuple

from src.hom.graded_hom import (GradedHom, block_hom, check_isomorphism, compose, describe_hom, hom_slice,
                                identity_hom, slice_layout)
from src.lifting.engine import LiftResult
from src.modules.dg_module import BlockDGModule, SemiFreeDGModule, base_change, same_module
from src.ring.linalg import Vector, solve_linear, vec_add, vec_is_zero, vec_scale, zero_vector
from src.utils.exceptions import Ext1Obstruction, NoSolution, NotAnIso


@dataclass(frozen=True)
class UniquenessResult:
    iso: GradedHom
    xi_terms: Tuple[Tuple[Vector, ...], ...]
    stages: int
    local: bool = True

    @property
    def xi(self) -> Tuple[Vector, ...]:
        ring = self.iso.ring
        total = None
        for j, u in enumerate(self.xi_terms):
            scaled = tuple(vec_scale(ring.t_power(j), ub) for ub in u)
            total = scaled if total is None else tuple(vec_add(a, b) for a, b in zip(total, scaled))
        return total or ()


def _check_base_change(block: BlockDGModule, module: SemiFreeDGModule, which: str):
    if not all(vec_is_zero(d) for d in block.delta):
        raise NotAnIso(f"The {which} of upsilon is not a base change (delta block is nonzero)")
    if not same_module(block.underlying, module):
        raise NotAnIso(f"The {which} of upsilon is not the base change of the given module")


def uniqueness_iso(source: SemiFreeDGModule, target: SemiFreeDGModule, upsilon: GradedHom,
                   verbose: bool = False) -> UniquenessResult:
    """A chain isomorphism source -> target from an isomorphism of their base changes."""
    if not isinstance(upsilon.source, BlockDGModule) or not isinstance(upsilon.target, BlockDGModule):
        raise NotAnIso("upsilon must be a B-linear map between block modules")
    _check_base_change(upsilon.source, source, "source")
    _check_base_change(upsilon.target, target, "target")
    check_isomorphism(upsilon, "upsilon")

    ring = source.ring
    src_block, tgt_block = upsilon.source, upsilon.target
    z = upsilon.z_values()
    p = upsilon.v_values()
    system = hom_slice(src_block, tgt_block, 0)
    equations = slice_layout(src_block, tgt_block, -1)
    xi_terms: List[Tuple[Vector, ...]] = []
    for stage in range(ring.precision):
        if all(vec_is_zero(pb) for pb in p):
            break
        zeros = [zero_vector(ring, target.rank(deg - 2)) for deg in source.degrees]
        rhs_map = block_hom(src_block, tgt_block, -1, zeros, p)
        rhs = tuple(rhs_map.values[b][pos] for b, pos in equations)
        try:
            params = solve_linear(system.matrix, rhs)
        except NoSolution:
            raise Ext1Obstruction(stage, witness=describe_hom(rhs_map))
        step = system.to_hom(params)
        xi_terms.append(step.z_values())
        p = step.v_values()
        if verbose:
            print(f"🔍 Uniqueness stage {stage}: solved {system.size} unknowns")

    values = []
    for b in range(source.count):
        value = z[b]
        for j, u in enumerate(xi_terms):
            value = vec_add(value, vec_scale(ring.t_power(j + 1), u[b]))
        values.append(value)
    iso = GradedHom(source, target, 0, tuple(values))
    check_isomorphism(iso, "uniqueness map")
    if verbose:
        print(f"✅ Built an isomorphism after {len(xi_terms)} stage(s)")
    return UniquenessResult(iso, tuple(xi_terms), len(xi_terms), source.algebra.rank(0) == 1)


def iso_between_lifts(first: LiftResult, second: LiftResult) -> GradedHom:
    """B (x) M1 -> N -> B (x) M2 for two lifts of the same N."""
    return compose(second.iso, first.iso_inverse)


def uniqueness_between_lifts(first: LiftResult, second: LiftResult,
                             verbose: bool = False) -> UniquenessResult:
    return uniqueness_iso(first.lifted, second.lifted, iso_between_lifts(first, second), verbose)


def identity_uniqueness(module: SemiFreeDGModule, index) -> UniquenessResult:
    """Uniqueness map for M against itself with the identity of B (x) M."""
    return uniqueness_iso(module, module, identity_hom(base_change(module, index)))
