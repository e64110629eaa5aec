"""
Lifting through a tower of Koszul variables, quasi-lift checks and the constructive descent of
null-homotopies.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from src.algebra.dg_algebra import BlockIndex, KoszulTower
from src.hom.ext import HomothetyReport, ext_is_zero, homothety_check
from src.hom.graded_hom import GradedHom, block_hom, hom_differential, hom_slice, is_cycle, slice_layout
from src.hom.resolution import ResolutionResult, semi_free_resolution
from src.lifting.engine import LiftResult, Perturbation, lift
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, Window, base_change, check_algebra,
                                   default_window, homology)
from src.modules.presented import PresentedDGModule
from src.ring.linalg import Vector, solve_linear, vec_add, vec_is_zero, vec_scale, zero_vector
from src.utils.exceptions import NoSolution, NotACycle, NotNullHomotopic, ObstructionNonzero

TowerInput = Union[PresentedDGModule, SemiFreeDGModule, BlockDGModule]


@dataclass(frozen=True)
class IteratedLiftResult:
    """complex is the quasi-lift over R; lifts[0] peels the last variable, lifts[-1] the first."""
    source: TowerInput
    complex: SemiFreeDGModule
    lifts: Tuple[LiftResult, ...]
    resolution: Optional[ResolutionResult] = None
    ext_status: Dict[int, str] = field(default_factory=dict)

    @property
    def transcript(self) -> List[dict]:
        variables = range(len(self.lifts), 0, -1)
        return [{**record, "variable": k} for k, result in zip(variables, self.lifts) for record in result.transcript]


def _block_at(module: Union[SemiFreeDGModule, BlockDGModule], index: BlockIndex) -> BlockDGModule:
    if isinstance(module, BlockDGModule):
        check_algebra(index.block, module.algebra)
        return module
    return BlockDGModule.from_semifree(module, index)


def lift_iterated(module: TowerInput, tower: KoszulTower, window: Optional[Window] = None,
                  record_ext: bool = False, perturbation: Optional[Perturbation] = None,
                  verbose: bool = False) -> IteratedLiftResult:
    """Quasi-lift a module over K(t_1, ..., t_n) to R, peeling t_n first.

    Presented inputs are resolved first; every later stage is already semi-free over the next
    algebra down. With `record_ext`, Ext^2 of each block module is recorded per variable.
    """
    resolution = None
    current: Union[SemiFreeDGModule, BlockDGModule]
    if isinstance(module, PresentedDGModule):
        check_algebra(tower.top, module.algebra)
        index = tower.indices[-1] if tower.length else None
        resolution = semi_free_resolution(module, window, index=index, verbose=verbose)
        current = resolution.module
        if verbose:
            print(f"🔍 Resolved with Betti numbers {resolution.betti_numbers()}")
    else:
        check_algebra(tower.top, module.algebra)
        current = module

    lifts: List[LiftResult] = []
    ext_status: Dict[int, str] = {}
    for k in range(tower.length, 0, -1):
        block = _block_at(current, tower.indices[k - 1])
        if record_ext:
            ext_status[k] = ext_is_zero(2, block, block).status
        if verbose:
            print(f"🔍 Lifting along variable {k} ({tower.indices[k - 1].t})")
        try:
            result = lift(block, perturbation=perturbation, verbose=verbose)
        except ObstructionNonzero as exc:
            raise ObstructionNonzero(exc.stage, witness=exc.witness, variable=k, transcript=exc.transcript)
        lifts.append(result)
        current = result.lifted

    if isinstance(current, BlockDGModule):
        current = current.over_b
    return IteratedLiftResult(module, current, tuple(lifts), resolution, ext_status)


def base_change_through(module: SemiFreeDGModule, tower: KoszulTower, start: int = 0) -> SemiFreeDGModule:
    """K(t_{start+1}, ..., t_n) tensor M for M over tower.algebras[start]."""
    current = module
    for index in tower.indices[start:]:
        current = base_change(current, index).over_b
    return current


def _extend(module: SemiFreeDGModule, index: Union[BlockIndex, KoszulTower, None]):
    if index is None:
        return module
    if isinstance(index, KoszulTower):
        start = next((k for k, a in enumerate(index.algebras) if a is module.algebra), 0)
        return base_change_through(module, index, start)
    return base_change(module, index)


def verify_quasilift(lifted: SemiFreeDGModule, module: TowerInput,
                     index: Union[BlockIndex, KoszulTower, None] = None,
                     window: Optional[Window] = None, shift: int = 0) -> bool:
    """Whether H_m(Sigma^shift B tensor lifted) and H_m(module) agree for m in the window."""
    extended = _extend(lifted, index)
    window = window or default_window(module)
    lo, hi = window
    ours = homology(extended, (lo - shift, hi - shift))
    theirs = homology(module, window)
    return all(ours[m - shift] == theirs[m] for m in range(lo, hi + 1))


def _nonzero_homology(module, window: Optional[Window]) -> Dict[int, List[int]]:
    return {n: inv for n, inv in homology(module, window or default_window(module)).items() if inv}


def shift_equivalent(first: SemiFreeDGModule, second: SemiFreeDGModule,
                     window: Optional[Window] = None) -> Optional[int]:
    """n with H(second) isomorphic to H(Sigma^n first), or None."""
    ours = _nonzero_homology(first, None)
    theirs = _nonzero_homology(second, window)
    if not ours and not theirs:
        return 0
    if not ours or not theirs:
        return None
    n = min(theirs) - min(ours)
    shifted = {m + n: inv for m, inv in ours.items()}
    return n if shifted == theirs else None


@dataclass(frozen=True)
class SemidualizingResult:
    lift: IteratedLiftResult
    lifted_report: HomothetyReport
    source_report: HomothetyReport

    @property
    def agrees(self) -> bool:
        return self.lifted_report.status == self.source_report.status

    def to_dict(self) -> dict:
        return {"lifted": self.lifted_report.to_dict(), "source": self.source_report.to_dict(),
                "agrees": self.agrees}


def semidualizing_lift(module: TowerInput, tower: KoszulTower, window: Optional[Window] = None,
                       verbose: bool = False) -> SemidualizingResult:
    """Lift to R and run the homothety test on both ends."""
    result = lift_iterated(module, tower, window, verbose=verbose)
    top = module
    if result.resolution is not None:
        top = result.resolution.module
    lifted_report = homothety_check(result.complex)
    source_report = homothety_check(top)
    if verbose:
        print(f"✅ Lift is {lifted_report.status}, source is {source_report.status}")
    return SemidualizingResult(result, lifted_report, source_report)


def descend_null_homotopy(f: GradedHom, index: BlockIndex, verbose: bool = False) -> GradedHom:
    """An A-linear eta with d(eta) = f, for a cycle f whose base change along index is null-homotopic.

    Each stage solves d(S) = [0; v] over B with S(e_b) = [v'(b); z(b)], starting from v = f;
    eta collects sum t^j z^(j).
    """
    if f.linearity != "A":
        raise TypeError("Descent starts from an A-linear homomorphism")
    if not is_cycle(f):
        raise NotACycle(f"Homomorphism of degree {f.degree} is not a cycle")
    ring = f.ring
    source = base_change(f.source, index)
    target = source if f.target is f.source else base_change(f.target, index)
    p = f.degree
    system = hom_slice(source, target, p + 1)
    equations = slice_layout(source, target, p)
    zeros = [zero_vector(ring, f.target.rank(deg + p - 1)) for deg in f.source.degrees]

    eta: Tuple[Vector, ...] = tuple(zero_vector(ring, f.target.rank(deg + p + 1)) for deg in f.source.degrees)
    v = f.values
    for stage in range(ring.precision):
        if all(vec_is_zero(vb) for vb in v):
            break
        rhs_map = block_hom(source, target, p, zeros, v)
        rhs = tuple(rhs_map.values[b][pos] for b, pos in equations)
        try:
            params = solve_linear(system.matrix, rhs)
        except NoSolution as exc:
            raise NotNullHomotopic(f"Base change is not null-homotopic at descent stage {stage}",
                                   witness=exc.witness)
        step = system.to_hom(params)
        eta = tuple(vec_add(acc, vec_scale(ring.t_power(stage), zb)) for acc, zb in zip(eta, step.z_values()))
        v = step.v_values()
        if verbose:
            print(f"   descent stage {stage}: {system.size} unknowns")

    result = GradedHom(f.source, f.target, p + 1, eta)
    if hom_differential(result).values != f.values:
        raise NotNullHomotopic(f"Descent did not close up after {ring.precision} stages")
    return result
