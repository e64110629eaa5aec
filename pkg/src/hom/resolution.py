"""
Semi-free resolutions of presented DG modules by killing cycles in the mapping cone.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from src.algebra.dg_algebra import BlockIndex
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, Window, check_algebra,
                                   extension_matrix, homology)
from src.modules.presented import PresentedDGModule
from src.ring.linalg import RMatrix, Vector, homology_invariants, in_span, kernel_generators, vec_scale
from src.utils.exceptions import WindowExhausted

Resolvable = Union[PresentedDGModule, SemiFreeDGModule, BlockDGModule]


@dataclass(frozen=True)
class ResolutionResult:
    """F -> D with comparison[b] the image of the semi-basis element b in D (generator coordinates)."""
    module: Union[SemiFreeDGModule, BlockDGModule]
    comparison: Tuple[Vector, ...]
    certified_top: int
    complete: bool

    def require_complete(self) -> "ResolutionResult":
        if not self.complete:
            raise WindowExhausted(
                f"Homology of the mapping cone persists above degree {self.certified_top + 1}",
                witness=self.certified_top)
        return self

    def betti_numbers(self) -> dict:
        module = self.module
        return dict(sorted(module.over_b.semibasis_counts().items() if isinstance(module, BlockDGModule)
                           else module.semibasis_counts().items()))


class _Cone:
    """Mapping cone of phi: F -> D, Cone_n = D_n + F_{n-1}, d(x, y) = (d x + phi(y), -d y)."""

    def __init__(self, target: PresentedDGModule, source: SemiFreeDGModule, comparison: List[Vector]):
        self.target = target
        self.source = source
        self.comparison = comparison
        self.ring = target.ring

    def rank(self, n: int) -> int:
        return self.target.rank(n) + self.source.rank(n - 1)

    def differential(self, n: int) -> RMatrix:
        ring = self.ring
        d_target = self.target.d_matrix(n)
        phi = extension_matrix(self.source, _PresentedTarget(self.target), 0, self.comparison, n - 1)
        d_source = self.source.differential_matrix(n - 1).scale(-ring.one)
        rows = []
        for r in range(self.target.rank(n - 1)):
            rows.append(d_target.entries[r] + phi.entries[r])
        for r in range(self.source.rank(n - 2)):
            rows.append((ring.zero,) * self.target.rank(n) + d_source.entries[r])
        return RMatrix.from_rows(ring, rows, self.rank(n))

    def relations(self, n: int) -> List[Vector]:
        pad = (self.ring.zero,) * self.source.rank(n - 1)
        return [tuple(r) + pad for r in self.target.relations(n)]

    def homology(self, n: int) -> List[int]:
        return homology_invariants(self.ring, self.differential(n + 1), self.differential(n),
                                   self.relations(n), self.relations(n - 1))


class _PresentedTarget:
    """Adapter giving a presented module the act/rank interface used by extension_matrix."""

    def __init__(self, module: PresentedDGModule):
        self.module = module

    def rank(self, n: int) -> int:
        return self.module.rank(n)

    def act(self, i: int, s: int, x, n: int) -> Vector:
        return self.module.act(i, s, x, n)


def _identity_result(module: Union[SemiFreeDGModule, BlockDGModule]) -> ResolutionResult:
    semi = module.over_b if isinstance(module, BlockDGModule) else module
    top = semi.max_degree if semi.truncated_at is None else semi.truncated_at - 1
    return ResolutionResult(module, tuple(semi.generator(b) for b in range(semi.count)), top,
                            semi.truncated_at is None)


def semi_free_resolution(module: Resolvable, window: Optional[Window] = None, index: Optional[BlockIndex] = None,
                         require_complete: bool = False, verbose: bool = False) -> ResolutionResult:
    """Semi-free F with a comparison map F -> D that is a quasi-isomorphism through window[1].

    Generators are added degree by degree, up to window[1] + 1, one for each cycle of the cone
    (taken in Smith order) that is not yet a boundary. When `index` is given the result is
    read into block form over index.block.
    """
    if isinstance(module, (SemiFreeDGModule, BlockDGModule)):
        result = _identity_result(module)
        return result.require_complete() if require_complete else result

    algebra = module.algebra
    if index is not None:
        check_algebra(index.block, algebra)
    ring = module.ring
    lo, hi = window or (module.min_degree, module.max_degree + algebra.top_degree + 1)
    lo = min(lo, module.min_degree)
    top = hi + 1

    degrees: List[int] = []
    values: List[Vector] = []
    comparison: List[Vector] = []

    def current() -> SemiFreeDGModule:
        return SemiFreeDGModule(algebra, tuple(degrees), tuple(values))

    for n in range(lo, top + 1):
        cone = _Cone(module, current(), comparison)
        size = cone.rank(n)
        below = cone.relations(n - 1)
        outgoing = cone.differential(n)
        if below:
            outgoing = outgoing.hstack(RMatrix.from_columns(ring, below, outgoing.nrows))
        cycles = [vec[:size] for vec in kernel_generators(outgoing)]
        boundaries = cone.differential(n + 1).columns() + cone.relations(n)
        split = module.rank(n)
        for cycle in cycles:
            if in_span(ring, size, cycle, boundaries):
                continue
            x, y = cycle[:split], cycle[split:]
            degrees.append(n)
            values.append(vec_scale(-ring.one, y))
            comparison.append(tuple(x))
            boundaries.append(tuple(cycle))
            if verbose:
                print(f"   added a generator in degree {n}")

    resolved = current()
    cone = _Cone(module, resolved, comparison)
    last = max(module.max_degree, resolved.max_degree + 1)
    complete = all(not cone.homology(n) for n in range(top + 1, last + 1))
    resolved = SemiFreeDGModule(algebra, resolved.degrees, resolved.values, None if complete else top)

    result_module: Union[SemiFreeDGModule, BlockDGModule] = resolved
    if index is not None:
        result_module = BlockDGModule.from_semifree(resolved, index)
    result = ResolutionResult(result_module, tuple(comparison), hi, complete)
    return result.require_complete() if require_complete else result


def resolution_agrees(result: ResolutionResult, module: Resolvable) -> bool:
    """H_n(F) and H_n(D) have the same invariants for n up to the certified top."""
    lo = result.module.min_degree if result.module.degrees else 0
    window = (min(lo, module.min_degree), result.certified_top)
    return homology(result.module, window) == homology(module, window)
