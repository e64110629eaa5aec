"""
DG modules whose components are finitely presented R-modules (sums of R/(t^a) per degree).

These are the inputs to the killing-cycles resolution; everything else in the package works
with semi-free modules.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.algebra.dg_algebra import DGAlgebra, sign
from src.ring.linalg import (RMatrix, Vector, homology_invariants, in_span, unit_vector, vec_add,
                             vec_scale, vec_sub, zero_vector)
from src.ring.truncated_ring import RingElement, TruncatedRing
from src.utils.exceptions import DimensionMismatch, LeibnizViolation, ShapeError, SquareNonzero


@dataclass(frozen=True, eq=False)
class PresentedDGModule:
    """Degree n is the sum of R/(t^a) over a in torsion[n]; a equal to the precision is a free summand.

    `differential[n]` maps generators of degree n to degree n - 1 and `action[(i, s, n)]` is
    gamma_{i,s} on generators of degree n. Missing action entries are zero, except the unit.
    """
    algebra: DGAlgebra
    torsion: Mapping[int, Tuple[int, ...]]
    differential: Mapping[int, RMatrix]
    action: Mapping[Tuple[int, int, int], RMatrix] = field(default_factory=dict)
    truncated_at: Optional[int] = None

    @property
    def ring(self) -> TruncatedRing:
        return self.algebra.ring

    @property
    def degrees(self) -> List[int]:
        return sorted(n for n, exps in self.torsion.items() if exps)

    @property
    def min_degree(self) -> int:
        return self.degrees[0] if self.degrees else 0

    @property
    def max_degree(self) -> int:
        return self.degrees[-1] if self.degrees else -1

    def rank(self, n: int) -> int:
        return len(self.torsion.get(n, ()))

    def relations(self, n: int) -> List[Vector]:
        """Columns t^a e_k for the torsion summands of degree n."""
        size = self.rank(n)
        ring = self.ring
        return [vec_scale(ring.t_power(a), unit_vector(ring, size, k))
                for k, a in enumerate(self.torsion.get(n, ())) if a < ring.precision]

    def d_matrix(self, n: int) -> RMatrix:
        mat = self.differential.get(n)
        if mat is None:
            return RMatrix.zeros(self.ring, self.rank(n - 1), self.rank(n))
        return mat

    def action_matrix(self, i: int, s: int, n: int) -> RMatrix:
        if i == 0 and s == 0:
            return RMatrix.identity(self.ring, self.rank(n))
        mat = self.action.get((i, s, n))
        if mat is None:
            return RMatrix.zeros(self.ring, self.rank(n + i), self.rank(n))
        return mat

    def act(self, i: int, s: int, x: Sequence[RingElement], n: int) -> Vector:
        return self.action_matrix(i, s, n).apply(x)

    def is_zero_at(self, x: Sequence[RingElement], n: int) -> bool:
        return in_span(self.ring, self.rank(n), x, self.relations(n))

    def homology(self, window: Optional[Tuple[int, int]] = None) -> Dict[int, List[int]]:
        lo, hi = window or (self.min_degree, self.max_degree)
        out = {}
        for n in range(lo, hi + 1):
            out[n] = homology_invariants(self.ring, self.d_matrix(n + 1), self.d_matrix(n),
                                         self.relations(n), self.relations(n - 1))
        return out


def check_presented(module: PresentedDGModule):
    """Raise unless the differential and action are well defined and satisfy d^2 = 0 and Leibniz."""
    ring = module.ring
    algebra = module.algebra
    for n in module.degrees:
        for a in module.torsion[n]:
            if not 1 <= a <= ring.precision:
                raise ShapeError(f"Torsion exponent {a} in degree {n} is outside 1..{ring.precision}")
    for n, mat in module.differential.items():
        if (mat.nrows, mat.ncols) != (module.rank(n - 1), module.rank(n)):
            raise DimensionMismatch(f"Differential in degree {n} has shape {mat.nrows}x{mat.ncols}")
    for (i, s, n), mat in module.action.items():
        if (mat.nrows, mat.ncols) != (module.rank(n + i), module.rank(n)):
            raise DimensionMismatch(f"Action of gamma_{i},{s} on degree {n} has shape {mat.nrows}x{mat.ncols}")

    for n in module.degrees:
        for r in module.relations(n):
            if not module.is_zero_at(module.d_matrix(n).apply(r), n - 1):
                raise ShapeError(f"Differential in degree {n} does not respect the relations", witness=n)
            for i in range(1, algebra.top_degree + 1):
                for s in range(algebra.rank(i)):
                    if not module.is_zero_at(module.act(i, s, r, n), n + i):
                        raise ShapeError(f"Action of gamma_{i},{s} does not respect the relations", witness=(i, s, n))
        square = module.d_matrix(n - 1) @ module.d_matrix(n)
        for k, col in enumerate(square.columns()):
            if not module.is_zero_at(col, n - 2):
                raise SquareNonzero(f"d(d(x)) != 0 for generator {k} of degree {n}", witness=(n, k))

    for n in module.degrees:
        for k in range(module.rank(n)):
            x = unit_vector(ring, module.rank(n), k)
            dx = module.d_matrix(n).apply(x)
            for i in range(algebra.top_degree + 1):
                for s in range(algebra.rank(i)):
                    lhs = module.d_matrix(n + i).apply(module.act(i, s, x, n))
                    gamma = unit_vector(ring, algebra.rank(i), s)
                    first = zero_vector(ring, module.rank(n + i - 1))
                    for u, c in enumerate(algebra.differentiate(i, gamma)):
                        if not c.is_zero():
                            first = vec_add(first, vec_scale(c, module.act(i - 1, u, x, n)))
                    second = vec_scale(ring.from_int(sign(i)), module.act(i, s, dx, n - 1))
                    if not module.is_zero_at(vec_sub(lhs, vec_add(first, second)), n + i - 1):
                        raise LeibnizViolation(f"Leibniz rule fails for gamma_{i},{s} on generator {k} of degree {n}",
                                               witness=(i, s, n, k))


def make_presented(algebra: DGAlgebra, torsion: Mapping[int, Sequence[int]],
                   differential: Optional[Mapping[int, RMatrix]] = None,
                   action: Optional[Mapping[Tuple[int, int, int], RMatrix]] = None,
                   truncated_at: Optional[int] = None) -> PresentedDGModule:
    module = PresentedDGModule(algebra, {n: tuple(exps) for n, exps in torsion.items()},
                               dict(differential or {}), dict(action or {}), truncated_at)
    check_presented(module)
    return module


def cyclic_module(algebra: DGAlgebra, exponent: int, degree: int = 0) -> PresentedDGModule:
    """R/(t^exponent) concentrated in one degree, with only the unit acting."""
    if algebra.rank(0) != 1:
        raise ShapeError(f"{algebra.name} has A_0 of rank {algebra.rank(0)}; a cyclic module needs A_0 = R")
    return make_presented(algebra, {degree: (exponent,)})
