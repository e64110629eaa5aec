"""
Ext vanishing through the Hom complex, and the homothety (semidualizing) test.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.hom.graded_hom import Module, as_semifree, describe_hom, hom_slice
from src.modules.dg_module import BlockDGModule, Window
from src.ring.linalg import RMatrix, homology_invariants, in_span, vec_sub, zero_vector
from src.utils.exceptions import AlgebraMismatch

ZERO = "zero"
NONZERO = "nonzero"
INCONCLUSIVE = "inconclusive"

SEMIDUALIZING = "semidualizing"
NO = "no"


@dataclass(frozen=True)
class ExtReport:
    degree: int
    status: str
    window: Optional[Window] = None
    invariants: Tuple[int, ...] = ()
    witness: Optional[Dict[str, str]] = None
    reason: str = ""

    @property
    def is_zero(self) -> bool:
        return self.status == ZERO

    def to_dict(self) -> dict:
        data = {"status": self.status, "degree": self.degree,
                "window": list(self.window) if self.window else None,
                "invariants": list(self.invariants), "witness": self.witness}
        if self.reason:
            data["reason"] = self.reason
        return data


def _hom_window(source: Module, target: Module) -> Window:
    tgt = as_semifree(target)
    return tgt.min_degree, tgt.max_degree


def ext_is_zero(i: int, source: Module, target: Module, window: Optional[Window] = None) -> ExtReport:
    """Ext^i(source, target) = H_{-i}(Hom(source, target)); the source is its own semi-free resolution.

    A source truncated below hi + |i| + 1 cannot certify vanishing and gives INCONCLUSIVE.
    """
    if isinstance(source, BlockDGModule) != isinstance(target, BlockDGModule):
        raise AlgebraMismatch("Ext needs both modules over the same algebra")
    window = window or _hom_window(source, target)
    src = as_semifree(source)
    needed = window[1] + abs(i) + 1
    if src.truncated_at is not None and src.truncated_at < needed:
        return ExtReport(i, INCONCLUSIVE, window,
                         reason=f"source represented through degree {src.truncated_at}, need {needed}")

    p = -i
    here = hom_slice(source, target, p)
    above = hom_slice(source, target, p + 1)
    invariants = homology_invariants(src.ring, above.matrix, here.matrix)
    if not invariants:
        return ExtReport(i, ZERO, window)
    boundaries = above.matrix.columns()
    witness = None
    for cycle in here.kernel():
        if not in_span(src.ring, here.size, cycle, boundaries):
            witness = describe_hom(here.to_hom(cycle))
            break
    return ExtReport(i, NONZERO, window, tuple(invariants), witness)


@dataclass(frozen=True)
class HomothetyReport:
    status: str
    degree: Optional[int] = None
    invariants: Tuple[int, ...] = ()
    homology: Dict[int, List[int]] = field(default_factory=dict)
    reason: str = ""

    @property
    def is_semidualizing(self) -> bool:
        return self.status == SEMIDUALIZING

    def to_dict(self) -> dict:
        data = {"status": self.status, "degree": self.degree, "invariants": list(self.invariants)}
        if self.reason:
            data["reason"] = self.reason
        return data


def _homothety_matrix(module, p: int, layout) -> RMatrix:
    """Columns: the multiplication maps m -> gamma_{p,s} m in the parameters of the degree p slice."""
    ring = module.ring
    algebra = module.algebra
    position = {key: k for k, key in enumerate(layout)}
    columns = []
    for s in range(algebra.rank(p)):
        col = list(zero_vector(ring, len(layout)))
        gamma = tuple(ring.one if u == s else ring.zero for u in range(algebra.rank(p)))
        for b in range(module.count):
            for q, c in enumerate(module.embed(b, p, gamma)):
                if not c.is_zero():
                    col[position[(b, q)]] = c
        columns.append(tuple(col))
    return RMatrix.from_columns(ring, columns, len(layout))


def homothety_check(module: Module, window: Optional[Window] = None) -> HomothetyReport:
    """Whether A -> Hom_A(M, M), a -> (m -> am), is a quasi-isomorphism, via its mapping cone.

    Cone_n = Hom_n + A_{n-1} with d(h, a) = (d h + chi(a), -d a); chi is a quasi-isomorphism
    exactly when the cone is acyclic.
    """
    m = as_semifree(module)
    if m.truncated_at is not None:
        return HomothetyReport(INCONCLUSIVE, reason=f"module represented only through degree {m.truncated_at}")
    algebra = m.algebra
    ring = m.ring
    if not m.degrees:
        return HomothetyReport(NO, 0, reason="zero module")
    spread = m.max_degree - m.min_degree
    lo, hi = window or (-spread - 1, max(spread, algebra.top_degree) + 2)

    slices = {}

    def hom_at(p):
        if p not in slices:
            slices[p] = hom_slice(module, module, p)
        return slices[p]

    def cone_differential(n: int) -> RMatrix:
        """Cone_n -> Cone_{n-1} as [[d_Hom, chi], [0, -d_A]]."""
        upper = hom_at(n)
        lower_rows = algebra.rank(n - 2)
        rows = upper.matrix.nrows + lower_rows
        cols = upper.size + algebra.rank(n - 1)
        chi = _homothety_matrix(m, n - 1, hom_at(n - 1).layout) if 0 <= n - 1 <= algebra.top_degree \
            else RMatrix.zeros(ring, hom_at(n - 1).size, algebra.rank(n - 1))
        d_a = algebra.d_matrix(n - 1).scale(-ring.one)
        entries = []
        for r in range(upper.matrix.nrows):
            entries.append(upper.matrix.entries[r] + chi.entries[r])
        for r in range(lower_rows):
            entries.append(zero_vector(ring, upper.size) + d_a.entries[r])
        return RMatrix.from_rows(ring, entries, cols)

    homology = {}
    for n in range(lo, hi + 1):
        homology[n] = homology_invariants(ring, cone_differential(n + 1), cone_differential(n))
        if homology[n]:
            return HomothetyReport(NO, n, tuple(homology[n]), homology)
    return HomothetyReport(SEMIDUALIZING, homology=homology)
