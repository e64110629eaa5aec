"""
Graded homomorphisms between semi-free modules, the Hom complex and the null-homotopy solver.

A homomorphism of degree p is stored by its values on the semi-basis; A-linearity with the
sign f(gamma b) = (-1)^{p|gamma|} gamma f(b) fixes the rest. B-linear maps between block
modules are the same thing over B, with the pieces f(e_b) = [v(b); z(b)].
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.algebra.dg_algebra import sign
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, base_change, check_algebra,
                                   extension_matrix)
from src.ring.linalg import (RMatrix, Vector, is_invertible, kernel_generators, solve_linear, vec_add,
                             vec_is_zero, vec_scale, vec_sub, zero_vector)
from src.ring.truncated_ring import RingElement
from src.utils.exceptions import (DimensionMismatch, NoSolution, NotACycle, NotAnIso,
                                  NotNullHomotopic)

Module = Union[SemiFreeDGModule, BlockDGModule]


def as_semifree(module: Module) -> SemiFreeDGModule:
    return module.over_b if isinstance(module, BlockDGModule) else module


@dataclass(frozen=True, eq=False)
class GradedHom:
    """A homomorphism source -> target of the given degree; values[b] lies in target degree |b| + degree."""
    source: Module
    target: Module
    degree: int
    values: Tuple[Vector, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        src, tgt = as_semifree(self.source), as_semifree(self.target)
        check_algebra(src.algebra, tgt.algebra)
        if len(self.values) != src.count:
            raise DimensionMismatch(f"{len(self.values)} values for {src.count} semi-basis elements")
        for b, deg in enumerate(src.degrees):
            if len(self.values[b]) != tgt.rank(deg + self.degree):
                raise DimensionMismatch(
                    f"Value on {src.label(b)} has length {len(self.values[b])}, "
                    f"expected {tgt.rank(deg + self.degree)}", witness=b)

    @property
    def linearity(self) -> str:
        return "B" if isinstance(self.source, BlockDGModule) else "A"

    @property
    def ring(self):
        return as_semifree(self.source).ring

    def matrix(self, n: int) -> RMatrix:
        """R-matrix from source degree n to target degree n + degree."""
        key = ("matrix", n)
        if key not in self._cache:
            self._cache[key] = extension_matrix(as_semifree(self.source), as_semifree(self.target),
                                                self.degree, self.values, n)
        return self._cache[key]

    def apply(self, x: Sequence[RingElement], n: int) -> Vector:
        return self.matrix(n).apply(x)

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for v in self.values)

    def pieces(self, b: int) -> Tuple[Vector, Vector]:
        """(v(b), z(b)) for a B-linear map between block modules."""
        if not isinstance(self.target, BlockDGModule):
            raise TypeError("Block pieces are only defined for maps between block modules")
        deg = self.source.degrees[b] + self.degree
        return self.target.split(self.values[b], deg)

    def z_values(self) -> Tuple[Vector, ...]:
        return tuple(self.pieces(b)[1] for b in range(len(self.values)))

    def v_values(self) -> Tuple[Vector, ...]:
        return tuple(self.pieces(b)[0] for b in range(len(self.values)))

    def __add__(self, other: "GradedHom") -> "GradedHom":
        _check_parallel(self, other)
        return GradedHom(self.source, self.target, self.degree,
                         tuple(vec_add(a, b) for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "GradedHom") -> "GradedHom":
        _check_parallel(self, other)
        return GradedHom(self.source, self.target, self.degree,
                         tuple(vec_sub(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, c: RingElement) -> "GradedHom":
        return GradedHom(self.source, self.target, self.degree, tuple(vec_scale(c, v) for v in self.values))

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "values": [[a.to_json() for a in v] for v in self.values]}


def _check_parallel(f: GradedHom, g: GradedHom):
    if f.source is not g.source or f.target is not g.target or f.degree != g.degree:
        raise DimensionMismatch("Homomorphisms do not share source, target and degree")


def zero_hom(source: Module, target: Module, degree: int) -> GradedHom:
    src, tgt = as_semifree(source), as_semifree(target)
    return GradedHom(source, target, degree,
                     tuple(tgt.zero(deg + degree) for deg in src.degrees))


def block_hom(source: BlockDGModule, target: BlockDGModule, degree: int,
              v_values: Sequence[Vector], z_values: Sequence[Vector]) -> GradedHom:
    """The B-linear map with e_b -> [v(b); z(b)]."""
    values = tuple(target.join(v, z, deg + degree) for deg, v, z in zip(source.degrees, v_values, z_values))
    return GradedHom(source, target, degree, values)


def identity_hom(module: Module) -> GradedHom:
    src = as_semifree(module)
    return GradedHom(module, module, 0, tuple(src.generator(b) for b in range(src.count)))


def hom_differential(f: GradedHom) -> GradedHom:
    """d(f) = d' f - (-1)^|f| f d, of degree |f| - 1."""
    src, tgt = as_semifree(f.source), as_semifree(f.target)
    eps = f.ring.from_int(sign(f.degree))
    values = []
    for b, deg in enumerate(src.degrees):
        first = tgt.apply_differential(f.values[b], deg + f.degree)
        second = f.apply(src.values[b], deg - 1)
        values.append(vec_sub(first, vec_scale(eps, second)))
    return GradedHom(f.source, f.target, f.degree - 1, tuple(values))


def is_cycle(f: GradedHom) -> bool:
    return hom_differential(f).is_zero()


def compose(g: GradedHom, f: GradedHom) -> GradedHom:
    """g after f."""
    middle, start = as_semifree(f.target), as_semifree(g.source)
    if middle is not start:
        check_algebra(middle.algebra, start.algebra)
        if middle.degrees != start.degrees:
            raise DimensionMismatch("Cannot compose: target of f is not the source of g")
    src = as_semifree(f.source)
    values = tuple(g.apply(f.values[b], deg + f.degree) for b, deg in enumerate(src.degrees))
    return GradedHom(f.source, g.target, f.degree + g.degree, values)


def base_change_hom(f: GradedHom, index, source: Optional[BlockDGModule] = None,
                    target: Optional[BlockDGModule] = None) -> GradedHom:
    """B tensor f for an A-linear f: e_b -> [0; f(b)], with block form [[(-1)^|f| f, 0], [0, f]]."""
    if f.linearity != "A":
        raise TypeError("Base change applies to A-linear homomorphisms")
    source = source or base_change(f.source, index)
    target = target or (source if f.target is f.source else base_change(f.target, index))
    zeros = [zero_vector(f.ring, f.target.rank(deg + f.degree - 1)) for deg in f.source.degrees]
    return block_hom(source, target, f.degree, zeros, f.values)


def check_isomorphism(f: GradedHom, what: str = "map"):
    """Raise NotAnIso unless f is a degree 0 chain map that is bijective in every degree."""
    if f.degree != 0:
        raise NotAnIso(f"The {what} has degree {f.degree}")
    if not is_cycle(f):
        raise NotAnIso(f"The {what} does not commute with the differentials")
    src, tgt = as_semifree(f.source), as_semifree(f.target)
    for n in range(min(src.min_degree, tgt.min_degree), max(src.max_degree, tgt.max_degree) + 1):
        if not is_invertible(f.matrix(n)):
            raise NotAnIso(f"The {what} is not bijective in degree {n}", witness=n)


def is_isomorphism(f: GradedHom) -> bool:
    try:
        check_isomorphism(f)
    except NotAnIso:
        return False
    return True


# The Hom complex, one degree at a time

@dataclass(frozen=True, eq=False)
class HomComplexSlice:
    """Hom(source, target) in degree p: parameters are the coordinates of every f(b)."""
    source: Module
    target: Module
    degree: int
    layout: Tuple[Tuple[int, int], ...]
    matrix: RMatrix

    @property
    def size(self) -> int:
        return len(self.layout)

    def to_hom(self, params: Sequence[RingElement]) -> GradedHom:
        if len(params) != self.size:
            raise DimensionMismatch(f"{len(params)} parameters for a slice of size {self.size}")
        src, tgt = as_semifree(self.source), as_semifree(self.target)
        values = [list(tgt.zero(deg + self.degree)) for deg in src.degrees]
        for c, (b, pos) in zip(params, self.layout):
            values[b][pos] = c
        return GradedHom(self.source, self.target, self.degree, tuple(tuple(v) for v in values))

    def params_of(self, f: GradedHom) -> Vector:
        if f.degree != self.degree:
            raise DimensionMismatch(f"Homomorphism of degree {f.degree} for slice {self.degree}")
        return tuple(f.values[b][pos] for b, pos in self.layout)

    def kernel(self) -> List[Vector]:
        """Generators of the cycles of this degree."""
        return kernel_generators(self.matrix)


def slice_layout(source: Module, target: Module, p: int) -> Tuple[Tuple[int, int], ...]:
    src, tgt = as_semifree(source), as_semifree(target)
    return tuple((b, pos) for b, deg in enumerate(src.degrees) for pos in range(tgt.rank(deg + p)))


def hom_slice(source: Module, target: Module, p: int, linearity: Optional[str] = None) -> HomComplexSlice:
    """Degree p slice with the matrix of the Hom differential into degree p - 1."""
    if linearity is not None:
        expected = "B" if isinstance(source, BlockDGModule) else "A"
        if linearity != expected or isinstance(target, BlockDGModule) != isinstance(source, BlockDGModule):
            raise TypeError(f"{linearity}-linear slice requested for {expected}-modules")
    src, tgt = as_semifree(source), as_semifree(target)
    check_algebra(src.algebra, tgt.algebra)
    ring = src.ring
    eps = ring.from_int(sign(p))
    layout = slice_layout(source, target, p)
    below = slice_layout(source, target, p - 1)
    below_index = {key: k for k, key in enumerate(below)}
    columns = []
    for b0, pos in layout:
        start = src.degrees[b0] + p
        unit = tuple(ring.one if q == pos else ring.zero for q in range(tgt.rank(start)))
        col = list(zero_vector(ring, len(below)))
        for q, c in enumerate(tgt.apply_differential(unit, start)):
            if not c.is_zero():
                col[below_index[(b0, q)]] = c
        # f(d b) only sees the terms of d(b) that involve b0
        for b, deg in enumerate(src.degrees):
            for c, (target_b, j, s) in zip(src.values[b], src.basis(deg - 1)):
                if target_b != b0 or c.is_zero():
                    continue
                image = tgt.act(j, s, unit, start)
                factor = -(eps * c * sign(p * j))
                for q, a in enumerate(image):
                    if not a.is_zero():
                        col[below_index[(b, q)]] = col[below_index[(b, q)]] + factor * a
        columns.append(tuple(col))
    matrix = RMatrix.from_columns(ring, columns, len(below))
    return HomComplexSlice(source, target, p, layout, matrix)


def null_homotopy(f: GradedHom, verbose: bool = False) -> GradedHom:
    """S of degree |f| + 1 with d(S) = f; free Smith coordinates are set to zero."""
    if not is_cycle(f):
        raise NotACycle(f"Homomorphism of degree {f.degree} is not a cycle")
    homotopies = hom_slice(f.source, f.target, f.degree + 1)
    rhs = tuple(f.values[b][pos] for b, pos in slice_layout(f.source, f.target, f.degree))
    if verbose:
        print(f"   solving {len(rhs)} equations in {homotopies.size} unknowns")
    try:
        params = solve_linear(homotopies.matrix, rhs)
    except NoSolution as exc:
        raise NotNullHomotopic(f"Cycle of degree {f.degree} is not null-homotopic", witness=exc.witness)
    return homotopies.to_hom(params)


def homotopy_system(source: Module, target: Module, degree: int) -> Tuple[HomComplexSlice, HomComplexSlice]:
    """(unknowns in degree + 1, equations in degree) for solving d(S) = f of the given degree."""
    return hom_slice(source, target, degree + 1), hom_slice(source, target, degree)


def describe_hom(f: GradedHom, limit: int = 6) -> Dict[str, str]:
    """Nonzero values of f by semi-basis label, for witnesses and reports."""
    src, tgt = as_semifree(f.source), as_semifree(f.target)
    out = {}
    for b, deg in enumerate(src.degrees):
        terms = [f"{c}*{tgt.describe_key(key)}" for c, key in zip(f.values[b], tgt.basis(deg + f.degree))
                 if not c.is_zero()]
        if terms:
            out[src.label(b)] = " + ".join(terms)
        if len(out) >= limit:
            break
    return out
