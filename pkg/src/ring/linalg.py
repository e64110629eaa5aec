"""
Dense linear algebra over a truncated chain ring: matrices, Smith form, solving, kernels, invariants.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.ring.truncated_ring import RingElement, TruncatedRing, invert
from src.utils.exceptions import DimensionMismatch, NoSolution, RingMismatch

Vector = Tuple[RingElement, ...]


def zero_vector(ring: TruncatedRing, n: int) -> Vector:
    zero = ring.zero
    return (zero,) * n


def unit_vector(ring: TruncatedRing, n: int, k: int) -> Vector:
    zero, one = ring.zero, ring.one
    return tuple(one if j == k else zero for j in range(n))


def vec_add(x: Sequence[RingElement], y: Sequence[RingElement]) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"Cannot add vectors of lengths {len(x)} and {len(y)}")
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence[RingElement], y: Sequence[RingElement]) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"Cannot subtract vectors of lengths {len(x)} and {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: RingElement, x: Sequence[RingElement]) -> Vector:
    return tuple(c * a for a in x)


def vec_is_zero(x: Sequence[RingElement]) -> bool:
    return all(a.is_zero() for a in x)


def vec_valuation(ring: TruncatedRing, x: Sequence[RingElement]) -> int:
    """Smallest valuation of an entry; the precision for the zero vector."""
    return min((a.valuation() for a in x), default=ring.precision)


@dataclass(frozen=True)
class RMatrix:
    """An nrows x ncols matrix over one ring, stored as a tuple of row tuples."""
    ring: TruncatedRing
    nrows: int
    ncols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(row) != self.ncols for row in self.entries):
            raise DimensionMismatch(f"Entries do not form a {self.nrows}x{self.ncols} matrix")
        for row in self.entries:
            for entry in row:
                if entry.ring != self.ring:
                    raise RingMismatch(f"Entry {entry} does not belong to {self.ring}")

    @classmethod
    def zeros(cls, ring: TruncatedRing, nrows: int, ncols: int) -> "RMatrix":
        return cls(ring, nrows, ncols, tuple(zero_vector(ring, ncols) for _ in range(nrows)))

    @classmethod
    def identity(cls, ring: TruncatedRing, n: int) -> "RMatrix":
        return cls(ring, n, n, tuple(unit_vector(ring, n, i) for i in range(n)))

    @classmethod
    def from_rows(cls, ring: TruncatedRing, rows: Sequence[Sequence[RingElement]],
                  ncols: Optional[int] = None) -> "RMatrix":
        rows = tuple(tuple(row) for row in rows)
        width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        return cls(ring, len(rows), width, rows)

    @classmethod
    def from_columns(cls, ring: TruncatedRing, columns: Sequence[Sequence[RingElement]],
                     nrows: int) -> "RMatrix":
        rows = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(ring, nrows, len(columns), rows)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def apply(self, x: Sequence[RingElement]) -> Vector:
        """Matrix times column vector."""
        if len(x) != self.ncols:
            raise DimensionMismatch(f"Vector of length {len(x)} for a {self.nrows}x{self.ncols} matrix")
        out = []
        for row in self.entries:
            acc = self.ring.zero
            for a, b in zip(row, x):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"Cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = [self.apply(other.column(j)) for j in range(other.ncols)]
        return RMatrix.from_columns(self.ring, cols, self.nrows)

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check_shape(other)
        return RMatrix(self.ring, self.nrows, self.ncols,
                       tuple(vec_add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._check_shape(other)
        return RMatrix(self.ring, self.nrows, self.ncols,
                       tuple(vec_sub(a, b) for a, b in zip(self.entries, other.entries)))

    def scale(self, c: RingElement) -> "RMatrix":
        return RMatrix(self.ring, self.nrows, self.ncols, tuple(vec_scale(c, row) for row in self.entries))

    def transpose(self) -> "RMatrix":
        return RMatrix.from_rows(self.ring, self.columns(), self.nrows)

    def is_zero(self) -> bool:
        return all(vec_is_zero(row) for row in self.entries)

    def hstack(self, other: "RMatrix") -> "RMatrix":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack needs equal row counts")
        rows = tuple(a + b for a, b in zip(self.entries, other.entries))
        return RMatrix(self.ring, self.nrows, self.ncols + other.ncols, rows)

    def _check_shape(self, other: "RMatrix"):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch(
                f"Shape {self.nrows}x{self.ncols} does not match {other.nrows}x{other.ncols}")

    def __str__(self) -> str:
        if not self.nrows or not self.ncols:
            return f"[{self.nrows}x{self.ncols} empty]"
        return "\n".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.entries)


@dataclass(frozen=True)
class SmithForm:
    """U * A * V is diagonal with entries t^valuations[k] for k < rank and zero elsewhere."""
    left: RMatrix
    right: RMatrix
    valuations: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.valuations)


def smith_form(matrix: RMatrix) -> SmithForm:
    """Smith form by pivoting on an entry of least valuation, which divides every other entry."""
    ring = matrix.ring
    m, n = matrix.nrows, matrix.ncols
    a = [list(row) for row in matrix.entries]
    u = [list(row) for row in RMatrix.identity(ring, m).entries]
    v = [list(row) for row in RMatrix.identity(ring, n).entries]
    valuations: List[int] = []

    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                entry = a[i][j]
                if entry.is_zero():
                    continue
                val = entry.valuation()
                if best is None or val < best[0]:
                    best = (val, i, j)
                    if val == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            u[k], u[pi] = u[pi], u[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            for row in v:
                row[k], row[pj] = row[pj], row[k]

        scale = invert(a[k][k].divide_by_t_power(val))
        if scale != ring.one:
            a[k] = [scale * x for x in a[k]]
            u[k] = [scale * x for x in u[k]]

        for i in range(k + 1, m):
            if a[i][k].is_zero():
                continue
            q = a[i][k].divide_by_t_power(val)
            a[i] = [x - q * y for x, y in zip(a[i], a[k])]
            u[i] = [x - q * y for x, y in zip(u[i], u[k])]
        for j in range(k + 1, n):
            if a[k][j].is_zero():
                continue
            q = a[k][j].divide_by_t_power(val)
            for row in a:
                row[j] = row[j] - q * row[k]
            for row in v:
                row[j] = row[j] - q * row[k]
        valuations.append(val)

    return SmithForm(RMatrix.from_rows(ring, u, m), RMatrix.from_rows(ring, v, n), tuple(valuations))


def solve_linear(matrix: RMatrix, rhs: Sequence[RingElement]) -> Vector:
    """A solution x of matrix * x = rhs; free Smith coordinates are set to zero."""
    if len(rhs) != matrix.nrows:
        raise DimensionMismatch(
            f"Right-hand side of length {len(rhs)} for a {matrix.nrows}x{matrix.ncols} system")
    ring = matrix.ring
    smith = smith_form(matrix)
    c = smith.left.apply(rhs)
    y = list(zero_vector(ring, matrix.ncols))
    for k, val in enumerate(smith.valuations):
        if c[k].valuation() < val:
            raise NoSolution(f"Row {k} of the Smith system needs t^{val} | {c[k]}", witness=k)
        y[k] = c[k].divide_by_t_power(val)
    for k in range(smith.rank, matrix.nrows):
        if not c[k].is_zero():
            raise NoSolution(f"Row {k} of the Smith system is 0 = {c[k]}", witness=k)
    return smith.right.apply(y)


def kernel_generators(matrix: RMatrix) -> List[Vector]:
    """Generators of {x : matrix * x = 0} as an R-module."""
    ring = matrix.ring
    smith = smith_form(matrix)
    gens = []
    for k in range(matrix.ncols):
        column = smith.right.column(k)
        if k < smith.rank:
            val = smith.valuations[k]
            if val == 0:
                continue
            gens.append(vec_scale(ring.t_power(ring.precision - val), column))
        else:
            gens.append(column)
    return gens


def module_invariants(relations: RMatrix) -> List[int]:
    """Exponents e with R^m / (column span) = sum of R/(t^e); e = precision marks a free summand."""
    ring = relations.ring
    smith = smith_form(relations)
    exponents = [val for val in smith.valuations if val > 0]
    exponents += [ring.precision] * (relations.nrows - smith.rank)
    return sorted(exponents)


def subquotient_invariants(ring: TruncatedRing, dim: int, generators: Sequence[Vector],
                           relations: Sequence[Vector]) -> List[int]:
    """Invariants of span(generators) / span(relations), assuming the second span lies in the first."""
    if not generators:
        return []
    gen_matrix = RMatrix.from_columns(ring, list(generators), dim)
    rel_matrix = RMatrix.from_columns(ring, [vec_scale(-ring.one, r) for r in relations], dim)
    combined = gen_matrix.hstack(rel_matrix)
    syzygies = [vec[:len(generators)] for vec in kernel_generators(combined)]
    return module_invariants(RMatrix.from_columns(ring, syzygies, len(generators)))


def homology_invariants(ring: TruncatedRing, incoming: RMatrix, outgoing: RMatrix,
                        relations_here: Sequence[Vector] = (),
                        relations_below: Sequence[Vector] = ()) -> List[int]:
    """Invariants of ker(outgoing) / im(incoming) at one spot of a complex.

    The relation lists present the spot and the spot below as quotients of free modules;
    they are empty for free complexes.
    """
    dim = outgoing.ncols
    below = outgoing.nrows
    if relations_below:
        lifted = outgoing.hstack(RMatrix.from_columns(ring, list(relations_below), below))
    else:
        lifted = outgoing
    cycles = [vec[:dim] for vec in kernel_generators(lifted)]
    boundaries = incoming.columns() + list(relations_here)
    return subquotient_invariants(ring, dim, cycles, boundaries)


def in_span(ring: TruncatedRing, dim: int, vector: Sequence[RingElement],
            generators: Sequence[Vector]) -> bool:
    """Whether vector is an R-combination of the generators."""
    if vec_is_zero(vector):
        return True
    if not generators:
        return False
    try:
        solve_linear(RMatrix.from_columns(ring, list(generators), dim), vector)
        return True
    except NoSolution:
        return False


def is_invertible(matrix: RMatrix) -> bool:
    """Square with unit determinant, i.e. every Smith diagonal entry a unit."""
    if matrix.nrows != matrix.ncols:
        return False
    smith = smith_form(matrix)
    return smith.rank == matrix.nrows and all(val == 0 for val in smith.valuations)


def matrix_inverse(matrix: RMatrix) -> RMatrix:
    if not is_invertible(matrix):
        raise NoSolution("Matrix is not invertible over the ring", witness=str(matrix))
    smith = smith_form(matrix)
    return smith.right @ smith.left
