"""
Semi-free DG modules given by semi-basis values, and their block form over B = K(t) tensor A.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.algebra.dg_algebra import (LOWER, UPPER, AxiomCheck, BlockIndex, DGAlgebra, ValidationReport,
                                    sign, structure_agrees)
from src.ring.linalg import (RMatrix, Vector, homology_invariants, is_invertible, vec_add,
                             vec_is_zero, vec_scale, vec_valuation, zero_vector)
from src.ring.truncated_ring import RingElement, TruncatedRing
from src.utils.exceptions import (AlgebraMismatch, BlockEquationViolation, DimensionMismatch,
                                  LeibnizViolation, SquareNonzero, WindowTooWide)

BasisKey = Tuple[int, int, int]
Window = Tuple[int, int]


def check_algebra(expected: DGAlgebra, actual: DGAlgebra):
    """Raise AlgebraMismatch unless the two algebras are the same DG algebra."""
    if expected is actual:
        return
    if not structure_agrees(expected, actual):
        raise AlgebraMismatch(f"Algebra {actual.name} does not match {expected.name}")


@dataclass(frozen=True, eq=False)
class SemiFreeDGModule:
    """Free graded module on semi-basis elements b (sorted by degree) with d(b) stored as a vector.

    The R-basis of degree n consists of the keys (b, j, s), meaning gamma_{j,s} * b with
    j = n - |b|, ordered by b and then s. `truncated_at` marks a representation that is only
    trustworthy through that degree.
    """
    algebra: DGAlgebra
    degrees: Tuple[int, ...]
    values: Tuple[Vector, ...]
    truncated_at: Optional[int] = None
    labels: Tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if list(self.degrees) != sorted(self.degrees):
            raise ValueError("Semi-basis degrees must be listed in nondecreasing order")
        if len(self.values) != len(self.degrees):
            raise DimensionMismatch(f"{len(self.values)} values for {len(self.degrees)} semi-basis elements")

    @property
    def ring(self) -> TruncatedRing:
        return self.algebra.ring

    @property
    def count(self) -> int:
        return len(self.degrees)

    @property
    def min_degree(self) -> int:
        return self.degrees[0] if self.degrees else 0

    @property
    def max_degree(self) -> int:
        """Highest degree with a nonzero component."""
        return self.degrees[-1] + self.algebra.top_degree if self.degrees else -1

    def semibasis_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for d in self.degrees:
            counts[d] = counts.get(d, 0) + 1
        return counts

    def label(self, b: int) -> str:
        return self.labels[b] if b < len(self.labels) else f"b{b}"

    def basis(self, n: int) -> List[BasisKey]:
        key = ("basis", n)
        if key not in self._cache:
            keys = []
            for b, deg in enumerate(self.degrees):
                j = n - deg
                for s in range(self.algebra.rank(j)):
                    keys.append((b, j, s))
            self._cache[key] = keys
        return self._cache[key]

    def index(self, n: int) -> Dict[BasisKey, int]:
        key = ("index", n)
        if key not in self._cache:
            self._cache[key] = {k: p for p, k in enumerate(self.basis(n))}
        return self._cache[key]

    def rank(self, n: int) -> int:
        return len(self.basis(n))

    def zero(self, n: int) -> Vector:
        return zero_vector(self.ring, self.rank(n))

    def generator(self, b: int) -> Vector:
        """The semi-basis element b as a vector of degree |b|."""
        return self.embed(b, 0, self.algebra.unit())

    def embed(self, b: int, j: int, coefficients: Sequence[RingElement]) -> Vector:
        """a * b for a in A_j given by its coefficients."""
        n = self.degrees[b] + j
        vec = list(self.zero(n))
        idx = self.index(n)
        for s, c in enumerate(coefficients):
            if not c.is_zero():
                vec[idx[(b, j, s)]] = c
        return tuple(vec)

    def action_matrix(self, i: int, s: int, n: int) -> RMatrix:
        """Matrix of x -> gamma_{i,s} * x from degree n to degree n + i."""
        key = ("act", i, s, n)
        if key not in self._cache:
            target = self.index(n + i)
            columns = []
            for b, j, u in self.basis(n):
                col = list(self.zero(n + i))
                for w, c in enumerate(self.algebra.product(i, s, j, u)):
                    if not c.is_zero():
                        col[target[(b, i + j, w)]] = c
                columns.append(tuple(col))
            self._cache[key] = RMatrix.from_columns(self.ring, columns, self.rank(n + i))
        return self._cache[key]

    def act(self, i: int, s: int, x: Sequence[RingElement], n: int) -> Vector:
        return self.action_matrix(i, s, n).apply(x)

    def act_by(self, i: int, a: Sequence[RingElement], x: Sequence[RingElement], n: int) -> Vector:
        """a * x for a in A_i and x of degree n."""
        acc = self.zero(n + i)
        for s, c in enumerate(a):
            if not c.is_zero():
                acc = vec_add(acc, vec_scale(c, self.act(i, s, x, n)))
        return acc

    def differential_matrix(self, n: int) -> RMatrix:
        """d(gamma b) = d(gamma) b + (-1)^|gamma| gamma d(b), from degree n to n - 1."""
        key = ("d", n)
        if key not in self._cache:
            ring = self.ring
            columns = []
            for b, j, s in self.basis(n):
                gamma = tuple(ring.one if u == s else ring.zero for u in range(self.algebra.rank(j)))
                first = self.embed(b, j - 1, self.algebra.differentiate(j, gamma)) if j >= 1 \
                    else self.zero(n - 1)
                second = self.act(j, s, self.values[b], self.degrees[b] - 1)
                columns.append(vec_add(first, vec_scale(ring.from_int(sign(j)), second)))
            self._cache[key] = RMatrix.from_columns(ring, columns, self.rank(n - 1))
        return self._cache[key]

    def apply_differential(self, x: Sequence[RingElement], n: int) -> Vector:
        return self.differential_matrix(n).apply(x)

    def with_values(self, values: Sequence[Vector], truncated_at: Optional[int] = None) -> "SemiFreeDGModule":
        return SemiFreeDGModule(self.algebra, self.degrees, tuple(values),
                                truncated_at if truncated_at is not None else self.truncated_at, self.labels)

    def describe_key(self, key: BasisKey) -> str:
        b, j, s = key
        gamma = self.algebra.basis_label(j, s)
        return self.label(b) if gamma == "1" and j == 0 else f"{gamma}*{self.label(b)}"


def extension_matrix(source: SemiFreeDGModule, target: SemiFreeDGModule, p: int,
                     values: Sequence[Vector], n: int) -> RMatrix:
    """R-matrix, degree n to n + p, of the map with f(gamma b) = (-1)^{p|gamma|} gamma f(b)."""
    ring = source.ring
    columns = []
    for b, j, s in source.basis(n):
        image = target.act(j, s, values[b], source.degrees[b] + p)
        columns.append(vec_scale(ring.from_int(sign(p * j)), image))
    return RMatrix.from_columns(ring, columns, target.rank(n + p))


def _normalize_values(module_degrees: Sequence[int], values: Union[Sequence, Mapping, None],
                      rank_of, ring: TruncatedRing, shift: int) -> Tuple[Vector, ...]:
    out = []
    for b, deg in enumerate(module_degrees):
        if values is None:
            raw = None
        elif isinstance(values, Mapping):
            raw = values.get(b)
        else:
            raw = values[b] if b < len(values) else None
        size = rank_of(deg + shift)
        vec = zero_vector(ring, size) if raw is None else tuple(raw)
        if len(vec) != size:
            raise DimensionMismatch(
                f"Value for semi-basis element {b} has length {len(vec)}, expected {size}", witness=b)
        out.append(vec)
    return tuple(out)


def degrees_from_counts(semibasis_counts: Mapping[int, int]) -> Tuple[int, ...]:
    degrees = []
    for deg in sorted(semibasis_counts):
        if semibasis_counts[deg] < 0:
            raise ValueError(f"Negative semi-basis count in degree {deg}")
        degrees.extend([deg] * semibasis_counts[deg])
    return tuple(degrees)


def leibniz_failure(module: SemiFreeDGModule) -> Optional[tuple]:
    """First (gamma, basis key) where d(gamma x) differs from d(gamma) x + (-1)^|gamma| gamma d(x)."""
    algebra = module.algebra
    ring = module.ring
    for n in range(module.min_degree, module.max_degree + 1):
        for pos, key in enumerate(module.basis(n)):
            x = tuple(ring.one if q == pos else ring.zero for q in range(module.rank(n)))
            dx = module.apply_differential(x, n)
            for i in range(algebra.top_degree + 1):
                for s in range(algebra.rank(i)):
                    gamma = tuple(ring.one if u == s else ring.zero for u in range(algebra.rank(i)))
                    lhs = module.apply_differential(module.act(i, s, x, n), n + i)
                    first = module.act_by(i - 1, algebra.differentiate(i, gamma), x, n)
                    second = vec_scale(ring.from_int(sign(i)), module.act(i, s, dx, n - 1))
                    if lhs != vec_add(first, second):
                        return (i, s) + key
    return None


def square_failure(module: SemiFreeDGModule) -> Optional[int]:
    """First semi-basis element b with d(d(b)) != 0; enough by the Leibniz rule."""
    for b, deg in enumerate(module.degrees):
        if not vec_is_zero(module.apply_differential(module.values[b], deg - 1)):
            return b
    return None


def validate_semifree(module: SemiFreeDGModule) -> ValidationReport:
    leibniz = leibniz_failure(module)
    square = square_failure(module)
    return ValidationReport((
        AxiomCheck("leibniz", leibniz is None, leibniz),
        AxiomCheck("square_zero", square is None, None if square is None else (square,)),
    ))


def make_semifree(algebra: DGAlgebra, semibasis_counts: Mapping[int, int],
                  alpha_values: Union[Sequence, Mapping, None] = None,
                  truncated_at: Optional[int] = None, labels: Sequence[str] = ()) -> SemiFreeDGModule:
    """Validated semi-free module; alpha_values[b] is d(b) in the R-basis of degree |b| - 1."""
    degrees = degrees_from_counts(semibasis_counts)
    shell = SemiFreeDGModule(algebra, degrees, tuple(() for _ in degrees))
    values = _normalize_values(degrees, alpha_values, shell.rank, algebra.ring, -1)
    module = SemiFreeDGModule(algebra, degrees, values, truncated_at, tuple(labels))
    witness = leibniz_failure(module)
    if witness is not None:
        raise LeibnizViolation(f"Leibniz rule fails at {witness}", witness=witness)
    b = square_failure(module)
    if b is not None:
        raise SquareNonzero(f"d(d({module.label(b)})) is not zero", witness=module.label(b))
    return module


def free_module(algebra: DGAlgebra, shift: int = 0) -> SemiFreeDGModule:
    """The algebra as a module over itself, generated in degree `shift`."""
    return make_semifree(algebra, {shift: 1})


def suspend(module: SemiFreeDGModule, n: int) -> SemiFreeDGModule:
    """Sigma^n M: degrees shift by n and the coefficient of gamma b' picks up (-1)^{n(1+|gamma|)}."""
    values = []
    for b, deg in enumerate(module.degrees):
        keys = module.basis(deg - 1)
        values.append(tuple(c * sign(n * (1 + j)) for c, (_, j, _) in zip(module.values[b], keys)))
    truncated = None if module.truncated_at is None else module.truncated_at + n
    return SemiFreeDGModule(module.algebra, tuple(d + n for d in module.degrees), tuple(values),
                            truncated, module.labels)


def conjugate(module: SemiFreeDGModule, forward: Sequence[Vector], backward: Sequence[Vector]) -> SemiFreeDGModule:
    """Transport the differential along a degree-0 automorphism g (values of g and g^-1 on b)."""
    values = []
    for b, deg in enumerate(module.degrees):
        pulled = module.apply_differential(backward[b], deg)
        values.append(extension_matrix(module, module, 0, forward, deg - 1).apply(pulled))
    return module.with_values(values)


def is_minimal(module: Union[SemiFreeDGModule, "BlockDGModule"]) -> bool:
    """Every degree-0 algebra coefficient of every d(b) is a non-unit of A_0."""
    if isinstance(module, BlockDGModule):
        module = module.over_b
    algebra = module.algebra
    for b, deg in enumerate(module.degrees):
        coefficients: Dict[int, List[RingElement]] = {}
        for c, (target, j, s) in zip(module.values[b], module.basis(deg - 1)):
            if j == 0:
                coefficients.setdefault(target, list(zero_vector(module.ring, algebra.rank(0))))[s] = c
        for coeffs in coefficients.values():
            if vec_is_zero(coeffs):
                continue
            if algebra.rank(0) == 1:
                if coeffs[0].is_unit():
                    return False
                continue
            mult = RMatrix.zeros(module.ring, algebra.rank(0), algebra.rank(0))
            for s, c in enumerate(coeffs):
                mult = mult + algebra.left_action(0, s, 0).scale(c)
            if is_invertible(mult):
                return False
    return True


# Block form over B

@dataclass(frozen=True, eq=False)
class BlockDGModule:
    """Semi-free B-module with d[0; b] = [delta(b); alpha(b)] and d[b; 0] = [-alpha(b); t b]."""
    index: BlockIndex
    degrees: Tuple[int, ...]
    alpha: Tuple[Vector, ...]
    delta: Tuple[Vector, ...]
    truncated_at: Optional[int] = None
    labels: Tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def ring(self) -> TruncatedRing:
        return self.index.ring

    @property
    def algebra(self) -> DGAlgebra:
        return self.index.block

    @property
    def base_algebra(self) -> DGAlgebra:
        return self.index.base

    @property
    def underlying(self) -> SemiFreeDGModule:
        """M with alpha as its (not necessarily square-zero) differential."""
        if "underlying" not in self._cache:
            self._cache["underlying"] = SemiFreeDGModule(self.base_algebra, self.degrees, self.alpha,
                                                         self.truncated_at, self.labels)
        return self._cache["underlying"]

    def _layout(self, n: int) -> List[Tuple[str, int]]:
        """For each position of N_n, the part and position in M_{n-1} (upper) or M_n (lower)."""
        key = ("layout", n)
        if key not in self._cache:
            m = self.underlying
            layout = []
            for b, jb, sb in self._shape_over_b().basis(n):
                part, j, s = self.index.locate(jb, sb)
                where = n - 1 if part == UPPER else n
                layout.append((part, m.index(where)[(b, j, s)]))
            self._cache[key] = layout
        return self._cache[key]

    def split(self, x: Sequence[RingElement], n: int) -> Tuple[Vector, Vector]:
        """Vector of N_n as (upper in M_{n-1}, lower in M_n)."""
        m = self.underlying
        upper = list(m.zero(n - 1))
        lower = list(m.zero(n))
        for c, (part, pos) in zip(x, self._layout(n)):
            if part == UPPER:
                upper[pos] = c
            else:
                lower[pos] = c
        return tuple(upper), tuple(lower)

    def join(self, upper: Sequence[RingElement], lower: Sequence[RingElement], n: int) -> Vector:
        return tuple(upper[pos] if part == UPPER else lower[pos] for part, pos in self._layout(n))

    def _shape_over_b(self) -> SemiFreeDGModule:
        """Semi-basis bookkeeping over B, without differential values."""
        if "shape" not in self._cache:
            self._cache["shape"] = SemiFreeDGModule(self.algebra, self.degrees, tuple(() for _ in self.degrees))
        return self._cache["shape"]

    @property
    def over_b(self) -> SemiFreeDGModule:
        """The same module as a generic semi-free module over B."""
        if "over_b" not in self._cache:
            values = tuple(self.join(self.delta[b], self.alpha[b], deg - 1)
                           for b, deg in enumerate(self.degrees))
            self._cache["over_b"] = SemiFreeDGModule(self.algebra, self.degrees, values,
                                                     self.truncated_at, self.labels)
        return self._cache["over_b"]

    @classmethod
    def from_semifree(cls, module: SemiFreeDGModule, index: BlockIndex) -> "BlockDGModule":
        """Read a semi-free B-module into block form."""
        check_algebra(index.block, module.algebra)
        shell = cls(index, module.degrees, tuple(() for _ in module.degrees), tuple(() for _ in module.degrees),
                    module.truncated_at, module.labels)
        alpha, delta = [], []
        for b, deg in enumerate(module.degrees):
            upper, lower = shell.split(module.values[b], deg - 1)
            delta.append(upper)
            alpha.append(lower)
        return cls(index, module.degrees, tuple(alpha), tuple(delta), module.truncated_at, module.labels)

    def alpha_matrix(self, n: int) -> RMatrix:
        return self.underlying.differential_matrix(n)

    def delta_matrix(self, n: int) -> RMatrix:
        m = self.underlying
        return extension_matrix(m, m, -2, self.delta, n)

    def xi_matrix(self, n: int) -> RMatrix:
        """The upper-left block -alpha_{n-1} of d on N_n."""
        return self.alpha_matrix(n - 1).scale(-self.ring.one)

    def tau_matrix(self, n: int) -> RMatrix:
        """The lower-left block t of d on N_n."""
        return RMatrix.identity(self.ring, self.underlying.rank(n - 1)).scale(self.index.t)

    def block_differential(self, n: int) -> RMatrix:
        """[[-alpha_{n-1}, delta_n], [t, alpha_n]] on N_n = M_{n-1} + M_n."""
        xi, tau = self.xi_matrix(n), self.tau_matrix(n)
        delta, alpha = self.delta_matrix(n), self.alpha_matrix(n)
        top = [xi.entries[r] + delta.entries[r] for r in range(xi.nrows)]
        bottom = [tau.entries[r] + alpha.entries[r] for r in range(tau.nrows)]
        return RMatrix.from_rows(self.ring, top + bottom, xi.ncols + delta.ncols)

    def delta_valuation(self) -> int:
        return min((vec_valuation(self.ring, v) for v in self.delta), default=self.ring.precision)

    def with_data(self, alpha: Sequence[Vector], delta: Sequence[Vector]) -> "BlockDGModule":
        return BlockDGModule(self.index, self.degrees, tuple(alpha), tuple(delta), self.truncated_at, self.labels)

    @property
    def min_degree(self) -> int:
        return self.over_b.min_degree

    @property
    def max_degree(self) -> int:
        return self.over_b.max_degree


def _first_column_difference(lhs: RMatrix, rhs: RMatrix) -> Optional[int]:
    for col, (a, b) in enumerate(zip(lhs.columns(), rhs.columns())):
        if a != b:
            return col
    return None


def alpha_square_failure(module: BlockDGModule) -> Optional[Tuple[int, int]]:
    """First (degree, column) where alpha alpha != -t delta."""
    m = module.underlying
    for n in range(m.min_degree, m.max_degree + 1):
        lhs = module.alpha_matrix(n - 1) @ module.alpha_matrix(n)
        col = _first_column_difference(lhs, module.delta_matrix(n).scale(-module.index.t))
        if col is not None:
            return n, col
    return None


def delta_commute_failure(module: BlockDGModule) -> Optional[Tuple[int, int]]:
    """First (degree, column) where delta alpha != alpha delta."""
    m = module.underlying
    for n in range(m.min_degree, m.max_degree + 1):
        lhs = module.delta_matrix(n - 1) @ module.alpha_matrix(n)
        col = _first_column_difference(lhs, module.alpha_matrix(n - 2) @ module.delta_matrix(n))
        if col is not None:
            return n, col
    return None


def validate_block_data(module: BlockDGModule) -> ValidationReport:
    leibniz = leibniz_failure(module.underlying)
    square = alpha_square_failure(module)
    commute = delta_commute_failure(module)
    return ValidationReport((
        AxiomCheck("alpha_leibniz", leibniz is None, leibniz),
        AxiomCheck("alpha_square_is_minus_t_delta", square is None, square),
        AxiomCheck("delta_commutes_with_alpha", commute is None, commute),
    ))


def make_block_module(index: BlockIndex, semibasis_counts: Mapping[int, int],
                      alpha_values: Union[Sequence, Mapping, None] = None,
                      delta_values: Union[Sequence, Mapping, None] = None,
                      truncated_at: Optional[int] = None, labels: Sequence[str] = ()) -> BlockDGModule:
    """Validated block module; alpha(b) lives in M_{|b|-1} and delta(b) in M_{|b|-2}."""
    degrees = degrees_from_counts(semibasis_counts)
    shell = SemiFreeDGModule(index.base, degrees, tuple(() for _ in degrees))
    alpha = _normalize_values(degrees, alpha_values, shell.rank, index.ring, -1)
    delta = _normalize_values(degrees, delta_values, shell.rank, index.ring, -2)
    module = BlockDGModule(index, degrees, alpha, delta, truncated_at, tuple(labels))
    check_block_module(module)
    return module


def check_block_module(module: BlockDGModule, leibniz: bool = True):
    """Raise on the first violated block equation."""
    witness = leibniz_failure(module.underlying) if leibniz else None
    if witness is not None:
        raise LeibnizViolation(f"Leibniz rule fails at {witness}", witness=witness)
    m = module.underlying
    failure = alpha_square_failure(module)
    if failure is not None:
        n, col = failure
        raise SquareNonzero(f"alpha alpha != -t delta on {m.describe_key(m.basis(n)[col])} (degree {n})",
                            witness=failure)
    failure = delta_commute_failure(module)
    if failure is not None:
        n, col = failure
        raise BlockEquationViolation(
            f"delta alpha != alpha delta on {m.describe_key(m.basis(n)[col])} (degree {n})", witness=failure)


def base_change(module: SemiFreeDGModule, index: BlockIndex) -> BlockDGModule:
    """B tensor_A M: same alpha, delta = 0."""
    check_algebra(index.base, module.algebra)
    delta = tuple(module.zero(deg - 2) for deg in module.degrees)
    return BlockDGModule(index, module.degrees, module.values, delta, module.truncated_at, module.labels)


# Fully expanded R-linear picture

@dataclass(frozen=True)
class RComplex:
    """Finite complex of free R-modules in degrees lo..hi; differentials[n] maps degree n to n - 1."""
    ring: TruncatedRing
    lo: int
    hi: int
    ranks: Tuple[int, ...]
    differentials: Tuple[RMatrix, ...]

    def rank(self, n: int) -> int:
        return self.ranks[n - self.lo] if self.lo <= n <= self.hi else 0

    def d_matrix(self, n: int) -> RMatrix:
        if self.lo <= n <= self.hi:
            return self.differentials[n - self.lo]
        return RMatrix.zeros(self.ring, self.rank(n - 1), self.rank(n))

    def square_failure(self) -> Optional[int]:
        for n in range(self.lo + 1, self.hi + 1):
            if not (self.d_matrix(n - 1) @ self.d_matrix(n)).is_zero():
                return n
        return None

    def is_complex(self) -> bool:
        return self.square_failure() is None

    def homology(self, n: int) -> List[int]:
        return homology_invariants(self.ring, self.d_matrix(n + 1), self.d_matrix(n))


def expand_to_r_linear(module: Union[SemiFreeDGModule, BlockDGModule]) -> RComplex:
    """The underlying complex of R-modules; block modules use the [M_{n-1}; M_n] ordering."""
    lo, hi = module.min_degree, module.max_degree
    if hi < lo:
        return RComplex(module.ring, 0, -1, (), ())
    if isinstance(module, BlockDGModule):
        ranks = tuple(module.underlying.rank(n - 1) + module.underlying.rank(n) for n in range(lo, hi + 1))
        mats = tuple(module.block_differential(n) for n in range(lo, hi + 1))
    else:
        ranks = tuple(module.rank(n) for n in range(lo, hi + 1))
        mats = tuple(module.differential_matrix(n) for n in range(lo, hi + 1))
    return RComplex(module.ring, lo, hi, ranks, mats)


def default_window(module) -> Window:
    lo = module.min_degree
    hi = module.max_degree
    if module.truncated_at is not None:
        hi = min(hi, module.truncated_at - 1)
    return lo, hi


def check_window(module, window: Window):
    """One degree of margin above the window must be represented."""
    lo, hi = window
    if module.truncated_at is not None and hi + 1 > module.truncated_at:
        raise WindowTooWide(
            f"Window top {hi} needs degree {hi + 1}, but the module is only represented through "
            f"degree {module.truncated_at}", witness=window)


def homology(module, window: Optional[Window] = None) -> Dict[int, List[int]]:
    """Invariant exponents of H_n for each n in the window (R/(t^e) summands, e = precision for R)."""
    if not isinstance(module, (SemiFreeDGModule, BlockDGModule)):
        return module.homology(window)
    window = window or default_window(module)
    check_window(module, window)
    complex_ = expand_to_r_linear(module)
    return {n: complex_.homology(n) for n in range(window[0], window[1] + 1)}


def total_rank(module: Union[SemiFreeDGModule, BlockDGModule]) -> int:
    return sum(module.over_b.rank(n) if isinstance(module, BlockDGModule) else module.rank(n)
               for n in range(module.min_degree, module.max_degree + 1))


def same_module(first: SemiFreeDGModule, second: SemiFreeDGModule) -> bool:
    """Identical semi-basis degrees and differential values over the same algebra."""
    return (first.algebra is second.algebra or structure_agrees(first.algebra, second.algebra)) \
        and first.degrees == second.degrees and first.values == second.values


def term_vector(module: SemiFreeDGModule, degree: int,
                terms: Sequence[Tuple[RingElement, Tuple[int, int], int]]) -> Vector:
    """Vector of the given degree from (coeff, (j, s), b) terms meaning coeff * gamma_{j,s} * b."""
    vec = list(module.zero(degree))
    idx = module.index(degree)
    for coeff, (j, s), b in terms:
        key = (b, j, s)
        if key not in idx:
            raise DimensionMismatch(f"gamma_{j},{s} * {module.label(b)} does not have degree {degree}",
                                    witness=key)
        vec[idx[key]] = vec[idx[key]] + coeff
    return tuple(vec)
