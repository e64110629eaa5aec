"""
DG algebras with finite free components: Koszul algebras and the block algebra K(t) tensor A.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.ring.linalg import (RMatrix, Vector, homology_invariants, module_invariants,
                             unit_vector, vec_add, vec_is_zero, vec_scale, zero_vector)
from src.ring.truncated_ring import RingElement, TruncatedRing
from src.utils.exceptions import RingMismatch

UPPER = "upper"
LOWER = "lower"


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True, eq=False)
class DGAlgebra:
    """Graded R-free algebra; degree i has basis gamma_{i,0..r_i-1} and gamma_{0,0} is the unit."""
    ring: TruncatedRing
    ranks: Tuple[int, ...]
    differential: Tuple[RMatrix, ...]
    mult: Dict[Tuple[int, int, int, int], Vector]
    basis_names: Tuple[Tuple[str, ...], ...] = ()
    name: str = "A"
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def d_matrix(self, i: int) -> RMatrix:
        """The differential A_i -> A_{i-1}."""
        if 1 <= i <= self.top_degree:
            return self.differential[i]
        return RMatrix.zeros(self.ring, self.rank(i - 1), self.rank(i))

    def differentiate(self, i: int, x: Sequence[RingElement]) -> Vector:
        return self.d_matrix(i).apply(x)

    def product(self, i: int, s: int, j: int, u: int) -> Vector:
        """gamma_{i,s} * gamma_{j,u} in the basis of degree i + j."""
        value = self.mult.get((i, s, j, u))
        if value is None:
            return zero_vector(self.ring, self.rank(i + j))
        return value

    def left_action(self, i: int, s: int, j: int) -> RMatrix:
        """Matrix of x -> gamma_{i,s} * x from A_j to A_{i+j}."""
        key = ("left", i, s, j)
        if key not in self._cache:
            columns = [self.product(i, s, j, u) for u in range(self.rank(j))]
            self._cache[key] = RMatrix.from_columns(self.ring, columns, self.rank(i + j))
        return self._cache[key]

    def multiply(self, i: int, x: Sequence[RingElement], j: int, y: Sequence[RingElement]) -> Vector:
        acc = zero_vector(self.ring, self.rank(i + j))
        for s, a in enumerate(x):
            if a.is_zero():
                continue
            acc = vec_add(acc, vec_scale(a, self.left_action(i, s, j).apply(y)))
        return acc

    def unit(self) -> Vector:
        return unit_vector(self.ring, self.rank(0), 0)

    def basis_label(self, i: int, s: int) -> str:
        if self.basis_names and i < len(self.basis_names) and s < len(self.basis_names[i]):
            return self.basis_names[i][s]
        return f"g{i}_{s}"

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "names": [list(names) for names in self.basis_names],
            "differential": {str(i): [[a.to_json() for a in row] for row in self.differential[i].entries]
                             for i in range(1, self.top_degree + 1)},
            "mult": [{"left": [i, s], "right": [j, u], "value": [a.to_json() for a in value]}
                     for (i, s, j, u), value in sorted(self.mult.items()) if not vec_is_zero(value)],
        }


def make_algebra(ring: TruncatedRing, ranks: Sequence[int], differential: Dict[int, RMatrix],
                 mult: Dict[Tuple[int, int, int, int], Vector],
                 basis_names: Optional[Sequence[Sequence[str]]] = None, name: str = "A") -> DGAlgebra:
    """Assemble a custom algebra; products with the unit are filled in."""
    ranks = tuple(ranks)
    if not ranks or any(r < 0 for r in ranks):
        raise ValueError(f"Ranks must be a nonempty list of nonnegative integers, got {list(ranks)}")
    mats = [RMatrix.zeros(ring, 0, ranks[0])]
    for i in range(1, len(ranks)):
        mats.append(differential.get(i, RMatrix.zeros(ring, ranks[i - 1], ranks[i])))
    table = dict(mult)
    if ranks[0]:
        for j, r in enumerate(ranks):
            for u in range(r):
                table.setdefault((0, 0, j, u), unit_vector(ring, r, u))
                table.setdefault((j, u, 0, 0), unit_vector(ring, r, u))
    names = tuple(tuple(n) for n in basis_names) if basis_names else ()
    return DGAlgebra(ring, ranks, tuple(mats), table, names, name)


# Koszul algebras

def _koszul_words(count: int, degree: int) -> List[Tuple[int, ...]]:
    """Descending wedge words in generators 1..count, words containing `count` first."""
    if degree < 0 or degree > count:
        return []
    if count == 0:
        return [()]
    return [(count,) + w for w in _koszul_words(count - 1, degree - 1)] + _koszul_words(count - 1, degree)


def _wedge(left: Tuple[int, ...], right: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    """Sign and descending word of left ^ right; sign 0 when a generator repeats."""
    if set(left) & set(right):
        return 0, ()
    word = list(left + right)
    inversions = sum(1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] < word[b])
    return sign(inversions), tuple(sorted(word, reverse=True))


def _word_label(word: Tuple[int, ...]) -> str:
    return "^".join(f"e{k}" for k in word) if word else "1"


def koszul_algebra(ring: TruncatedRing, elements: Sequence[RingElement]) -> DGAlgebra:
    """Exterior algebra on e_1..e_n in degree 1 with d(e_k) = t_k."""
    for t in elements:
        if t.ring != ring:
            raise RingMismatch(f"Koszul element {t} is not in {ring}")
    n = len(elements)
    words = [_koszul_words(n, i) for i in range(n + 1)]
    position = [{w: s for s, w in enumerate(ws)} for ws in words]
    ranks = tuple(len(ws) for ws in words)

    differential = {}
    for i in range(1, n + 1):
        columns = []
        for w in words[i]:
            col = list(zero_vector(ring, ranks[i - 1]))
            for p, k in enumerate(w):
                rest = w[:p] + w[p + 1:]
                col[position[i - 1][rest]] = col[position[i - 1][rest]] + elements[k - 1] * sign(p)
            columns.append(tuple(col))
        differential[i] = RMatrix.from_columns(ring, columns, ranks[i - 1])

    mult = {}
    for i in range(n + 1):
        for s, left in enumerate(words[i]):
            for j in range(n + 1 - i):
                for u, right in enumerate(words[j]):
                    eps, word = _wedge(left, right)
                    if eps:
                        vec = list(zero_vector(ring, ranks[i + j]))
                        vec[position[i + j][word]] = ring.from_int(eps)
                        mult[(i, s, j, u)] = tuple(vec)

    names = tuple(tuple(_word_label(w) for w in ws) for ws in words)
    label = "K(" + ", ".join(str(t) for t in elements) + ")" if elements else "R"
    return make_algebra(ring, ranks, differential, mult, names, label)


# Block algebra B = K(t) tensor A

@dataclass(frozen=True)
class BlockIndex:
    """Identifies B_i with A_{i-1} + A_i: upper basis elements [gamma_{i-1,s}; 0] come first."""
    base: DGAlgebra
    t: RingElement
    block: Optional[DGAlgebra] = field(default=None, compare=False, repr=False)

    @property
    def ring(self) -> TruncatedRing:
        return self.base.ring

    def upper_count(self, i: int) -> int:
        return self.base.rank(i - 1)

    def rank(self, i: int) -> int:
        return self.base.rank(i - 1) + self.base.rank(i)

    def locate(self, i: int, s: int) -> Tuple[str, int, int]:
        """(part, A-degree, A-index) of the B basis element gamma^B_{i,s}."""
        offset = self.upper_count(i)
        if s < offset:
            return UPPER, i - 1, s
        return LOWER, i, s - offset

    def position(self, part: str, i: int, s: int) -> int:
        """B-index in degree i of the A-basis element s of the given part."""
        return s if part == UPPER else self.upper_count(i) + s

    def split(self, i: int, x: Sequence[RingElement]) -> Tuple[Vector, Vector]:
        offset = self.upper_count(i)
        return tuple(x[:offset]), tuple(x[offset:])

    def join(self, upper: Sequence[RingElement], lower: Sequence[RingElement]) -> Vector:
        return tuple(upper) + tuple(lower)


def tensor_with_koszul(algebra: DGAlgebra, t: RingElement) -> Tuple[DGAlgebra, BlockIndex]:
    """B = K(t) tensor A in block form."""
    ring = algebra.ring
    if t.ring != ring:
        raise RingMismatch(f"Koszul element {t} is not in {ring}")
    index = BlockIndex(algebra, t)
    top = algebra.top_degree + 1
    ranks = tuple(index.rank(i) for i in range(top + 1))

    differential = {}
    for i in range(1, top + 1):
        columns = []
        for s in range(ranks[i]):
            part, a_deg, a_idx = index.locate(i, s)
            gamma = unit_vector(ring, algebra.rank(a_deg), a_idx)
            if part == UPPER:
                upper = vec_scale(-ring.one, algebra.differentiate(a_deg, gamma))
                lower = vec_scale(t, gamma)
            else:
                upper = zero_vector(ring, algebra.rank(i - 2))
                lower = algebra.differentiate(a_deg, gamma)
            columns.append(index.join(upper, lower))
        differential[i] = RMatrix.from_columns(ring, columns, ranks[i - 1])

    mult = {}
    for i in range(top + 1):
        for s in range(ranks[i]):
            left = unit_vector(ring, ranks[i], s)
            a_up, a_low = index.split(i, left)
            for j in range(top + 1 - i):
                for u in range(ranks[j]):
                    c_up, c_low = index.split(j, unit_vector(ring, ranks[j], u))
                    upper = vec_add(algebra.multiply(i - 1, a_up, j, c_low),
                                    vec_scale(ring.from_int(sign(i)), algebra.multiply(i, a_low, j - 1, c_up)))
                    lower = algebra.multiply(i, a_low, j, c_low)
                    value = index.join(upper, lower)
                    if not vec_is_zero(value):
                        mult[(i, s, j, u)] = value

    names = []
    for i in range(top + 1):
        row = []
        for s in range(ranks[i]):
            part, a_deg, a_idx = index.locate(i, s)
            label = algebra.basis_label(a_deg, a_idx)
            row.append(f"e*{label}" if part == UPPER else label)
        names.append(tuple(row))
    block = DGAlgebra(ring, ranks, tuple([RMatrix.zeros(ring, 0, ranks[0])] +
                                         [differential[i] for i in range(1, top + 1)]),
                      mult, tuple(names), f"K({t}) x {algebra.name}")
    return block, BlockIndex(algebra, t, block)


@dataclass(frozen=True)
class KoszulTower:
    """R = A_0, A_k = K(t_k) tensor A_{k-1}; indices[k-1] describes A_k over A_{k-1}."""
    algebras: Tuple[DGAlgebra, ...]
    indices: Tuple[BlockIndex, ...]

    @property
    def top(self) -> DGAlgebra:
        return self.algebras[-1]

    @property
    def length(self) -> int:
        return len(self.indices)


def koszul_tower(ring: TruncatedRing, elements: Sequence[RingElement],
                 base: Optional[DGAlgebra] = None) -> KoszulTower:
    """Adjoin one Koszul variable per element, starting from `base` (R by default)."""
    algebras = [base if base is not None else koszul_algebra(ring, [])]
    indices = []
    for t in elements:
        block, index = tensor_with_koszul(algebras[-1], t)
        algebras.append(block)
        indices.append(index)
    return KoszulTower(tuple(algebras), tuple(indices))


# Validation

@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {c.name: {"passed": c.passed, "witness": list(c.witness) if c.witness else None}
                for c in self.checks}


def _first_failure(pairs) -> Optional[tuple]:
    for witness, ok in pairs:
        if not ok:
            return witness
    return None


def validate_algebra(algebra: DGAlgebra) -> ValidationReport:
    """Evaluate every DG algebra axiom on basis elements, pairs and triples."""
    ring = algebra.ring
    top = algebra.top_degree
    basis = [(i, s) for i in range(top + 1) for s in range(algebra.rank(i))]

    def gamma(i, s):
        return unit_vector(ring, algebra.rank(i), s)

    def graded():
        yield (), len(algebra.differential) == top + 1 and all(r >= 0 for r in algebra.ranks)
        for i in range(1, top + 1):
            mat = algebra.differential[i]
            yield (i,), (mat.nrows, mat.ncols) == (algebra.rank(i - 1), algebra.rank(i))
        for (i, s, j, u), value in algebra.mult.items():
            yield (i, s, j, u), len(value) == algebra.rank(i + j)

    def square_zero():
        for i in range(2, top + 1):
            yield (i,), (algebra.d_matrix(i - 1) @ algebra.d_matrix(i)).is_zero()

    def unit():
        if not algebra.rank(0):
            yield (0,), False
            return
        for i, s in basis:
            yield (i, s), (algebra.product(0, 0, i, s) == gamma(i, s)
                           and algebra.product(i, s, 0, 0) == gamma(i, s))

    def leibniz():
        for i, s in basis:
            for j, u in basis:
                lhs = algebra.differentiate(i + j, algebra.product(i, s, j, u))
                rhs = vec_add(algebra.multiply(i - 1, algebra.differentiate(i, gamma(i, s)), j, gamma(j, u)),
                              vec_scale(ring.from_int(sign(i)),
                                        algebra.multiply(i, gamma(i, s), j - 1,
                                                         algebra.differentiate(j, gamma(j, u)))))
                yield (i, s, j, u), lhs == rhs

    def associativity():
        for i, s in basis:
            for j, u in basis:
                left = algebra.product(i, s, j, u)
                for k, w in basis:
                    lhs = algebra.multiply(i + j, left, k, gamma(k, w))
                    rhs = algebra.multiply(i, gamma(i, s), j + k, algebra.product(j, u, k, w))
                    yield (i, s, j, u, k, w), lhs == rhs

    def commutativity():
        for i, s in basis:
            for j, u in basis:
                swapped = vec_scale(ring.from_int(sign(i * j)), algebra.product(j, u, i, s))
                yield (i, s, j, u), algebra.product(i, s, j, u) == swapped

    def odd_squares():
        for i, s in basis:
            if i % 2:
                yield (i, s), vec_is_zero(algebra.product(i, s, i, s))

    checks = (
        AxiomCheck("positively_graded", *_result(graded())),
        AxiomCheck("differential_squares_to_zero", *_result(square_zero())),
        AxiomCheck("unital", *_result(unit())),
        AxiomCheck("leibniz", *_result(leibniz())),
        AxiomCheck("associative", *_result(associativity())),
        AxiomCheck("graded_commutative", *_result(commutativity())),
        AxiomCheck("odd_squares_zero", *_result(odd_squares())),
    )
    return ValidationReport(checks)


def _result(pairs) -> Tuple[bool, Optional[tuple]]:
    witness = _first_failure(pairs)
    return witness is None, witness


def algebra_homology(algebra: DGAlgebra, i: int) -> List[int]:
    """Invariants of H_i(A) as an R-module."""
    return homology_invariants(algebra.ring, algebra.d_matrix(i + 1), algebra.d_matrix(i))


def check_h0_reduction(index: BlockIndex, block: DGAlgebra) -> bool:
    """H_0(B) agrees with H_0(A)/tH_0(A)."""
    ring = index.ring
    base = index.base
    rank0 = base.rank(0)
    relations = base.d_matrix(1).hstack(RMatrix.identity(ring, rank0).scale(index.t))
    return algebra_homology(block, 0) == module_invariants(relations)


def structure_agrees(first: DGAlgebra, second: DGAlgebra) -> bool:
    """Equal ranks, differentials and structure constants under the identity basis map."""
    if first.ring != second.ring or first.ranks != second.ranks:
        return False
    for i in range(1, first.top_degree + 1):
        if first.d_matrix(i) != second.d_matrix(i):
            return False
    for i in range(first.top_degree + 1):
        for s in range(first.rank(i)):
            for j in range(first.top_degree + 1 - i):
                for u in range(first.rank(j)):
                    if first.product(i, s, j, u) != second.product(i, s, j, u):
                        return False
    return True


def koszul_identification(ring: TruncatedRing, elements: Sequence[RingElement]) -> bool:
    """The exterior algebra on the elements matches the iterated block construction."""
    return structure_agrees(koszul_algebra(ring, elements), koszul_tower(ring, elements).top)

