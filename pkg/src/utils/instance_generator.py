"""
Seeded random instances for the property tests and experiment sweeps.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.dg_algebra import BlockIndex, DGAlgebra, KoszulTower
from src.hom.graded_hom import GradedHom, Module, as_semifree
from src.modules.dg_module import BlockDGModule, SemiFreeDGModule, base_change, conjugate
from src.ring.linalg import Vector, vec_add, vec_scale
from src.ring.truncated_ring import TruncatedRing


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_vector(ring: TruncatedRing, size: int, rng: np.random.Generator, density: float = 0.5) -> Vector:
    """Random vector; each entry is nonzero-candidate with probability `density`."""
    return tuple(ring.random_element(rng) if rng.random() < density else ring.zero for _ in range(size))


def planted_complex(algebra: DGAlgebra, rng: np.random.Generator, pairs: int = 2, torsion_pairs: int = 0,
                    degree_range: Tuple[int, int] = (0, 2)) -> SemiFreeDGModule:
    """A free generator in degree 0 plus pairs c -> b with d(c) = b (contractible) or d(c) = t b.

    Without torsion pairs the result is homotopy equivalent to the algebra itself.
    """
    ring = algebra.ring
    lo, hi = degree_range
    entries: List[Tuple[int, Optional[int], int]] = [(0, None, 0)]
    for k in range(pairs + torsion_pairs):
        deg = int(rng.integers(lo, hi + 1))
        power = 0 if k < pairs else 1
        entries.append((deg, None, 0))
        entries.append((deg + 1, len(entries) - 1, power))
    order = sorted(range(len(entries)), key=lambda k: (entries[k][0], k))
    position = {old: new for new, old in enumerate(order)}
    degrees = tuple(entries[k][0] for k in order)
    shell = SemiFreeDGModule(algebra, degrees, tuple(() for _ in degrees))
    values = []
    for k in order:
        deg, target, power = entries[k]
        if target is None:
            values.append(shell.zero(deg - 1))
        else:
            values.append(vec_scale(ring.t_power(power), shell.generator(position[target])))
    return SemiFreeDGModule(algebra, degrees, tuple(values))


@dataclass(frozen=True)
class Transvection:
    target: int
    source: int
    degree: int
    gamma: int
    coeff: object


def random_transvections(module: SemiFreeDGModule, rng: np.random.Generator, count: int = 2,
                         upper_only: bool = False, index: Optional[BlockIndex] = None) -> List[Transvection]:
    """Elementary automorphisms b_i -> b_i + c gamma b_j with j != i."""
    algebra = module.algebra
    ring = module.ring
    moves = []
    for _ in range(count * 4):
        if len(moves) == count or module.count < 2:
            break
        i, j = (int(x) for x in rng.choice(module.count, size=2, replace=False))
        k = module.degrees[i] - module.degrees[j]
        if not 0 <= k <= algebra.top_degree or algebra.rank(k) == 0:
            continue
        limit = index.upper_count(k) if (upper_only and index is not None) else algebra.rank(k)
        if limit == 0:
            continue
        s = int(rng.integers(0, limit))
        coeff = ring.random_element(rng)
        if coeff.is_zero():
            coeff = ring.one
        moves.append(Transvection(i, j, k, s, coeff))
    return moves


def apply_transvections(module: SemiFreeDGModule, moves: Sequence[Transvection]) -> SemiFreeDGModule:
    ring = module.ring
    for move in moves:
        gamma = tuple(ring.one if u == move.gamma else ring.zero for u in range(module.algebra.rank(move.degree)))
        shift = vec_scale(move.coeff, module.embed(move.source, move.degree, gamma))
        forward = [module.generator(b) for b in range(module.count)]
        backward = list(forward)
        forward[move.target] = vec_add(forward[move.target], shift)
        backward[move.target] = vec_add(backward[move.target], vec_scale(-ring.one, shift))
        module = conjugate(module, forward, backward)
    return module


def planted_block_module(index: BlockIndex, rng: np.random.Generator, pairs: int = 2, torsion_pairs: int = 0,
                         moves: int = 3) -> Tuple[SemiFreeDGModule, BlockDGModule]:
    """(C, N) with N isomorphic to B (x) C, scrambled so that the delta block is usually nonzero."""
    planted = planted_complex(index.base, rng, pairs, torsion_pairs)
    over_b = base_change(planted, index).over_b
    scrambled = apply_transvections(over_b, random_transvections(over_b, rng, moves, upper_only=True, index=index))
    return planted, BlockDGModule.from_semifree(scrambled, index)


def planted_tower_module(tower: KoszulTower, rng: np.random.Generator, pairs: int = 2, torsion_pairs: int = 0,
                         moves: int = 3) -> Tuple[SemiFreeDGModule, SemiFreeDGModule]:
    """(C, M) with C over R and M isomorphic to K(t_1, ..., t_n) (x) C, scrambled over the top algebra."""
    planted = planted_complex(tower.algebras[0], rng, pairs, torsion_pairs)
    top = planted
    for index in tower.indices:
        top = base_change(top, index).over_b
    return planted, apply_transvections(top, random_transvections(top, rng, moves))


def random_block_candidate(index: BlockIndex, rng: np.random.Generator, degrees: Sequence[int],
                           density: float = 0.5) -> BlockDGModule:
    """Unvalidated alpha and delta values, for checking the validators against the expanded complex."""
    ring = index.ring
    shell = SemiFreeDGModule(index.base, tuple(degrees), tuple(() for _ in degrees))
    alpha = tuple(random_vector(ring, shell.rank(d - 1), rng, density) for d in degrees)
    delta = tuple(random_vector(ring, shell.rank(d - 2), rng, density) for d in degrees)
    return BlockDGModule(index, tuple(degrees), alpha, delta)


def random_hom(source: Module, target: Module, degree: int, rng: np.random.Generator,
               density: float = 0.5) -> GradedHom:
    src, tgt = as_semifree(source), as_semifree(target)
    values = tuple(random_vector(src.ring, tgt.rank(deg + degree), rng, density) for deg in src.degrees)
    return GradedHom(source, target, degree, values)
