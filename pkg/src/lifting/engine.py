"""
The t-adic lifting loop: drive the delta block of a B-module to zero one power of t at a time.

Stage n starts from N with differential [[-alpha, t^{n-1} delta], [t, alpha]]. The degree -2
cycle e_b -> [0; delta(b)] gets a null-homotopy S with S(e_b) = [v(b); z(b)], and then

    alpha' = alpha + t^n z,    delta' = v - t^{n-1} z z,

with the isomorphism e_b -> [-t^{n-1} z(b); b] from N to the new module.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from src.hom.graded_hom import (GradedHom, HomComplexSlice, block_hom, compose, describe_hom, hom_slice,
                                slice_layout)
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, base_change, check_block_module,
                                   extension_matrix)
from src.ring.linalg import Vector, solve_linear, vec_add, vec_is_zero, vec_scale, vec_sub, zero_vector
from src.utils.exceptions import NoSolution, NotAUnit, ObstructionNonzero, ShapeError

Perturbation = Callable[[int, List[Vector]], Optional[Vector]]


@dataclass(frozen=True)
class StepResult:
    stage: int
    module: BlockDGModule
    next_module: BlockDGModule
    correction: GradedHom
    z: Tuple[Vector, ...]
    v: Tuple[Vector, ...]
    delta: Tuple[Vector, ...]
    elementary_iso: GradedHom
    elementary_inverse: GradedHom
    params: Vector

    @property
    def delta_valuation(self) -> int:
        return self.next_module.delta_valuation()

    def record(self) -> dict:
        return {"n": self.stage, "solved": True, "delta_valuation": self.delta_valuation,
                "params": [a.to_json() for a in self.params]}


@dataclass(frozen=True)
class LiftResult:
    """lifted is M over A; iso maps the input N to B tensor M, iso_inverse goes back."""
    source: BlockDGModule
    lifted: SemiFreeDGModule
    base_changed: BlockDGModule
    iso: GradedHom
    iso_inverse: GradedHom
    steps: Tuple[StepResult, ...]
    transcript: Tuple[dict, ...] = field(default_factory=tuple)

    @property
    def corrections(self) -> List[Tuple[Vector, ...]]:
        return [step.z for step in self.steps]

    @property
    def delta_valuations(self) -> List[int]:
        return [record["delta_valuation"] for record in self.transcript]

    def composite_from_steps(self) -> GradedHom:
        """Product of the elementary isomorphisms, for comparison with iso."""
        current = None
        for step in self.steps:
            current = step.elementary_iso if current is None else compose(step.elementary_iso, current)
        return current


def _z_composite(module: SemiFreeDGModule, z: Sequence[Vector], vector: Sequence, n: int):
    """z applied to a vector of degree n, z being A-linear of degree -1."""
    return extension_matrix(module, module, -1, z, n).apply(vector)


def carried_delta(module: BlockDGModule, stage: int) -> Tuple[Vector, ...]:
    """delta with t^{stage-1} delta equal to the delta block, checked against alpha alpha = -t^stage delta."""
    ring = module.ring
    k = stage - 1
    try:
        delta = tuple(tuple(c.divide_by_t_power(k) for c in vec) for vec in module.delta)
    except NotAUnit:
        raise ShapeError(f"The delta block is not divisible by t^{k}", witness=stage)
    candidate = BlockDGModule(module.index, module.degrees, module.alpha, delta, module.truncated_at,
                              module.labels)
    m = candidate.underlying
    t_power = ring.t_power(stage)
    for n in range(m.min_degree, m.max_degree + 1):
        lhs = candidate.alpha_matrix(n - 1) @ candidate.alpha_matrix(n)
        if lhs != candidate.delta_matrix(n).scale(-t_power):
            raise ShapeError(f"No delta with alpha alpha = -t^{stage} delta could be recovered in degree {n}",
                             witness=stage)
    return delta


def _cycle(module: BlockDGModule, delta: Sequence[Vector]) -> GradedHom:
    zeros = [zero_vector(module.ring, module.underlying.rank(deg - 3)) for deg in module.degrees]
    return block_hom(module, module, -2, zeros, delta)


def lift_one_step(module: BlockDGModule, n: int, delta: Optional[Sequence[Vector]] = None,
                  perturbation: Optional[Perturbation] = None, verbose: bool = False) -> StepResult:
    """One stage of the loop; `delta` is the carried delta^{(n-1)}, recovered by division when omitted."""
    if n < 1:
        raise ShapeError(f"Stages start at 1, got {n}")
    ring = module.ring
    if delta is None:
        delta = module.delta if n == 1 else carried_delta(module, n)
    delta = tuple(tuple(v) for v in delta)
    scaled = tuple(vec_scale(ring.t_power(n - 1), v) for v in delta)
    if scaled != module.delta:
        raise ShapeError(f"The delta block is not t^{n - 1} times the carried delta", witness=n)

    cycle = _cycle(module, delta)
    homotopies: HomComplexSlice = hom_slice(module, module, -1)
    rhs = tuple(cycle.values[b][pos] for b, pos in slice_layout(module, module, -2))
    if verbose:
        print(f"🔍 Stage {n}: {homotopies.size} unknowns, {len(rhs)} equations")
    try:
        params = solve_linear(homotopies.matrix, rhs)
    except NoSolution:
        raise ObstructionNonzero(n, witness=describe_hom(cycle))
    if perturbation is not None:
        extra = perturbation(n, homotopies.kernel())
        if extra is not None:
            if not vec_is_zero(homotopies.matrix.apply(extra)):
                raise ValueError(f"Perturbation at stage {n} is not in the kernel of the homotopy system")
            params = vec_add(params, extra)
    correction = homotopies.to_hom(params)

    m = module.underlying
    z = correction.z_values()
    v = correction.v_values()
    t_n = ring.t_power(n)
    t_prev = ring.t_power(n - 1)
    alpha = tuple(vec_add(a, vec_scale(t_n, zb)) for a, zb in zip(module.alpha, z))
    new_delta = tuple(vec_sub(vb, vec_scale(t_prev, _z_composite(m, z, zb, deg - 1)))
                      for vb, zb, deg in zip(v, z, module.degrees))
    block = tuple(vec_scale(t_n, d) for d in new_delta)
    next_module = module.with_data(alpha, block)
    check_block_module(next_module, leibniz=False)

    shift = tuple(vec_scale(t_prev, zb) for zb in z)
    generators = tuple(m.generator(b) for b in range(m.count))
    iso = block_hom(module, next_module, 0, tuple(vec_scale(-ring.one, s) for s in shift), generators)
    inverse = block_hom(next_module, module, 0, shift, generators)
    if verbose:
        print(f"✅ Stage {n}: delta valuation now {next_module.delta_valuation()}")
    return StepResult(n, module, next_module, correction, z, v, new_delta, iso, inverse, params)


def lift(module: BlockDGModule, stages: Optional[int] = None, perturbation: Optional[Perturbation] = None,
         verbose: bool = False) -> LiftResult:
    """Run stages 1..precision (or `stages`), stopping early once the delta block vanishes."""
    ring = module.ring
    stages = stages or ring.precision
    current = module
    delta = module.delta
    steps: List[StepResult] = []
    transcript: List[dict] = [{"n": 0, "solved": True, "delta_valuation": module.delta_valuation(), "params": []}]
    for n in range(1, stages + 1):
        if all(vec_is_zero(d) for d in current.delta):
            break
        try:
            step = lift_one_step(current, n, delta, perturbation, verbose)
        except ObstructionNonzero as exc:
            transcript.append({"n": n, "solved": False, "delta_valuation": current.delta_valuation(),
                               "params": []})
            raise ObstructionNonzero(n, witness=exc.witness, transcript=transcript)
        steps.append(step)
        transcript.append(step.record())
        current, delta = step.next_module, step.delta
    if not all(vec_is_zero(d) for d in current.delta):
        raise ShapeError(f"Delta block still nonzero after {stages} stages", witness=current.delta_valuation())

    m = module.underlying
    lifted = SemiFreeDGModule(m.algebra, m.degrees, current.alpha, module.truncated_at, module.labels)
    base_changed = base_change(lifted, module.index)
    total = tuple(zero_vector(ring, m.rank(deg - 1)) for deg in m.degrees)
    for step in steps:
        total = tuple(vec_add(acc, vec_scale(ring.t_power(step.stage - 1), zb)) for acc, zb in zip(total, step.z))
    generators = tuple(m.generator(b) for b in range(m.count))
    iso = block_hom(module, base_changed, 0, tuple(vec_scale(-ring.one, s) for s in total), generators)
    inverse = block_hom(base_changed, module, 0, total, generators)
    if verbose:
        print(f"✅ Lifted after {len(steps)} corrective stage(s)")
    return LiftResult(module, lifted, base_changed, iso, inverse, tuple(steps), tuple(transcript))


def kernel_choice(choices: dict) -> Perturbation:
    """Perturbation adding kernel generator choices[stage] (an index) at the listed stages."""
    def pick(stage: int, kernel: List[Vector]) -> Optional[Vector]:
        k = choices.get(stage)
        if k is None or k >= len(kernel):
            return None
        return kernel[k]
    return pick
