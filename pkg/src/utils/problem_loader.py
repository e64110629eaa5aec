"""
Problem files: YAML (or JSON) descriptions of a ring, an algebra tower and the modules to work on.

Semi-basis elements are referred to as "degree:k" (the k-th element of that degree), by label,
or by their position in degree order. A term is {"coeff": elt, "gamma": [i, s], "target": ref}.
"""
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import yaml

from src.algebra.dg_algebra import DGAlgebra, KoszulTower, koszul_tower, make_algebra, validate_algebra
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, base_change, degrees_from_counts,
                                   make_block_module, make_semifree, term_vector)
from src.modules.presented import PresentedDGModule, make_presented
from src.ring.linalg import RMatrix, Vector
from src.ring.truncated_ring import TruncatedRing
from src.utils.exceptions import LiftingError, ProblemFileError

EXAMPLES_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "examples.yaml")

AnyModule = Union[SemiFreeDGModule, BlockDGModule, PresentedDGModule]


@dataclass
class Problem:
    ring: TruncatedRing
    tower: KoszulTower
    algebra_spec: dict
    modules: Dict[str, AnyModule] = field(default_factory=dict)
    levels: Dict[str, int] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def module(self) -> AnyModule:
        if "module" not in self.modules:
            raise ProblemFileError("Problem has no 'module' entry", witness="module")
        return self.modules["module"]


def _require(mapping: Any, key: str, path: str, kind=None):
    if not isinstance(mapping, Mapping):
        raise ProblemFileError(f"Expected a mapping at {path}", witness=path)
    if key not in mapping:
        raise ProblemFileError(f"Missing required key '{key}' at {path or 'top level'}",
                               witness=f"{path}.{key}" if path else key)
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ProblemFileError(f"Wrong type for {path}.{key}: {type(value).__name__}", witness=f"{path}.{key}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ProblemFileError(f"Expected an integer at {path}", witness=path)
    try:
        return int(value)
    except ValueError:
        raise ProblemFileError(f"Expected an integer at {path}, got {value!r}", witness=path)


def parse_ring(spec: Any, path: str = "ring") -> TruncatedRing:
    precision = _int(_require(spec, "precision", path), f"{path}.precision")
    try:
        if "Zp" in spec:
            return TruncatedRing.p_adic(_int(spec["Zp"], f"{path}.Zp"), precision)
        field_ = _require(spec, "field", path)
        if field_ == "Q":
            return TruncatedRing.rational(precision)
        if isinstance(field_, Mapping) and "Fp" in field_:
            return TruncatedRing.prime_field(_int(field_["Fp"], f"{path}.field.Fp"), precision)
    except (ValueError, LiftingError) as e:
        raise ProblemFileError(f"Invalid ring at {path}: {e}", witness=path)
    raise ProblemFileError(f"Unknown field {field_!r} at {path}.field", witness=f"{path}.field")


def _element(ring: TruncatedRing, raw: Any, path: str):
    try:
        return ring.parse(raw)
    except (ValueError, LiftingError) as e:
        raise ProblemFileError(f"Invalid ring element at {path}: {e}", witness=path)


def _matrix(ring: TruncatedRing, rows: Any, nrows: int, ncols: int, path: str) -> RMatrix:
    if not isinstance(rows, list) or len(rows) != nrows or any(not isinstance(r, list) or len(r) != ncols
                                                              for r in rows):
        raise ProblemFileError(f"Expected a {nrows}x{ncols} matrix at {path}", witness=path)
    entries = [[_element(ring, a, f"{path}[{r}][{c}]") for c, a in enumerate(row)] for r, row in enumerate(rows)]
    return RMatrix.from_rows(ring, entries, ncols)


def _explicit_algebra(ring: TruncatedRing, spec: Mapping, path: str) -> DGAlgebra:
    ranks = [_int(r, f"{path}.ranks[{k}]") for k, r in enumerate(_require(spec, "ranks", path, list))]
    differential = {}
    for key, rows in (spec.get("differential") or {}).items():
        i = _int(key, f"{path}.differential")
        if not 1 <= i < len(ranks):
            raise ProblemFileError(f"Differential degree {i} out of range", witness=f"{path}.differential.{key}")
        differential[i] = _matrix(ring, rows, ranks[i - 1], ranks[i], f"{path}.differential.{key}")
    mult = {}
    for k, entry in enumerate(spec.get("mult") or []):
        where = f"{path}.mult[{k}]"
        i, s = (_int(x, where) for x in _require(entry, "left", where, list))
        j, u = (_int(x, where) for x in _require(entry, "right", where, list))
        if i + j >= len(ranks):
            raise ProblemFileError(f"Product lands in degree {i + j}, above the top", witness=where)
        value = _require(entry, "value", where, list)
        if len(value) != ranks[i + j]:
            raise ProblemFileError(f"Product value needs {ranks[i + j]} entries", witness=f"{where}.value")
        mult[(i, s, j, u)] = tuple(_element(ring, a, f"{where}.value") for a in value)
    try:
        algebra = make_algebra(ring, ranks, differential, mult, spec.get("names"), spec.get("name", "A"))
    except ValueError as e:
        raise ProblemFileError(f"Invalid algebra at {path}: {e}", witness=path)
    report = validate_algebra(algebra)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise ProblemFileError(f"Algebra at {path} fails: {names}", witness=path)
    return algebra


def parse_tower(ring: TruncatedRing, spec: Any, path: str = "algebra") -> KoszulTower:
    if not isinstance(spec, Mapping):
        raise ProblemFileError(f"Expected a mapping at {path}", witness=path)
    elements = [_element(ring, a, f"{path}.koszul[{k}]") for k, a in enumerate(spec.get("koszul") or [])]
    base = _explicit_algebra(ring, spec, path) if "ranks" in spec else None
    if base is None and "koszul" not in spec:
        raise ProblemFileError(f"Algebra at {path} needs 'koszul' or 'ranks'", witness=path)
    return koszul_tower(ring, elements, base)


class _Refs:
    """Resolves semi-basis references against degree counts and labels."""

    def __init__(self, degrees: Sequence[int], labels: Sequence[str]):
        self.degrees = list(degrees)
        self.labels = list(labels)

    def resolve(self, ref: Any, path: str) -> int:
        if isinstance(ref, int) and not isinstance(ref, bool):
            if 0 <= ref < len(self.degrees):
                return ref
        elif isinstance(ref, str) and ref in self.labels:
            return self.labels.index(ref)
        elif isinstance(ref, str) and ":" in ref:
            deg, k = ref.split(":", 1)
            try:
                deg, k = int(deg), int(k)
            except ValueError:
                raise ProblemFileError(f"Bad semi-basis reference {ref!r}", witness=path)
            first = self.degrees.index(deg) if deg in self.degrees else None
            if first is not None and k < self.degrees.count(deg):
                return first + k
        elif isinstance(ref, str) and ref.isdigit():
            return self.resolve(int(ref), path)
        elif isinstance(ref, (list, tuple)) and len(ref) == 2:
            return self.resolve(f"{ref[0]}:{ref[1]}", path)
        raise ProblemFileError(f"Unknown semi-basis element {ref!r}", witness=path)


def _vector(shell: SemiFreeDGModule, refs: _Refs, ring: TruncatedRing, degree: int,
            terms: Any, path: str) -> Vector:
    if terms is None:
        return shell.zero(degree)
    if not isinstance(terms, list):
        raise ProblemFileError(f"Expected a list of terms at {path}", witness=path)
    parsed = []
    for k, term in enumerate(terms):
        where = f"{path}[{k}]"
        target = refs.resolve(_require(term, "target", where), f"{where}.target")
        gamma = term.get("gamma", [degree - refs.degrees[target], 0])
        if not isinstance(gamma, list) or len(gamma) != 2:
            raise ProblemFileError(f"gamma must be [degree, index] at {where}", witness=f"{where}.gamma")
        j, s = _int(gamma[0], f"{where}.gamma"), _int(gamma[1], f"{where}.gamma")
        coeff = _element(ring, term.get("coeff", 1), f"{where}.coeff")
        parsed.append((coeff, (j, s), target))
    try:
        return term_vector(shell, degree, parsed)
    except LiftingError as e:
        raise ProblemFileError(f"{e.message} at {path}", witness=path)


def _values(shell: SemiFreeDGModule, refs: _Refs, ring: TruncatedRing, spec: Any, shift: int,
            path: str) -> Dict[int, Vector]:
    if spec is None:
        return {}
    if not isinstance(spec, Mapping):
        raise ProblemFileError(f"Expected a mapping from semi-basis elements at {path}", witness=path)
    out = {}
    for ref, terms in spec.items():
        b = refs.resolve(ref, f"{path}.{ref}")
        out[b] = _vector(shell, refs, ring, shell.degrees[b] + shift, terms, f"{path}.{ref}")
    return out


def _level(spec: Mapping, tower: KoszulTower, default: int, path: str) -> int:
    level = _int(spec.get("over", default), f"{path}.over")
    if not 0 <= level <= tower.length:
        raise ProblemFileError(f"Level {level} is outside 0..{tower.length}", witness=f"{path}.over")
    return level


def _presented(tower: KoszulTower, spec: Mapping, level: int, path: str) -> PresentedDGModule:
    ring = tower.top.ring
    algebra = tower.algebras[level]
    torsion = {}
    for key, exps in _require(spec, "torsion", path, Mapping).items():
        torsion[_int(key, f"{path}.torsion")] = tuple(_int(a, f"{path}.torsion.{key}") for a in exps)
    size = {n: len(exps) for n, exps in torsion.items()}
    differential = {}
    for key, rows in (spec.get("differential") or {}).items():
        n = _int(key, f"{path}.differential")
        differential[n] = _matrix(ring, rows, size.get(n - 1, 0), size.get(n, 0), f"{path}.differential.{key}")
    action = {}
    for k, entry in enumerate(spec.get("action") or []):
        where = f"{path}.action[{k}]"
        i, s = (_int(x, where) for x in _require(entry, "gamma", where, list))
        n = _int(_require(entry, "degree", where), f"{where}.degree")
        action[(i, s, n)] = _matrix(ring, _require(entry, "matrix", where), size.get(n + i, 0), size.get(n, 0),
                                    f"{where}.matrix")
    truncated = spec.get("truncated_at")
    return make_presented(algebra, torsion, differential, action,
                          None if truncated is None else _int(truncated, f"{path}.truncated_at"))


def parse_module(tower: KoszulTower, spec: Any, path: str = "module") -> Tuple[AnyModule, int]:
    """The module and the tower level of the algebra it lives over."""
    if not isinstance(spec, Mapping):
        raise ProblemFileError(f"Expected a mapping at {path}", witness=path)
    ring = tower.top.ring
    if "presented" in spec:
        level = _level(spec, tower, tower.length, path)
        return _presented(tower, spec["presented"], level, f"{path}.presented"), level

    form = spec.get("form", "block" if "delta" in spec else "semifree")
    if form not in ("semifree", "block"):
        raise ProblemFileError(f"Unknown module form {form!r}", witness=f"{path}.form")
    level = _level(spec, tower, tower.length, path)
    if form == "block" and level == 0:
        raise ProblemFileError("A block module needs a level with a Koszul variable", witness=f"{path}.over")
    counts = {_int(k, f"{path}.semibasis"): _int(v, f"{path}.semibasis.{k}")
              for k, v in _require(spec, "semibasis", path, Mapping).items()}
    degrees = degrees_from_counts(counts)
    labels = [str(x) for x in spec.get("labels") or []]
    refs = _Refs(degrees, labels)
    truncated = spec.get("truncated_at")
    truncated = None if truncated is None else _int(truncated, f"{path}.truncated_at")
    base = tower.algebras[level - 1] if form == "block" else tower.algebras[level]
    shell = SemiFreeDGModule(base, degrees, tuple(() for _ in degrees))
    alpha = _values(shell, refs, ring, spec.get("alpha"), -1, f"{path}.alpha")
    try:
        if form == "block":
            delta = _values(shell, refs, ring, spec.get("delta"), -2, f"{path}.delta")
            return make_block_module(tower.indices[level - 1], counts, alpha, delta, truncated, labels), level
        if spec.get("delta"):
            raise ProblemFileError("Only block modules carry a delta", witness=f"{path}.delta")
        return make_semifree(base, counts, alpha, truncated, labels), level
    except ProblemFileError:
        raise
    except LiftingError as e:
        raise ProblemFileError(f"Invalid module at {path}: {e.message}", witness=path)


def parse_upsilon(first: BlockDGModule, second: BlockDGModule, spec: Any, path: str = "upsilon") -> Vector:
    """Values of a degree 0 map B (x) M1 -> B (x) M2, as terms over B in the semi-basis of M2."""
    src, tgt = first.over_b, second.over_b
    refs_src = _Refs(src.degrees, list(src.labels))
    refs_tgt = _Refs(tgt.degrees, list(tgt.labels))
    values = [tgt.zero(deg) for deg in src.degrees]
    if not isinstance(spec, Mapping):
        raise ProblemFileError(f"Expected a mapping at {path}", witness=path)
    for ref, terms in spec.items():
        b = refs_src.resolve(ref, f"{path}.{ref}")
        values[b] = _vector(tgt, refs_tgt, first.ring, src.degrees[b], terms, f"{path}.{ref}")
    return tuple(values)


def parse_window(raw: Any, path: str = "window") -> Optional[Tuple[int, int]]:
    """[lo, hi] or 'lo..hi'."""
    if raw is None:
        return None
    if isinstance(raw, str) and ".." in raw:
        lo, hi = raw.split("..", 1)
        raw = [lo, hi]
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ProblemFileError(f"Window must be LO..HI or [lo, hi], got {raw!r}", witness=path)
    lo, hi = _int(raw[0], path), _int(raw[1], path)
    if lo > hi:
        raise ProblemFileError(f"Empty window {lo}..{hi}", witness=path)
    return lo, hi


def load_problem(data: Any) -> Problem:
    """Validate and build a problem from already-parsed YAML."""
    if not isinstance(data, Mapping):
        raise ProblemFileError("A problem file must be a mapping", witness="")
    ring = parse_ring(_require(data, "ring", ""), "ring")
    algebra_spec = _require(data, "algebra", "", Mapping)
    tower = parse_tower(ring, algebra_spec)
    problem = Problem(ring, tower, dict(algebra_spec), options=dict(data.get("options") or {}), raw=dict(data))
    if "module" in data:
        problem.modules["module"], problem.levels["module"] = parse_module(tower, data["module"])
    for name, spec in (data.get("modules") or {}).items():
        problem.modules[name], problem.levels[name] = parse_module(tower, spec, f"modules.{name}")
    if not problem.modules:
        raise ProblemFileError("Problem needs 'module' or 'modules'", witness="module")
    if "window" in problem.options:
        problem.options["window"] = parse_window(problem.options["window"], "options.window")
    return problem


def read_problem_data(path: str) -> Any:
    try:
        with open(path, 'r') as f:
            return yaml.safe_load(f)
    except OSError as e:
        raise ProblemFileError(f"Cannot read {path}: {e}", witness=path)
    except yaml.YAMLError as e:
        raise ProblemFileError(f"Cannot parse {path}: {e}", witness=path)


def parse_problem_text(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ProblemFileError(f"Cannot parse problem: {e}", witness="<stdin>")


def read_problem_file(path: str) -> Problem:
    return load_problem(read_problem_data(path))


def load_fixtures(path: str = EXAMPLES_PATH) -> Dict[str, dict]:
    if not os.path.exists(path):
        return {}
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def fixture_data(name: str, path: str = EXAMPLES_PATH) -> dict:
    fixtures = load_fixtures(path)
    if name not in fixtures:
        known = ", ".join(sorted(fixtures)) or "none"
        raise ProblemFileError(f"Unknown fixture '{name}' (known: {known})", witness=name)
    return fixtures[name]


def load_fixture(name: str, path: str = EXAMPLES_PATH) -> Problem:
    return load_problem(fixture_data(name, path))


# Writing modules back out in the same schema

def _terms(module: SemiFreeDGModule, vec: Sequence, degree: int) -> List[dict]:
    terms = []
    for c, (b, j, s) in zip(vec, module.basis(degree)):
        if not c.is_zero():
            terms.append({"coeff": c.to_json(), "gamma": [j, s], "target": b})
    return terms


def dump_module(module: Union[SemiFreeDGModule, BlockDGModule], level: int) -> dict:
    """Module entry that parse_module reads back to the same module."""
    if isinstance(module, BlockDGModule):
        shell = module.underlying
        data = {"form": "block", "over": level}
        delta = {b: _terms(shell, v, deg - 2) for b, (v, deg) in enumerate(zip(module.delta, module.degrees))}
        data["delta"] = {b: t for b, t in delta.items() if t}
    else:
        shell = module
        data = {"form": "semifree", "over": level}
    data["semibasis"] = {deg: n for deg, n in sorted(shell.semibasis_counts().items())}
    alpha = {b: _terms(shell, shell.values[b], deg - 1) for b, deg in enumerate(shell.degrees)}
    data["alpha"] = {b: t for b, t in alpha.items() if t}
    if shell.labels:
        data["labels"] = list(shell.labels)
    if shell.truncated_at is not None:
        data["truncated_at"] = shell.truncated_at
    return data


def dump_problem(problem: Problem, module: Union[SemiFreeDGModule, BlockDGModule], level: int,
                 options: Optional[dict] = None) -> dict:
    return {"ring": problem.ring.to_json(), "algebra": problem.algebra_spec,
            "module": dump_module(module, level), "options": options or {}}


def base_changed_pair(problem: Problem, first: str, second: str) -> Tuple[BlockDGModule, BlockDGModule]:
    """Base changes of two semi-free modules over the same level, along the next Koszul variable."""
    level = problem.levels[first]
    if problem.levels[second] != level or level >= problem.tower.length:
        raise ProblemFileError("Both modules must sit at the same level, below a Koszul variable", witness="modules")
    index = problem.tower.indices[level]
    return base_change(problem.modules[first], index), base_change(problem.modules[second], index)
