"""
Command workflow for the lifting tool: load a problem, run one command, build the report.
"""
from datetime import datetime
from typing import Any, Callable, Dict, Optional, Tuple

from src.algebra.dg_algebra import validate_algebra
from src.hom.ext import INCONCLUSIVE, NONZERO, ext_is_zero
from src.hom.graded_hom import GradedHom
from src.hom.resolution import resolution_agrees, semi_free_resolution
from src.lifting.engine import kernel_choice, lift
from src.lifting.iterated import lift_iterated, semidualizing_lift, verify_quasilift
from src.lifting.uniqueness import uniqueness_between_lifts, uniqueness_iso
from src.modules.dg_module import (BlockDGModule, SemiFreeDGModule, homology, validate_block_data,
                                   validate_semifree)
from src.modules.presented import PresentedDGModule, check_presented
from src.utils.config import Settings, get_settings
from src.utils.exceptions import LiftingError, MathematicalObstruction, ProblemFileError
from src.utils.problem_loader import Problem, base_changed_pair, dump_module, parse_upsilon, parse_window
from src.utils.reports import (betti_table, describe_module, format_invariants, homology_table, module_summary,
                               render, transcript_table)

COMMANDS = ("check", "homology", "ext", "lift", "lift-iterated", "unique", "semidualizing", "resolve")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_OBSTRUCTION = 2


def _parse_choices(raw: Any) -> Dict[int, int]:
    """{stage: kernel index} from a mapping or 'stage:index,...'."""
    if not raw:
        return {}
    if isinstance(raw, str):
        pairs = [item.split(":", 1) for item in raw.split(",") if item.strip()]
        raw = {stage: k for stage, k in pairs}
    try:
        return {int(stage): int(k) for stage, k in dict(raw).items()}
    except (TypeError, ValueError):
        raise ProblemFileError(f"Kernel choices must map stages to indices, got {raw!r}", witness="options.choices")


def _block_for_lift(problem: Problem, name: str = "module") -> BlockDGModule:
    module = problem.modules[name]
    if isinstance(module, BlockDGModule):
        return module
    level = problem.levels[name]
    if isinstance(module, PresentedDGModule) or level == 0:
        raise ProblemFileError("lift needs a block module or a semi-free module over a Koszul level",
                               witness=name)
    return BlockDGModule.from_semifree(module, problem.tower.indices[level - 1])


class LiftingWorkflow:
    def __init__(self, settings: Optional[Settings] = None, verbose: Optional[bool] = None):
        self.settings = settings or get_settings()
        self.verbose = self.settings.verbose if verbose is None else verbose
        self.handlers: Dict[str, Callable[[Problem, Dict[str, Any]], Dict[str, Any]]] = {
            "check": self.run_check,
            "homology": self.run_homology,
            "ext": self.run_ext,
            "lift": self.run_lift,
            "lift-iterated": self.run_lift_iterated,
            "unique": self.run_unique,
            "semidualizing": self.run_semidualizing,
            "resolve": self.run_resolve,
        }

    # Steps

    def load(self, state: Dict[str, Any], loader: Callable[[], Problem]) -> Dict[str, Any]:
        try:
            problem = loader()
            options = {**problem.options, **{k: v for k, v in state.get("overrides", {}).items() if v is not None}}
            if isinstance(options.get("window"), str):
                options["window"] = parse_window(options["window"])
            return {**state, "problem": problem, "options": options,
                    "steps_completed": state.get("steps_completed", []) + ["load_problem"]}
        except Exception as e:
            return {**state, "error": e, "steps_completed": state.get("steps_completed", []) + ["load_problem_error"]}

    def run_command(self, state: Dict[str, Any]) -> Dict[str, Any]:
        if "error" in state:
            return state
        command = state["command"]
        try:
            if self.verbose:
                print(f"🔍 Running {command}")
            result = self.handlers[command](state["problem"], state["options"])
            return {**state, **result, "steps_completed": state.get("steps_completed", []) + [command]}
        except Exception as e:
            return {**state, "error": e, "steps_completed": state.get("steps_completed", []) + [f"{command}_error"]}

    def handle_error(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """Turn an exception into a message, a report and an exit code."""
        error = state.get("error")
        if isinstance(error, MathematicalObstruction):
            code, prefix = EXIT_OBSTRUCTION, "Obstruction"
        elif isinstance(error, LiftingError):
            code, prefix = EXIT_INPUT, "Invalid input"
        else:
            code, prefix = EXIT_INPUT, "Error"
        report = error.to_dict() if isinstance(error, LiftingError) else {"error": type(error).__name__,
                                                                           "message": str(error)}
        transcript = list(getattr(error, "transcript", []) or state.get("transcript", []))
        return {
            **state,
            "error_handled": True,
            "friendly_error": f"❌ {prefix}: {error}",
            "report": {"command": state.get("command"), **report},
            "text": [f"❌ {prefix}: {error}"],
            "transcript": transcript,
            "exit_code": code,
            "steps_completed": state.get("steps_completed", []) + ["handle_error"]
        }

    def execute(self, command: str, loader: Callable[[], Problem],
                overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        if command not in self.handlers:
            raise ValueError(f"Unknown command '{command}'; choose from {', '.join(COMMANDS)}")
        state = {
            "command": command,
            "timestamp": datetime.now().isoformat(),
            "overrides": overrides or {},
            "steps_completed": []
        }
        state = self.load(state, loader)
        state = self.run_command(state)
        if "error" in state:
            state = self.handle_error(state)
        return state

    # Commands

    def _window(self, options: Dict[str, Any]) -> Optional[Tuple[int, int]]:
        return options.get("window")

    def run_check(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        algebra_report = validate_algebra(problem.tower.top)
        report = {"algebra": algebra_report.to_dict(), "modules": {}}
        ok = algebra_report.passed
        text = [f"Algebra {problem.tower.top.name}: {'✅ valid' if ok else '❌ invalid'}"]
        for name, module in problem.modules.items():
            if isinstance(module, BlockDGModule):
                checks = validate_block_data(module)
                passed, details = checks.passed, checks.to_dict()
            elif isinstance(module, SemiFreeDGModule):
                checks = validate_semifree(module)
                passed, details = checks.passed, checks.to_dict()
            else:
                check_presented(module)
                passed, details = True, {}
            ok = ok and passed
            report["modules"][name] = {"passed": passed, "checks": details}
            text.append(f"Module {name}: {'✅ valid' if passed else '❌ invalid'}")
        return {"report": report, "text": text, "exit_code": EXIT_OK if ok else EXIT_INPUT}

    def run_homology(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        module = problem.module
        result = homology(module, self._window(options))
        table = homology_table(problem.ring, result)
        report = {"homology": {str(n): inv for n, inv in result.items()},
                  "text": {str(n): format_invariants(problem.ring, inv) for n, inv in result.items()}}
        return {"report": report, "text": [render(table)], "exit_code": EXIT_OK}

    def run_ext(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        degree = int(options.get("degree", 2))
        source = problem.modules.get("source", problem.modules.get("module"))
        target = problem.modules.get("target", source)
        if source is None:
            raise ProblemFileError("ext needs 'module' or 'modules.source'", witness="module")
        report = ext_is_zero(degree, source, target, self._window(options))
        text = [f"Ext^{degree}: {report.status}"]
        if report.invariants:
            text.append(f"   H = {format_invariants(problem.ring, report.invariants)}")
        if report.reason:
            text.append(f"   {report.reason}")
        code = EXIT_OBSTRUCTION if report.status == NONZERO else EXIT_OK
        return {"report": report.to_dict(), "text": text, "exit_code": code}

    def run_lift(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        block = _block_for_lift(problem)
        stages = options.get("stages") or self.settings.max_stages
        choices = _parse_choices(options.get("choices"))
        result = lift(block, stages=stages, perturbation=kernel_choice(choices) if choices else None,
                      verbose=self.verbose)
        level = max(problem.levels["module"] - 1, 0)
        quasi = verify_quasilift(result.lifted, block, block.index)
        report = {"lifted": dump_module(result.lifted, level), "summary": module_summary(result.lifted),
                  "stages": len(result.steps), "delta_valuations": result.delta_valuations,
                  "quasilift": quasi}
        text = ["✅ Lifted", *describe_module(result.lifted), render(transcript_table(result.transcript)),
                f"Quasi-lift check: {'✅' if quasi else '❌'}"]
        return {"report": report, "text": text, "transcript": list(result.transcript), "exit_code": EXIT_OK}

    def run_lift_iterated(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        module = problem.module
        result = lift_iterated(module, problem.tower, self._window(options),
                               record_ext=bool(options.get("record_ext", True)), verbose=self.verbose)
        lifted = result.complex
        quasi = verify_quasilift(lifted, module, problem.tower, self._window(options))
        report = {"lifted": dump_module(lifted, 0), "summary": module_summary(lifted),
                  "ext2": {str(k): status for k, status in sorted(result.ext_status.items())},
                  "quasilift": quasi}
        text = ["✅ Lifted to R", *describe_module(lifted), render(transcript_table(result.transcript)),
                f"Quasi-lift check: {'✅' if quasi else '❌'}"]
        return {"report": report, "text": text, "transcript": result.transcript, "exit_code": EXIT_OK}

    def run_unique(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        if "first" in problem.modules and "second" in problem.modules:
            bc1, bc2 = base_changed_pair(problem, "first", "second")
            upsilon_spec = problem.raw.get("upsilon")
            if upsilon_spec is None:
                upsilon = GradedHom(bc1, bc2, 0, tuple(bc2.over_b.generator(b) for b in range(bc2.over_b.count)))
            else:
                upsilon = GradedHom(bc1, bc2, 0, parse_upsilon(bc1, bc2, upsilon_spec))
            result = uniqueness_iso(problem.modules["first"], problem.modules["second"], upsilon, self.verbose)
        else:
            block = _block_for_lift(problem)
            first = lift(block, verbose=self.verbose)
            choices = _parse_choices(options.get("choices"))
            second = lift(block, perturbation=kernel_choice(choices) if choices else None, verbose=self.verbose)
            result = uniqueness_between_lifts(first, second, self.verbose)
        report = {"iso": result.iso.to_json(), "stages": result.stages, "local": result.local}
        text = [f"✅ Isomorphism found after {result.stages} stage(s)"]
        if not result.local:
            text.append("⚠️ A_0 is not R; locality is not guaranteed")
        return {"report": report, "text": text, "exit_code": EXIT_OK}

    def run_semidualizing(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        result = semidualizing_lift(problem.module, problem.tower, self._window(options), verbose=self.verbose)
        report = result.to_dict()
        text = [f"Lift over R: {result.lifted_report.status}",
                f"Module over {problem.tower.top.name}: {result.source_report.status}"]
        if result.lifted_report.status == INCONCLUSIVE:
            text.append(f"   {result.lifted_report.reason}")
        return {"report": report, "text": text, "exit_code": EXIT_OK}

    def run_resolve(self, problem: Problem, options: Dict[str, Any]) -> Dict[str, Any]:
        module = problem.module
        level = problem.levels["module"]
        window = self._window(options)
        if window is None and isinstance(module, PresentedDGModule):
            algebra = module.algebra
            window = (module.min_degree, module.max_degree + algebra.top_degree + self.settings.window_padding)
        index = problem.tower.indices[level - 1] if (level > 0 and options.get("block")) else None
        result = semi_free_resolution(module, window, index=index, require_complete=bool(options.get("complete")),
                                      verbose=self.verbose)
        agrees = resolution_agrees(result, module)
        counts = result.betti_numbers()
        report = {"betti": {str(d): n for d, n in counts.items()}, "complete": result.complete,
                  "certified_top": result.certified_top, "agrees": agrees,
                  "resolution": dump_module(result.module, level)}
        text = [render(betti_table(counts)),
                f"Complete: {result.complete} (certified through degree {result.certified_top})",
                f"Homology agrees: {'✅' if agrees else '❌'}"]
        return {"report": report, "text": text, "exit_code": EXIT_OK}
