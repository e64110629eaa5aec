"""
dglift - lift DG modules along A -> K(t) (x) A over truncated power series and Z/p^N.

    python app.py lift problem.yaml --json out.json
    python app.py ext --fixture three_step --degree 2
    cat problem.yaml | python app.py homology - --window 0..3
"""
import argparse
import copy
import sys
from typing import Any, Dict, List, Optional

from src.pipeline.workflow import COMMANDS, LiftingWorkflow
from src.utils.config import field_spec, get_settings
from src.utils.exceptions import ProblemFileError
from src.utils.problem_loader import fixture_data, load_problem, parse_problem_text, read_problem_data
from src.utils.reports import to_json, write_json, write_transcript


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dglift", description=__doc__.strip().splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("problem", nargs="?", help="problem file (YAML or JSON); '-' reads stdin")
    parser.add_argument("--fixture", help="load a named problem from examples.yaml")
    parser.add_argument("--ring", help="override the ring: Q, Fp (e.g. F2) or Zp (e.g. Z3)")
    parser.add_argument("--precision", type=int, help="override the precision N")
    parser.add_argument("--window", help="degree window LO..HI")
    parser.add_argument("--degree", type=int, help="Ext degree for the ext command")
    parser.add_argument("--stages", type=int, help="number of lifting stages (default: the precision)")
    parser.add_argument("--choices", help="kernel choices STAGE:INDEX,... for lift and unique")
    parser.add_argument("--json", dest="json_out", help="write the machine-readable report here")
    parser.add_argument("--transcript", help="write per-stage records here as JSON lines")
    parser.add_argument("--verbose", action="store_true")
    return parser


def read_data(args) -> Any:
    if args.fixture:
        return copy.deepcopy(fixture_data(args.fixture))
    if args.problem in (None, "-"):
        return parse_problem_text(sys.stdin.read())
    return read_problem_data(args.problem)


def apply_ring_overrides(data: Any, ring: Optional[str], precision: Optional[int]) -> Any:
    """CLI flags override the problem file, which overrides the environment defaults."""
    if not isinstance(data, dict):
        return data
    settings = get_settings()
    current = data.get("ring")
    if ring is not None or not isinstance(current, dict):
        if ring is None:
            ring = settings.default_field
        base_precision = current.get("precision") if isinstance(current, dict) else None
        try:
            spec = field_spec(ring)
        except ValueError as e:
            raise ProblemFileError(str(e), witness="--ring")
        data["ring"] = {**spec, "precision": precision or base_precision or settings.default_precision}
    elif precision is not None:
        data["ring"] = {**current, "precision": precision}
    return data


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    workflow = LiftingWorkflow(verbose=True if args.verbose else None)

    def loader():
        return load_problem(apply_ring_overrides(read_data(args), args.ring, args.precision))

    overrides: Dict[str, Any] = {"window": args.window, "degree": args.degree, "stages": args.stages,
                                 "choices": args.choices}
    state = workflow.execute(args.command, loader, overrides)

    for line in state.get("text", []):
        print(line)
    report = {"command": args.command, "exit_code": state["exit_code"], **state.get("report", {})}
    if args.json_out:
        write_json(args.json_out, report)
    elif args.verbose:
        print(to_json(report))
    if args.transcript:
        write_transcript(args.transcript, state.get("transcript", []))
    return state["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
