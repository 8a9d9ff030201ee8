"""
Command-line front end: `report`, `sweep` and `verify`.

Results go to stdout as JSON, logs go to stderr. Exit codes follow qvis.core.errors.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from qvis.core.config import settings
from qvis.core.errors import EXIT_OK, UsageError, VerificationFailed, handle_cli_errors
from qvis.core.logging import configure_logging
from qvis.schemas.optimizer import OptimizerConfig
from qvis.schemas.state import StateSpec
from qvis.services import optimize, states, sweep_service, verification_service, visibilities
from qvis.services.states import TwoQubitPureState

logger = logging.getLogger(__name__)

REPORT_MODES = ("closed", "numeric", "both")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _first_error(exc: PydanticValidationError) -> str:
    err = exc.errors()[0]
    field = ".".join(str(part) for part in err.get("loc", ())) or "document"
    return f"{field}: {err.get('msg')}"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog=settings.PROJECT_NAME, description="One- and two-body visibilities of two-qubit pure states"
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=LOG_LEVELS,
        default=None,
        help=f"logging level (default {settings.LOG_LEVEL})",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def optimizer_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--restarts", type=int, default=None, help="optimizer restarts per extremization")
        p.add_argument("--workers", type=int, default=None, help="threads evaluating restarts")

    report = sub.add_parser("report", help="visibilities of a single state")
    report.add_argument("--state", default=None, help="JSON state document, or - for stdin")
    report.add_argument("--lambda0", type=float, default=None, help="Schmidt coefficient in [0.5, 1]")
    report.add_argument("--mode", choices=REPORT_MODES, default="closed")
    report.add_argument("--seed", type=int, default=None, help="optimizer seed")
    report.add_argument("--phase-grid", type=int, default=None, help="add beam splitter + phase visibilities")
    optimizer_flags(report)

    sweep = sub.add_parser("sweep", help="visibilities on a uniform lambda0 grid, as CSV")
    sweep.add_argument("--points", type=int, default=101)
    sweep.add_argument("--out", required=True, help="CSV output path")
    sweep.add_argument("--mode", choices=sweep_service.SWEEP_MODES, default="closed")
    sweep.add_argument("--seed", type=int, default=None, help="optimizer seed (numeric mode)")
    optimizer_flags(sweep)

    verify = sub.add_parser("verify", help="property checks on Haar-random states")
    verify.add_argument("--seed", type=int, default=0, help="state sampling seed")
    verify.add_argument("--count", type=int, default=100)
    verify.add_argument("--mode", choices=REPORT_MODES, default="closed")
    optimizer_flags(verify)
    return parser


def optimizer_config(args: argparse.Namespace, seed: Optional[int] = None) -> OptimizerConfig:
    overrides = {
        "restarts": args.restarts,
        "workers": args.workers,
        "seed": seed,
    }
    try:
        return OptimizerConfig(**{k: v for k, v in overrides.items() if v is not None})
    except PydanticValidationError as exc:
        raise UsageError(f"invalid optimizer option {_first_error(exc)}") from exc


def read_state_spec(source: Optional[str], lambda0: Optional[float]) -> StateSpec:
    if (source is None) == (lambda0 is None):
        raise UsageError("give exactly one of --state or --lambda0")
    try:
        if lambda0 is not None:
            return StateSpec(schmidt_lambda0=lambda0)
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        return StateSpec.model_validate_json(text)
    except OSError as exc:
        raise UsageError(f"cannot read state from {source}: {exc.strerror or exc}", {"path": source}) from exc
    except PydanticValidationError as exc:
        raise UsageError(f"malformed state document, {_first_error(exc)}", {"path": source}) from exc


def state_from_spec(spec: StateSpec) -> TwoQubitPureState:
    if spec.schmidt_lambda0 is not None:
        return states.from_schmidt_value(spec.schmidt_lambda0)
    return states.from_amplitudes(spec.complex_amplitudes())


def _emit(document: Dict[str, Any]) -> None:
    print(json.dumps(document, indent=2))


def cmd_report(args: argparse.Namespace) -> int:
    spec = read_state_spec(args.state, args.lambda0)
    state = state_from_spec(spec)
    out: Dict[str, Any] = {"state": state.as_pairs()}
    closed = numeric = None
    if args.mode in ("closed", "both"):
        closed = visibilities.report_closed(state)
        out["closed"] = closed.model_dump(mode="json")
    if args.mode in ("numeric", "both"):
        cfg = optimizer_config(args, args.seed)
        numeric = optimize.report_numeric(state, cfg, phase_grid=args.phase_grid)
        out["numeric"] = numeric.model_dump(mode="json")
    elif args.phase_grid is not None:
        raise UsageError("--phase-grid needs --mode numeric or both")
    if closed is not None and numeric is not None:
        out["deviation"] = verification_service.deviation(closed, numeric).model_dump()
    _emit(out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = optimizer_config(args, args.seed) if args.mode == "numeric" else None
    rows = sweep_service.build_sweep(args.points, args.mode, cfg)
    path = sweep_service.write_sweep_csv(rows, args.out)
    _emit({"path": path, "rows": len(rows), "mode": args.mode})
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    numeric = args.mode in ("numeric", "both")
    cfg = optimizer_config(args) if numeric else None
    summary = verification_service.verify_states(args.seed, args.count, numeric, cfg)
    _emit({"passed": summary.passed, **summary.model_dump(mode="json")})
    if not summary.passed:
        raise VerificationFailed(
            f"{summary.total_failed} check(s) failed on {len({f.index for f in summary.failures})} state(s)",
            {"seed": args.seed, "count": args.count},
        )
    return EXIT_OK


COMMANDS = {"report": cmd_report, "sweep": cmd_sweep, "verify": cmd_verify}


@handle_cli_errors
def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    logger.info(f"Running {args.command}")
    return COMMANDS[args.command](args)
