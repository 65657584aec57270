"""Command-line interface for the fockport toolkit."""

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from fockport.config import Settings, settings
from fockport.design import design, sweep_ancillas
from fockport.errors import DocumentError, DomainError, FockportError
from fockport.fock import PureState, format_state, make_basis_state, single_mode_state
from fockport.metrics import run_metrics
from fockport.models import (
    AmplitudeEntry,
    CompositeDescriptor,
    DesignProblem,
    InputDescriptor,
    PipelineDocument,
    ReproductionRow,
    RunReport,
    StepDescriptor,
    from_pair,
)
from fockport.reproduction import reproduction_rows, table_passes
from fockport.resources import (
    GeneralizedBellSpec,
    generalized_bell,
    number_phase_bell,
    photon_subtracted,
    squeezed_vacuum,
    truncated_maximal_epr_state,
)
from fockport.storage import default_store, read_document
from fockport.teleport import (
    CustomEPR,
    ManipulationStep,
    NumberShift,
    Pipeline,
    PipelineResult,
    ReversalDerivative,
    ReversalScaling,
    Scaling,
    SuccessModel,
    differentiate,
    extractor,
    filter_number,
    n_photon_source,
    number_pair_source,
    reversal,
    scissors,
    truncated_maximal_epr,
    two_sided_scissors,
)
from fockport.validators import validate_tail_epsilon, validate_tolerance

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FORMATS = ("table", "csv", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
RESOURCES = (
    "vacuum",
    "number",
    "squeezed_vacuum",
    "photon_subtracted",
    "number_phase_bell",
    "generalized_bell",
    "truncated_maximal_epr",
)

logger = logging.getLogger(__name__)


# ==================== Document conversion ====================

def _field(descriptor, name: str, location: str):
    value = getattr(descriptor, name)
    if value is None:
        raise DocumentError(f"{location}.{name}: Field required", {"field": f"{location}.{name}"})
    return value


def step_from_descriptor(descriptor: StepDescriptor, location: str) -> ManipulationStep:
    """
    Build a manipulation step from its document form.

    Raises:
        DocumentError: A required parameter is missing or out of range
    """
    kind = descriptor.kind
    try:
        if kind == "reversal_scaling":
            return ReversalScaling(
                _field(descriptor, "lam", location), _field(descriptor, "n_tilde", location), descriptor.mode
            )
        if kind == "reversal_derivative":
            return ReversalDerivative(
                _field(descriptor, "lam", location), _field(descriptor, "n_tilde", location), descriptor.mode
            )
        if kind == "number_shift":
            return NumberShift(
                _field(descriptor, "n", location),
                _field(descriptor, "n_tilde", location),
                descriptor.lam,
                descriptor.mode,
            )
        if kind == "scaling":
            return Scaling(
                _field(descriptor, "n", location), descriptor.r, descriptor.lam, descriptor.lam_prime, descriptor.mode
            )
        profile = [from_pair(d) for d in _field(descriptor, "profile", location)]
        return CustomEPR(tuple(profile), _field(descriptor, "n_tilde", location), descriptor.epr_kind, descriptor.mode)
    except DomainError as exc:
        raise DocumentError(f"{location}: {exc.message}", {"field": location}) from exc


def _composite_builders() -> Dict[str, Callable[[CompositeDescriptor, str], Pipeline]]:
    return {
        "reversal": lambda c, loc: reversal(
            _field(c, "n_tilde", loc), _field(c, "lam_second", loc), c.lam, c.lam_prime
        ),
        "scissors": lambda c, loc: scissors(_field(c, "n", loc), c.lam),
        "two_sided_scissors": lambda c, loc: two_sided_scissors(_field(c, "n_low", loc), _field(c, "n", loc), c.lam),
        "extractor": lambda c, loc: extractor(_field(c, "n", loc), c.lam),
        "n_photon_source": lambda c, loc: n_photon_source(_field(c, "n", loc), c.lam),
        "differentiate": lambda c, loc: differentiate(
            _field(c, "n_tilde", loc), _field(c, "lam", loc), _field(c, "lam_second", loc)
        ),
        "truncated_maximal_epr": lambda c, loc: truncated_maximal_epr(
            _field(c, "n", loc), _field(c, "lam", loc), _field(c, "lam_prime", loc), _field(c, "lam_second", loc), c.n_low or 0
        ),
        "filter": lambda c, loc: filter_number(_field(c, "n_low", loc), _field(c, "n", loc)),
        "number_pair_source": lambda c, loc: number_pair_source(
            _field(c, "n", loc), _field(c, "shift", loc), _field(c, "lam", loc)
        ),
    }


def pipeline_from_composite(descriptor: CompositeDescriptor) -> Pipeline:
    try:
        return _composite_builders()[descriptor.name](descriptor, "composite")
    except DomainError as exc:
        raise DocumentError(f"composite: {exc.message}", {"field": "composite"}) from exc


def state_from_input(descriptor: InputDescriptor, config: Settings) -> PureState:
    """Input state of a pipeline document."""
    try:
        if descriptor.amplitudes is not None:
            return single_mode_state([from_pair(a) for a in descriptor.amplitudes])
        if descriptor.resource == "vacuum":
            return make_basis_state((0,))
        if descriptor.resource == "number":
            return make_basis_state((_field(descriptor, "n", "input"),))
        if descriptor.resource == "squeezed_vacuum":
            return squeezed_vacuum(_field(descriptor, "lam", "input"), config.tail_epsilon)
        if descriptor.resource == "photon_subtracted":
            return photon_subtracted(_field(descriptor, "lam", "input"), config.tail_epsilon)
        return number_phase_bell(_field(descriptor, "n", "input"), descriptor.m or 0)
    except DomainError as exc:
        raise DocumentError(f"input: {exc.message}", {"field": "input"}) from exc


def success_model(detector: str) -> SuccessModel:
    """
    Detector success model named on the command line or in a document.

    ``ideal`` and ``quoted`` are table models, ``designs`` runs the shipped
    detector designs, and any other value is a design file added to them.
    """
    if detector == "ideal":
        return SuccessModel.ideal()
    if detector == "quoted":
        return SuccessModel.quoted()
    store = default_store()
    if detector != "designs":
        store.load_file(Path(detector))
    return SuccessModel.from_designs(store, detector)


def _check_flag(result: Tuple[bool, str], field: str):
    is_valid, error = result
    if not is_valid:
        raise DocumentError(error, {"field": field})


def _settings_for(args: argparse.Namespace, base: Optional[Settings] = None) -> Settings:
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.tail_eps is not None:
        _check_flag(validate_tail_epsilon(args.tail_eps, "--tail-eps"), "tail_eps")
        updates["tail_epsilon"] = args.tail_eps
    if args.tol is not None:
        _check_flag(validate_tolerance(args.tol, "--tol"), "tol")
        updates["state_tolerance"] = args.tol
    return (base or settings).model_copy(update=updates)


# ==================== Report rendering ====================

def _amplitude_entries(state: Optional[PureState]) -> List[AmplitudeEntry]:
    if state is None:
        return []
    return [AmplitudeEntry(pattern=list(p), re=a.real, im=a.imag) for p, a in state.items()]


def run_report(name: str, model: SuccessModel, result: PipelineResult) -> RunReport:
    return RunReport(
        name=name,
        success_model=model.name,
        output=_amplitude_entries(result.output),
        stages=list(result.stage_probabilities),
        net_probability=result.net_probability,
    )


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_run(report: RunReport, output_format: str) -> str:
    if output_format == "json":
        return report.model_dump_json(indent=2) + "\n"
    if output_format == "csv":
        rows = [["amplitude", " ".join(map(str, e.pattern)), repr(e.re), repr(e.im)] for e in report.output]
        rows += [["stage", s.label, repr(s.probability), ""] for s in report.stages]
        rows.append(["net", report.name, repr(report.net_probability), ""])
        return _csv_text(["section", "key", "value", "imag"], rows)

    lines = [f"pipeline: {report.name} (detector model: {report.success_model})", "", "output amplitudes:"]
    for entry in report.output:
        counts = " ".join(map(str, entry.pattern))
        lines.append(f"  |{counts}>  {entry.re: .12f} {entry.im:+.12f}i")
    lines += ["", "stage probabilities:"]
    for stage in report.stages:
        lines.append(f"  {stage.probability:.6e}  {stage.label}")
    lines += ["", f"net probability: {report.net_probability:.6e}"]
    return "\n".join(lines) + "\n"


def render_rows(rows: Sequence[ReproductionRow], output_format: str) -> str:
    if output_format == "json":
        return json.dumps([row.model_dump() for row in rows], indent=2) + "\n"
    header = ["name", "expected", "computed", "criterion", "status", "note"]
    if output_format == "csv":
        return _csv_text(
            header,
            [
                [r.name, "" if r.expected is None else repr(r.expected), repr(r.computed), r.criterion, r.status, r.note]
                for r in rows
            ],
        )
    width = max(len(r.name) for r in rows)
    lines = [f"{'row':<{width}}  {'expected':>10}  {'computed':>12}  status     criterion"]
    for r in rows:
        expected = "-" if r.expected is None else f"{r.expected:.4g}"
        lines.append(f"{r.name:<{width}}  {expected:>10}  {r.computed:>12.6g}  {r.status:<9}  {r.criterion}")
    failed = sum(r.status == "fail" for r in rows)
    deviations = sum(r.status == "deviation" for r in rows)
    lines.append(f"\n{len(rows)} rows, {failed} failed, {deviations} deviations from quoted values")
    return "\n".join(lines) + "\n"


def _write(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text)
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


# ==================== Commands ====================

def cmd_run(args: argparse.Namespace) -> int:
    """Run a pipeline document and print its report."""
    document = read_document(PipelineDocument, Path(args.pipeline))
    options = document.options
    base = settings.model_copy(
        update={
            key: value
            for key, value in (
                ("tail_epsilon", options.tail_epsilon),
                ("state_tolerance", options.tolerance),
                ("seed", options.seed),
            )
            if value is not None
        }
    )
    config = _settings_for(args, base)

    if document.composite is not None:
        pipeline = pipeline_from_composite(document.composite)
    else:
        steps = tuple(step_from_descriptor(s, f"steps.{i}") for i, s in enumerate(document.steps))
        pipeline = Pipeline(document.name, steps)
    state = state_from_input(document.input, config) if document.input is not None else None

    model = success_model(args.detector or options.detector)
    logger.info(f"Running '{document.name}' ({len(pipeline.steps)} stages, detector model {model.name})")
    result = pipeline.run(state, model, config)
    _write(render_run(run_report(document.name, model, result), args.format), args.output)
    return 0


def cmd_verify_paper(args: argparse.Namespace) -> int:
    """Recompute the reproduction table; exit 1 if any row fails."""
    config = _settings_for(args)
    rows = reproduction_rows(config, include_design=not args.skip_design)
    _write(render_rows(rows, args.format), args.output)
    return 0 if table_passes(rows) else 1


def _ancilla_range(text: str) -> range:
    try:
        low, high = (int(part) for part in text.split("..", 1))
    except ValueError:
        raise DocumentError(f"--sweep-ancillas expects 'a..b', got {text!r}", {"field": "sweep_ancillas"})
    if low < 0 or high < low:
        raise DocumentError(f"--sweep-ancillas needs 0 <= a <= b, got {text!r}", {"field": "sweep_ancillas"})
    return range(low, high + 1)


def cmd_design(args: argparse.Namespace) -> int:
    """Search for a detector design; exit 1 when no design is feasible."""
    problem = read_document(DesignProblem, Path(args.problem))
    config = _settings_for(args)
    if args.sweep_ancillas:
        sweep = sweep_ancillas(problem, _ancilla_range(args.sweep_ancillas), config)
        _write(sweep.model_dump_json(indent=2) + "\n", args.output)
        return 0 if any(r.feasible for r in sweep.reports) else 1

    report = design(problem, config)
    if args.format == "json" or args.output:
        _write(report.model_dump_json(indent=2) + "\n", args.output)
    else:
        _write(
            f"N~={problem.n_tilde} ancillas={problem.ancilla_count} feasible={report.feasible}\n"
            f"|g0|^2={report.success_probability:.12f} cross-talk={report.max_cross_talk:.3e} "
            f"best restart={report.best_restart}/{report.restarts}\n",
            None,
        )
    return 0 if report.feasible else 1


def _resource_state(args: argparse.Namespace, config: Settings) -> PureState:
    def need(name):
        value = getattr(args, name)
        if value is None:
            raise DocumentError(f"--{name.replace('_', '-')} is required for resource {args.resource}", {"field": name})
        return value

    resource = args.resource
    if resource == "vacuum":
        return make_basis_state((0,))
    if resource == "number":
        return make_basis_state((need("n"),))
    if resource == "squeezed_vacuum":
        return squeezed_vacuum(need("lam"), config.tail_epsilon)
    if resource == "photon_subtracted":
        return photon_subtracted(need("lam"), config.tail_epsilon)
    if resource == "number_phase_bell":
        return number_phase_bell(need("n"), args.m or 0)
    if resource == "generalized_bell":
        if args.lam is not None and args.lam_prime is not None:
            spec = GeneralizedBellSpec.from_squeezing(need("n"), args.m or 0, args.lam, args.lam_prime)
        else:
            spec = GeneralizedBellSpec(need("n"), args.m or 0, args.r if args.r is not None else 1.0)
        return generalized_bell(spec)
    return truncated_maximal_epr_state(args.n_low or 0, need("n"))


def cmd_state_print(args: argparse.Namespace) -> int:
    """Print a resource or an amplitude list in the canonical state format."""
    config = _settings_for(args)
    if args.amplitudes is not None:
        try:
            values = [complex(v.strip().replace(" ", "")) for v in args.amplitudes.split(",")]
        except ValueError as exc:
            raise DocumentError(f"--amplitudes: {exc}", {"field": "amplitudes"}) from exc
        state = single_mode_state(values)
    elif args.resource is not None:
        state = _resource_state(args, config)
    else:
        raise DocumentError("state print needs --resource or --amplitudes", {"field": "resource"})

    if args.format == "json":
        text = json.dumps([e.model_dump() for e in _amplitude_entries(state)], indent=2) + "\n"
    elif args.format == "csv":
        rows = [[" ".join(map(str, p)), repr(a.real), repr(a.imag)] for p, a in state.items()]
        text = _csv_text(["pattern", "re", "im"], rows)
    else:
        text = format_state(state)
    _write(text, args.output)
    return 0


# ==================== Parser ====================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table", help="report format")
    common.add_argument("--seed", type=int, help=f"random seed (default {settings.seed})")
    common.add_argument("--tail-eps", type=float, help=f"squeezed-vacuum tail bound (default {settings.tail_epsilon:g})")
    common.add_argument("--tol", type=float, help=f"state/probability tolerance (default {settings.state_tolerance:g})")
    common.add_argument("--detector", help="ideal, quoted, designs or a detector design file")
    common.add_argument(
        "--log-level", type=str.upper, choices=LOG_LEVELS, help=f"logging level (default {settings.log_level})"
    )
    common.add_argument("--output", "-o", help="write the report to a file instead of stdout")

    parser = argparse.ArgumentParser(prog=settings.app_name, description=settings.description)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="run a pipeline document")
    run.add_argument("pipeline", help="pipeline JSON file")
    run.set_defaults(handler=cmd_run)

    verify = commands.add_parser("verify-paper", parents=[common], help="recompute the reproduction table")
    verify.add_argument("--skip-design", action="store_true", help="skip the optimizer rows")
    verify.set_defaults(handler=cmd_verify_paper)

    search = commands.add_parser("design", parents=[common], help="search for a Bell detector")
    search.add_argument("problem", help="design problem JSON file")
    search.add_argument("--sweep-ancillas", metavar="A..B", help="run the problem for each ancilla count in A..B")
    search.set_defaults(handler=cmd_design)

    state = commands.add_parser("state", help="state utilities")
    state_commands = state.add_subparsers(dest="state_command", required=True)
    show = state_commands.add_parser("print", parents=[common], help="print a state")
    show.add_argument("--resource", choices=RESOURCES)
    show.add_argument("--amplitudes", help="comma-separated single-mode amplitudes, e.g. '1,0.5,0.25j'")
    show.add_argument("--lam", type=float)
    show.add_argument("--lam-prime", type=float)
    show.add_argument("--r", type=float)
    show.add_argument("--n", type=int)
    show.add_argument("--n-low", type=int)
    show.add_argument("--m", type=int)
    show.set_defaults(handler=cmd_state_print)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point.

    Returns:
        0 on success, 1 on failure, infeasible design or zero-probability
        stage, 2 on usage or document errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)
    logger.info(f"Starting {settings.app_name} v{settings.app_version}")

    try:
        return args.handler(args)
    except FockportError as exc:
        logger.error(f"{exc.code}: {exc.message}")
        print(exc.to_response().model_dump_json(), file=sys.stderr)
        return exc.status
    finally:
        run_metrics.log_summary()


if __name__ == "__main__":
    sys.exit(main())
