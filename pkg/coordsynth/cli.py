"""
Command line: `coordsynth synth|verify|gen|specauto|enumerate`.

Exit codes: 0 success (synthesized and verified, check passed, candidate
found), 1 negative answer (bounded-unrealizable, check failed, enumeration
exhausted), 2 error.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from coordsynth import __version__
from coordsynth.automata.serialize import dump_dot, format_automaton
from coordsynth.benchgen.registry import BENCHMARKS, generate_text
from coordsynth.coordinator.machines import normalize_coordinator
from coordsynth.csp.compose import flatten_network
from coordsynth.csp.parser import parse_coordinator, parse_model
from coordsynth.csp.printer import format_process
from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.entity.SynthReport import SynthReport
from coordsynth.ltl.formula import negate
from coordsynth.ltl.tableau import to_nba
from coordsynth.spec_automaton.builder import build_spec_automaton
from coordsynth.synth_flow.synth_flow import synth_flow
from coordsynth.utils.constants import BuildMode, ExitCode
from coordsynth.utils.errors import CoordSynthError
from coordsynth.utils.logging_config import setup_logging
from coordsynth.verify.checker import check
from coordsynth.verify.enumerate import enumerate_coordinators

logger = logging.getLogger(__name__)

console = Console()

MODES = [m.value for m in BuildMode]


def _fail(phase: str, error: Exception) -> None:
    phase = getattr(error, "phase", phase)
    click.echo(f"[ERROR][{phase}] {error}", err=True)
    sys.exit(ExitCode.ERROR)


def _read(path: Path, phase: str = "input") -> str:
    try:
        return path.read_text()
    except OSError as e:
        _fail(phase, e)


def _parse_bounds(_ctx, _param, value: Optional[str]) -> Optional[tuple[int, ...]]:
    if value is None:
        return None
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers, e.g. 1,2,4")


# ============================================================================
# Human report
# ============================================================================

def print_report(report: SynthReport) -> None:
    if report.coordinator is not None:
        console.print(report.coordinator, markup=False, highlight=False)
    console.print(f"status: {report.status.value} (bound {report.bound})", markup=False)
    if report.verdict is not None:
        console.print(f"verdict: {report.verdict.value}", markup=False)
    if report.witness:
        console.print(f"witness: {report.witness}", markup=False)

    sizes = Table(title="automata")
    sizes.add_column("component")
    sizes.add_column("states", justify="right")
    for field, value in report.sizes.model_dump().items():
        sizes.add_row(field, str(value))
    console.print(sizes)

    attempts = Table(title="bounds")
    for column in ("N", "variables", "clauses", "result"):
        attempts.add_column(column, justify="right")
    for attempt in report.attempts:
        attempts.add_row(str(attempt.bound), str(attempt.variables), str(attempt.clauses),
                         "SAT" if attempt.satisfiable else "UNSAT")
    console.print(attempts)

    timings = Table(title="phases")
    timings.add_column("phase")
    timings.add_column("seconds", justify="right")
    for phase, seconds in report.timings.items():
        timings.add_row(phase, f"{seconds:.3f}")
    console.print(timings)

    if report.mismatches:
        console.print(f"{len(report.mismatches)} explicit/symbolic mismatches", style="red")
        for line in report.mismatches[:20]:
            console.print(f"  {line}", markup=False)


# ============================================================================
# Commands
# ============================================================================

@click.group()
@click.version_option(__version__)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def cli(verbose: bool) -> None:
    """Coordinator synthesis for networks of CSP agents."""
    setup_logging(verbose)


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--mode", type=click.Choice(MODES, case_sensitive=False), default=BuildMode.SYMBOLIC.value)
@click.option("--solver", help="SAT-competition solver binary; default is the built-in solver.")
@click.option("--large-solver", help="Solver binary used instead of the built-in one for very large instances.")
@click.option("--bounds", callback=_parse_bounds, help="Comma-separated bound schedule.")
@click.option("--timeout", type=float, help="Per-call solver timeout in seconds.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Solve bounds in parallel processes.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the JSON report here.")
@click.option("--keep-artifacts", type=click.Path(file_okay=False, path_type=Path),
              help="Keep DIMACS files in this directory.")
@click.option("--no-minimize", is_flag=True, help="Keep the solver's first output labels.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the coordinator equations here.")
def synth(model: Path, mode: str, solver: Optional[str], large_solver: Optional[str],
          bounds: Optional[tuple[int, ...]], timeout: Optional[float], jobs: int,
          report_path: Optional[Path], keep_artifacts: Optional[Path], no_minimize: bool, output: Optional[Path]) -> None:
    """Synthesize and check a coordinator for MODEL."""
    try:
        settings = {"mode": mode, "solver": solver, "large_instance_solver": large_solver,
                    "timeout": timeout, "jobs": jobs, "minimize": not no_minimize,
                    "artifacts_dir": keep_artifacts}
        if bounds is not None:
            settings["bounds"] = bounds
        config = SynthesisConfig(**settings)
    except ValidationError as e:
        _fail("config", e)

    text = _read(model)
    try:
        state = synth_flow(text, config, source=model.name)
    except CoordSynthError as e:
        _fail("synth", e)

    report = state.report
    print_report(report)
    try:
        if report_path is not None:
            report_path.write_text(report.model_dump_json(indent=2) + "\n")
        if output is not None and report.coordinator is not None:
            output.write_text(report.coordinator + "\n")
    except OSError as e:
        _fail("report", e)

    if not state.result.realizable:
        sys.exit(ExitCode.UNREALIZABLE)
    if not state.verdict.passed:
        click.echo(f"[ERROR][verify] synthesized coordinator fails the check: {state.verdict.kind.value}",
                   err=True)
        sys.exit(ExitCode.ERROR)
    sys.exit(ExitCode.OK)


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--coordinator", "coordinator_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
def verify(model: Path, coordinator_path: Path) -> None:
    """Check a coordinator (process equations over Σ) against MODEL."""
    try:
        network, spec = parse_model(_read(model))
        env = flatten_network(network)
        sigma = tuple(sorted(env.public_ids))
        coordinator = parse_coordinator(_read(coordinator_path), network.actions, sigma)
        verdict = check(env, normalize_coordinator(coordinator), spec)
    except CoordSynthError as e:
        _fail("verify", e)
    console.print(f"verdict: {verdict.kind.value}", markup=False)
    if verdict.witness is not None:
        console.print(f"witness: {verdict.witness.render(network.actions.name_of)}", markup=False)
    sys.exit(ExitCode.OK if verdict.passed else ExitCode.UNREALIZABLE)


@cli.command()
@click.argument("name", type=click.Choice(sorted(BENCHMARKS)))
@click.option("--n", type=int, help="Example index, thermostat level, arbiter size or NFA states.")
@click.option("--seed", type=int, help="Random seed for the pspace family.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path))
def gen(name: str, n: Optional[int], seed: Optional[int], output: Optional[Path]) -> None:
    """Emit a benchmark model."""
    try:
        text = generate_text(name, n=n, seed=seed)
        parse_model(text)
    except CoordSynthError as e:
        _fail("gen", e)
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        output.write_text(text)
    except OSError as e:
        _fail("gen", e)
    logger.info(f"[MODEL] wrote {output}")


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--mode", type=click.Choice(MODES, case_sensitive=False), default=BuildMode.SYMBOLIC.value)
@click.option("--dot", is_flag=True, help="Graphviz output instead of the text format.")
def specauto(model: Path, mode: str, dot: bool) -> None:
    """Build the specification automaton of MODEL and print it."""
    try:
        network, spec = parse_model(_read(model))
        env = flatten_network(network)
        nba = to_nba(negate(spec.liveness), tuple(a.id for a in env.alphabet))
        built = build_spec_automaton(env, spec.safety_complement, nba, mode=mode)
        name_of = network.actions.name_of
        click.echo(dump_dot(built.edge_green, name_of) if dot else format_automaton(built.edge_green, name_of),
                   nl=False)
    except CoordSynthError as e:
        _fail("specauto", e)
    if built.mismatches:
        for line in built.mismatches:
            click.echo(f"[MISMATCH] {line}", err=True)
        sys.exit(ExitCode.ERROR)


@cli.command(name="enumerate")
@click.argument("model", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--k", "max_states", type=int, default=2, show_default=True, help="Largest coordinator size.")
@click.option("--linear", is_flag=True, help="Single-execution coordinators only.")
def enumerate_command(model: Path, max_states: int, linear: bool) -> None:
    """Brute-force search for a coordinator with at most k states."""
    try:
        network, spec = parse_model(_read(model))
        env = flatten_network(network)
        result = enumerate_coordinators(env, spec, max_states, linear=linear)
    except CoordSynthError as e:
        _fail("enumerate", e)
    if result.exhausted:
        console.print(f"exhausted({max_states}) after {result.candidates} candidates", markup=False)
        sys.exit(ExitCode.UNREALIZABLE)
    console.print(format_process(result.coordinator), markup=False, highlight=False)
    sys.exit(ExitCode.OK)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
