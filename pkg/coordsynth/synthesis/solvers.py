"""
SAT back ends: the in-process python-sat solver and an external binary bridge.

Both expose `solve(assumptions) -> model | None`. The external bridge writes
DIMACS, runs `<binary> <file>` and reads SAT-competition output (`s` and `v`
lines, exit codes 10/20); assumptions become unit clauses.
"""

import logging
import os
import subprocess
import tempfile
import threading
from pathlib import Path
from typing import Iterable, Optional

from pysat.solvers import NoSuchSolverError, Solver

from coordsynth.synthesis.encoder import CnfInstance
from coordsynth.utils.constants import SynthesisDefaults
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class SolverError(CoordSynthError):
    """Solver missing, crashed, timed out or produced malformed output."""
    pass


# ============================================================================
# Built-in
# ============================================================================

class BuiltinSolver:
    """python-sat solver kept alive across assumption-based calls."""

    def __init__(self, instance: CnfInstance, name: str = SynthesisDefaults.BUILTIN_SOLVER,
                 timeout: Optional[float] = None):
        self.name = name
        self.timeout = timeout
        try:
            self._solver = Solver(name=name, bootstrap_with=instance.clauses)
        except NoSuchSolverError as e:
            raise SolverError(f"unknown built-in solver '{name}'") from e

    def solve(self, assumptions: Iterable[int] = ()) -> Optional[list[int]]:
        assumptions = list(assumptions)
        if self.timeout is None:
            satisfiable = self._solver.solve(assumptions=assumptions)
        else:
            timer = threading.Timer(self.timeout, self._solver.interrupt)
            timer.start()
            try:
                satisfiable = self._solver.solve_limited(assumptions=assumptions, expect_interrupt=True)
            finally:
                timer.cancel()
            if satisfiable is None:
                self._solver.clear_interrupt()
                raise SolverError(f"{self.name} timed out after {self.timeout}s")
        return self._solver.get_model() if satisfiable else None

    def close(self) -> None:
        self._solver.delete()

    def __enter__(self) -> "BuiltinSolver":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


# ============================================================================
# External bridge
# ============================================================================

def parse_competition_output(stdout: str, returncode: int) -> Optional[list[int]]:
    """Model literals for SAT, None for UNSAT; SolverError on anything else."""
    status = None
    model: list[int] = []
    for line in stdout.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            model.extend(int(token) for token in line[2:].split())
    if status is None:
        status = {10: "SATISFIABLE", 20: "UNSATISFIABLE"}.get(returncode)
    if status == "UNSATISFIABLE":
        return None
    if status != "SATISFIABLE":
        raise SolverError(f"unrecognized solver status (exit code {returncode})")
    if model and model[-1] == 0:
        model.pop()
    if not model:
        raise SolverError("solver reported SATISFIABLE without a model")
    return model


class ExternalSolver:
    """Runs a SAT-competition binary on a DIMACS file."""

    def __init__(self, instance: CnfInstance, binary: str, timeout: Optional[float] = None,
                 artifacts_dir: Optional[Path] = None):
        self.instance = instance
        self.binary = binary
        self.timeout = timeout
        self.artifacts_dir = Path(artifacts_dir) if artifacts_dir else None
        self._calls = 0

    def solve(self, assumptions: Iterable[int] = ()) -> Optional[list[int]]:
        text = self.instance.to_dimacs()
        units = [[lit] for lit in assumptions]
        if units:
            header, _, body = text.partition("\n")
            n_vars = int(header.split()[2])
            n_clauses = int(header.split()[3]) + len(units)
            text = f"p cnf {n_vars} {n_clauses}\n" + body + "".join(f"{u[0]} 0\n" for u in units)
        self._calls += 1
        if self.artifacts_dir is not None:
            self.artifacts_dir.mkdir(parents=True, exist_ok=True)
            path = self.artifacts_dir / f"bound{self.instance.n_states}_call{self._calls}.cnf"
            path.write_text(text)
            return self._run(str(path))
        with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as handle:
            handle.write(text)
            path = handle.name
        try:
            return self._run(path)
        finally:
            os.unlink(path)

    def _run(self, path: str) -> Optional[list[int]]:
        try:
            result = subprocess.run(
                [self.binary, path], capture_output=True, text=True, timeout=self.timeout,
            )
        except FileNotFoundError as e:
            logger.error(f"[SYNTH] solver binary not found: {self.binary}")
            raise SolverError(f"solver binary '{self.binary}' not found") from e
        except subprocess.TimeoutExpired as e:
            raise SolverError(f"{self.binary} timed out after {self.timeout}s") from e
        return parse_competition_output(result.stdout, result.returncode)

    def close(self) -> None:
        pass

    def __enter__(self) -> "ExternalSolver":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_solver(instance: CnfInstance, binary: Optional[str] = None,
                name: str = SynthesisDefaults.BUILTIN_SOLVER, timeout: Optional[float] = None,
                artifacts_dir: Optional[Path] = None, large_binary: Optional[str] = None):
    """
    External bridge when a binary is given, otherwise the built-in solver.

    Instances at or above EXTERNAL_CLAUSE_THRESHOLD clauses go to
    `large_binary` when one is configured.
    """
    if binary:
        return ExternalSolver(instance, binary, timeout=timeout, artifacts_dir=artifacts_dir)
    clauses = len(instance.clauses)
    if clauses >= SynthesisDefaults.EXTERNAL_CLAUSE_THRESHOLD:
        if large_binary:
            logger.info(f"[SYNTH] {clauses} clauses at N={instance.n_states}; handing over to {large_binary}")
            return ExternalSolver(instance, large_binary, timeout=timeout, artifacts_dir=artifacts_dir)
        logger.warning(
            f"[SYNTH] {clauses} clauses at N={instance.n_states} on the built-in solver; "
            f"set --large-solver to send instances this size to an external binary"
        )
    return BuiltinSolver(instance, name=name, timeout=timeout)
