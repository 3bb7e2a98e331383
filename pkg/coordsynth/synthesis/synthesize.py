"""
Bound schedule driver: encode, solve, minimize outputs, extract.

The first satisfiable bound of the schedule wins. When no bound is
satisfiable the result is bounded-unrealizable with the largest bound tried,
which is evidence and not a proof.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Optional

from pydantic import BaseModel

from coordsynth.automata.automaton import Automaton
from coordsynth.entity.Action import Action
from coordsynth.entity.MooreMachine import MooreMachine
from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.synthesis.encoder import CnfInstance, encode
from coordsynth.synthesis.solvers import open_solver
from coordsynth.utils.constants import SynthesisStatus
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class ExtractionError(CoordSynthError):
    """A satisfying model lacks a required variable or breaks functionality of T."""
    pass


class BoundAttempt(BaseModel):
    bound: int
    variables: int
    clauses: int
    groups: int
    satisfiable: bool
    seconds: float = 0.0


class SynthesisResult(BaseModel):
    status: SynthesisStatus
    bound: int
    machine: Optional[MooreMachine] = None
    attempts: list[BoundAttempt] = []

    @property
    def realizable(self) -> bool:
        return self.status == SynthesisStatus.REALIZABLE


# ============================================================================
# Extraction
# ============================================================================

def extract_moore(model: Iterable[int], instance: CnfInstance, alphabet: tuple[Action, ...]) -> MooreMachine:
    """
    Read O and T off a satisfying assignment.

    Output variables missing from the model read as false. Every (s, m) must
    have exactly one true T(s, m, ·).

    Raises:
        ExtractionError: On a missing T variable or a non-functional T
    """
    true = {lit for lit in model if lit > 0}
    n, sigma = instance.n_states, instance.sigma
    if tuple(a.id for a in alphabet) != sigma:
        raise ExtractionError("machine alphabet does not match the encoded Σ")
    outputs = []
    rows = []
    for s in range(n):
        outputs.append(frozenset(a for m, a in enumerate(sigma) if instance.var("O", s, m) in true))
        row = []
        for m in range(len(sigma)):
            targets = []
            for t in range(n):
                v = instance.var("T", s, m, t)
                if v is None:
                    raise ExtractionError(f"model misses T({s}, {m}, {t})")
                if v in true:
                    targets.append(t)
            if len(targets) != 1:
                raise ExtractionError(f"T({s}, {m}, ·) has {len(targets)} true successors")
            row.append(targets[0])
        rows.append(tuple(row))
    return MooreMachine(alphabet=alphabet, outputs=tuple(outputs), transitions=tuple(rows))


# ============================================================================
# Solving
# ============================================================================

def _minimize(solver, instance: CnfInstance, model: list[int]) -> list[int]:
    """Greedily switch output bits off while the instance stays satisfiable."""
    fixed: list[int] = []
    current = set(model)
    for v in instance.output_vars:
        if -v in current:
            fixed.append(-v)
            continue
        attempt = solver.solve(fixed + [-v])
        if attempt is None:
            fixed.append(v)
        else:
            fixed.append(-v)
            model = attempt
            current = set(model)
    return model


def _solve_bound(instance: CnfInstance, config: SynthesisConfig) -> Optional[list[int]]:
    """Worker entry point; plain arguments so it can run in a process pool."""
    with _open(instance, config, config.artifacts_dir) as solver:
        return solver.solve()


def _open(instance: CnfInstance, config: SynthesisConfig, artifacts_dir: Optional[Path] = None):
    return open_solver(instance, binary=config.solver, name=config.builtin_solver, timeout=config.timeout,
                       artifacts_dir=artifacts_dir, large_binary=config.large_instance_solver)


def _stop_pool(pool: ProcessPoolExecutor) -> None:
    """Drop queued bounds and kill workers still solving, without waiting for them."""
    workers = list((pool._processes or {}).values())
    pool.shutdown(wait=False, cancel_futures=True)
    for worker in workers:
        if worker.is_alive():
            worker.terminate()


def _solve_in_pool(instances: dict[int, CnfInstance], config: SynthesisConfig,
                   attempts: list[BoundAttempt]) -> Optional[tuple[CnfInstance, list[int]]]:
    """
    Solve all bounds in a process pool, reading results in schedule order.

    The first satisfiable bound ends the run: larger bounds still queued are
    cancelled and running ones are terminated.
    """
    started = time.perf_counter()
    pool = ProcessPoolExecutor(max_workers=config.jobs)
    try:
        futures = {n: pool.submit(_solve_bound, instance, config) for n, instance in instances.items()}
        for n, instance in instances.items():
            model = futures[n].result()
            attempts.append(_attempt(instance, model is not None, time.perf_counter() - started))
            logger.info(f"[SYNTH] bound N={n} -> {'SAT' if model else 'UNSAT'}")
            if model is not None:
                return instance, model
        return None
    finally:
        _stop_pool(pool)


def _keep_dimacs(instance: CnfInstance, artifacts_dir: Optional[Path]) -> None:
    if artifacts_dir is None:
        return
    artifacts_dir.mkdir(parents=True, exist_ok=True)
    (artifacts_dir / f"bound{instance.n_states}.cnf").write_text(instance.to_dimacs())


def _attempt(instance: CnfInstance, satisfiable: bool, seconds: float) -> BoundAttempt:
    return BoundAttempt(
        bound=instance.n_states, variables=instance.n_vars, clauses=len(instance.clauses),
        groups=instance.groups, satisfiable=satisfiable, seconds=seconds,
    )


def synthesize(ucw: Automaton, alphabet: tuple[Action, ...],
               config: Optional[SynthesisConfig] = None) -> SynthesisResult:
    """
    Try the bound schedule and return the first machine found.

    Args:
        ucw: Specification UCW over (a, L)
        alphabet: Σ as Action objects, ordered like the UCW's Σ positions
        config: Bounds, solver choice, timeout, jobs and minimization flag

    Returns:
        SynthesisResult, realizable with a machine or bounded-unrealizable
    """
    config = config or SynthesisConfig()
    instances = {}
    attempts: list[BoundAttempt] = []
    found: Optional[tuple[CnfInstance, list[int]]] = None

    if config.jobs > 1 and len(config.bounds) > 1:
        for n in config.bounds:
            instances[n] = encode(ucw, n)
            _keep_dimacs(instances[n], config.artifacts_dir)
        found = _solve_in_pool(instances, config, attempts)
    else:
        for n in config.bounds:
            instance = encode(ucw, n)
            _keep_dimacs(instance, config.artifacts_dir)
            started = time.perf_counter()
            model = _solve_bound(instance, config)
            attempts.append(_attempt(instance, model is not None, time.perf_counter() - started))
            logger.info(f"[SYNTH] bound N={n} -> {'SAT' if model else 'UNSAT'}")
            if model is not None:
                found = (instance, model)
                break

    if found is None:
        logger.info(f"[SYNTH] bounded-unrealizable up to N={config.bounds[-1]}")
        return SynthesisResult(
            status=SynthesisStatus.BOUNDED_UNREALIZABLE, bound=config.bounds[-1], attempts=attempts,
        )

    instance, model = found
    if config.minimize:
        with _open(instance, config) as solver:
            model = _minimize(solver, instance, model)
    machine = extract_moore(model, instance, alphabet)
    logger.info(f"[SYNTH] realizable at N={instance.n_states}")
    return SynthesisResult(
        status=SynthesisStatus.REALIZABLE, bound=instance.n_states, machine=machine, attempts=attempts,
    )
