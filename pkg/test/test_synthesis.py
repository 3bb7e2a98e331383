"""
Bounded synthesis: encoding, solver back ends, extraction and the pipeline runs on the illustrative examples.

Scenarios:
1. Examples 0, 1, 3 and 4 are realizable at N=1 with the smallest offered sets
2. Examples 2 and 5 stay unrealizable up to N=4
3. Every extracted machine passes the certificate re-check and the checker
4. The external bridge reads SAT-competition output
5. A parallel run returns once the smallest satisfiable bound is known
6. Synthesized coordinators read back from their depth-5 fulltree prefix unchanged
"""
import json
import stat
import time

import pytest

from coordsynth.benchgen.case_studies import arbiter_text, pr_async_text, pr_sync_text, thermostat_text
from coordsynth.benchgen.examples import example_text
from coordsynth.coordinator.fulltree import fulltree_prefix, proc_of_tree
from coordsynth.coordinator.machines import csp_to_moore
from coordsynth.csp.compose import bisimilar_up_to
from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.synth_flow.synth_flow import synth_flow
from coordsynth.synthesis.certificate import CertificateError, recheck_certificate
from coordsynth.synthesis.encoder import CnfInstance, EncodingError, encode
from coordsynth.synthesis.solvers import (
    BuiltinSolver, ExternalSolver, SolverError, open_solver, parse_competition_output,
)
from coordsynth.synthesis.synthesize import ExtractionError, extract_moore, synthesize
from coordsynth.utils.constants import SynthesisDefaults, SynthesisStatus, VerdictKind
from coordsynth.verify.checker import check
from test.helpers import machine, sigma_of

UNREALIZABLE_BOUNDS = SynthesisConfig(bounds=(1, 2, 3, 4))


def _tiny_instance() -> CnfInstance:
    return CnfInstance(
        n_states=1, n_ucw_states=1, sigma=(), counter_width=1, groups=0,
        n_vars=2, clauses=[[1, 2], [-1]], variables={},
    )


@pytest.mark.parametrize("k, offered", [
    (0, ["a0"]),
    (1, ["a0"]),
    (3, ["a0"]),
    (4, ["a0", "a1"]),
])
def test_realizable_examples(k, offered):
    state = synth_flow(example_text(k), source=f"ex{k}")
    report = state.report
    assert report.status == SynthesisStatus.REALIZABLE
    assert report.bound == 1
    assert report.outputs == [offered]
    assert report.verdict == VerdictKind.PASS
    assert report.certificate_green_visits <= state.spec_automaton.ucw.n_states * report.bound
    assert report.coordinator.startswith("process M = ")


@pytest.mark.parametrize("k", [2, 5])
def test_unrealizable_examples(k):
    state = synth_flow(example_text(k), UNREALIZABLE_BOUNDS)
    report = state.report
    assert report.status == SynthesisStatus.BOUNDED_UNREALIZABLE
    assert report.bound == 4
    assert [a.bound for a in report.attempts] == [1, 2, 3, 4]
    assert not any(a.satisfiable for a in report.attempts)
    assert report.coordinator is None
    assert report.verdict is None


def test_example_one_coordinator_text():
    report = synth_flow(example_text(1)).report
    assert report.coordinator == "process M = a0 -> M;"


def test_without_minimization_the_machine_still_checks():
    state = synth_flow(example_text(4), SynthesisConfig(minimize=False))
    assert state.report.verdict == VerdictKind.PASS


def test_cross_check_mode_reports_no_mismatches():
    report = synth_flow(example_text(3), SynthesisConfig(mode="both")).report
    assert report.mode == "both"
    assert report.mismatches == []


def test_parallel_bounds_agree_with_sequential():
    sequential = synth_flow(example_text(1)).report
    parallel = synth_flow(example_text(1), SynthesisConfig(bounds=(1, 2), jobs=2)).report
    assert parallel.outputs == sequential.outputs
    assert parallel.bound == sequential.bound


def _scripted_solver(path, instance, model) -> str:
    """Answers `model` for `instance` at once and stalls on anything else."""
    header = next(line for line in instance.to_dimacs().splitlines() if line.startswith("p cnf"))
    path.write_text(
        "#!/bin/sh\n"
        f"if grep -qx '{header}' \"$1\"; then\n"
        "  echo 's SATISFIABLE'\n"
        f"  echo 'v {' '.join(str(lit) for lit in model)} 0'\n"
        "  exit 10\n"
        "fi\n"
        "sleep 30\n"
        "echo 's UNSATISFIABLE'\n"
        "exit 20\n"
    )
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def test_parallel_run_stops_at_the_first_satisfiable_bound(tmp_path):
    state = synth_flow(example_text(1))
    ucw, alphabet = state.spec_automaton.ucw, state.result.machine.alphabet
    first = encode(ucw, 1)
    with BuiltinSolver(first) as solver:
        model = solver.solve()
    binary = _scripted_solver(tmp_path / "slow-above-one", first, model)
    config = SynthesisConfig(bounds=(1, 2, 3), jobs=3, solver=binary, minimize=False)
    started = time.perf_counter()
    result = synthesize(ucw, alphabet, config)
    assert time.perf_counter() - started < 15
    assert result.realizable
    assert result.bound == 1
    assert [a.bound for a in result.attempts] == [1]


def test_large_instances_go_to_the_configured_binary(tmp_path, monkeypatch):
    script = tmp_path / "large-solver"
    script.write_text("#!/bin/sh\necho 's SATISFIABLE'\necho 'v -1 2 0'\nexit 10\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    monkeypatch.setattr(SynthesisDefaults, "EXTERNAL_CLAUSE_THRESHOLD", 2)
    with open_solver(_tiny_instance(), large_binary=str(script)) as solver:
        assert isinstance(solver, ExternalSolver)
        assert solver.solve() == [-1, 2]
    with open_solver(_tiny_instance()) as solver:
        assert isinstance(solver, BuiltinSolver)
    monkeypatch.setattr(SynthesisDefaults, "EXTERNAL_CLAUSE_THRESHOLD", 3)
    with open_solver(_tiny_instance(), large_binary=str(script)) as solver:
        assert isinstance(solver, BuiltinSolver)


def test_json_report_is_reproducible():
    first = synth_flow(example_text(1)).report.model_dump_json(indent=2)
    second = synth_flow(example_text(1)).report.model_dump_json(indent=2)
    assert first == second
    record = json.loads(first)
    assert "timings" not in record
    assert record["status"] == "realizable"
    assert record["sizes"]["spec_normal_states"] <= record["sizes"]["spec_product_bound"]


def test_dimacs_artifacts(tmp_path):
    synth_flow(example_text(2), SynthesisConfig(bounds=(1, 2), artifacts_dir=tmp_path))
    assert (tmp_path / "bound1.cnf").read_text().startswith("p cnf")
    assert (tmp_path / "bound2.cnf").exists()


def test_encoding_shape():
    ucw = synth_flow(example_text(1)).spec_automaton.ucw
    instance = encode(ucw, 2)
    assert instance.groups == ucw.n_states * 2 * len(ucw.public)
    for s in range(2):
        for m in range(len(ucw.public)):
            assert instance.var("T", s, m, 0) is not None
            assert instance.var("O", s, m) is not None
    assert len(instance.output_vars) == 2 * len(ucw.public)
    with pytest.raises(EncodingError):
        encode(ucw, 0)


def test_extraction_checks_the_alphabet():
    state = synth_flow(example_text(1))
    ucw = state.spec_automaton.ucw
    alphabet = state.result.machine.alphabet
    instance = encode(ucw, 1)
    with BuiltinSolver(instance) as solver:
        model = solver.solve()
    assert extract_moore(model, instance, alphabet).n_states == 1
    with pytest.raises(ExtractionError):
        extract_moore(model, instance, tuple(reversed(alphabet)))


def test_synthesize_direct_call():
    state = synth_flow(example_text(0))
    result = synthesize(state.spec_automaton.ucw, state.result.machine.alphabet, SynthesisConfig(bounds=(1,)))
    assert result.realizable
    assert result.machine == state.result.machine


def test_certificate_rejects_an_invalid_machine(load_example):
    network, spec, env = load_example(1)
    state = synth_flow(example_text(1))
    ucw = state.spec_automaton.ucw
    alphabet = state.result.machine.alphabet
    assert recheck_certificate(ucw, state.result.machine) <= ucw.n_states
    bad = csp_to_moore(machine(network, "process M = a1 -> M;"), alphabet)
    with pytest.raises(CertificateError):
        recheck_certificate(ucw, bad)


def test_builtin_solver():
    with BuiltinSolver(_tiny_instance()) as solver:
        assert 2 in solver.solve()
        assert solver.solve([-2]) is None
    with pytest.raises(SolverError):
        BuiltinSolver(_tiny_instance(), name="no-such-solver")


def test_parse_competition_output():
    assert parse_competition_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 10) == [1, -2, 3]
    assert parse_competition_output("s UNSATISFIABLE\n", 20) is None
    assert parse_competition_output("", 20) is None
    with pytest.raises(SolverError):
        parse_competition_output("s UNKNOWN\n", 0)
    with pytest.raises(SolverError):
        parse_competition_output("s SATISFIABLE\n", 10)


def test_external_bridge(tmp_path):
    script = tmp_path / "fake-solver"
    script.write_text("#!/bin/sh\necho 's SATISFIABLE'\necho 'v -1 2 0'\nexit 10\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    with open_solver(_tiny_instance(), binary=str(script), artifacts_dir=tmp_path / "cnf") as solver:
        assert isinstance(solver, ExternalSolver)
        assert solver.solve([2]) == [-1, 2]
    written = (tmp_path / "cnf" / "bound1_call1.cnf").read_text()
    assert written.startswith("p cnf 2 3")
    with pytest.raises(SolverError):
        ExternalSolver(_tiny_instance(), str(tmp_path / "missing")).solve()


def _within_certificate_bound(state) -> bool:
    report = state.report
    return report.certificate_green_visits <= state.spec_automaton.ucw.n_states * report.bound


def _tree_agrees(coordinator) -> bool:
    tree = proc_of_tree(fulltree_prefix(coordinator, 5), coordinator.public)
    return bisimilar_up_to(coordinator, tree, 5)


@pytest.mark.parametrize("k", [0, 1, 3, 4])
def test_fulltree_prefix_reads_back_as_the_coordinator(k):
    state = synth_flow(example_text(k))
    assert _tree_agrees(state.coordinator)


@pytest.mark.slow
@pytest.mark.parametrize("level, max_states", [(1, 1), (2, 4), (3, 3)])
def test_thermostat(level, max_states):
    state = synth_flow(thermostat_text(level))
    report = state.report
    assert report.status == SynthesisStatus.REALIZABLE
    assert report.bound <= max_states
    assert report.verdict == VerdictKind.PASS
    assert _within_certificate_bound(state)
    assert _tree_agrees(state.coordinator)


ROUND_ROBIN_2 = """
process M  = request.1 -> M1 | grant.1 -> M | release.1 -> M;
process M1 = request.0 -> M | grant.0 -> M1 | release.0 -> M1;
"""

ROUND_ROBIN_3 = """
process M0 = grant.1 -> M1 | request.1 -> M2 | release.1 -> M2;
process M1 = request.2 -> M0 | request.1 -> M3 | grant.1 -> M3;
process M2 = request.0 -> M0 | grant.0 -> M2 | release.0 -> M3;
process M3 = grant.2 -> M1 | release.2 -> M2 | release.1 -> M2 | request.2 -> M3;
"""


@pytest.mark.slow
def test_arbiter_two():
    state = synth_flow(arbiter_text(2))
    report = state.report
    assert report.status == SynthesisStatus.REALIZABLE
    assert report.bound == 2
    assert report.verdict == VerdictKind.PASS
    assert _within_certificate_bound(state)
    assert _tree_agrees(state.coordinator)

    round_robin = machine(state.network, ROUND_ROBIN_2)
    assert len(round_robin.states) == report.bound
    assert check(state.env, round_robin, state.spec).passed
    moore = csp_to_moore(round_robin, sigma_of(state.env))
    assert recheck_certificate(state.spec_automaton.ucw, moore) <= state.spec_automaton.ucw.n_states * moore.n_states


@pytest.mark.slow
def test_arbiter_three():
    state = synth_flow(arbiter_text(3), SynthesisConfig(bounds=(1, 2, 3, 4)))
    report = state.report
    assert report.status == SynthesisStatus.REALIZABLE
    assert report.bound <= 4
    assert report.verdict == VerdictKind.PASS
    assert _within_certificate_bound(state)
    assert _tree_agrees(state.coordinator)
    assert check(state.env, machine(state.network, ROUND_ROBIN_3), state.spec).passed


@pytest.mark.slow
def test_shared_variable_copy():
    synchronous = synth_flow(pr_sync_text())
    assert synchronous.report.status == SynthesisStatus.REALIZABLE
    assert synchronous.report.verdict == VerdictKind.PASS
    assert _within_certificate_bound(synchronous)
    asynchronous = synth_flow(pr_async_text(), SynthesisConfig(bounds=(1, 2, 3))).report
    assert asynchronous.status == SynthesisStatus.BOUNDED_UNREALIZABLE
    assert asynchronous.bound == 3
    assert [a.bound for a in asynchronous.attempts] == [1, 2, 3]
    assert not any(a.satisfiable for a in asynchronous.attempts)
