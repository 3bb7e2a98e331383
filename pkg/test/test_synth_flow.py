"""
Pipeline wiring: phase order, routing after synthesis, timings and error tagging.

Scenarios:
1. A realizable model passes through every phase including verification
2. A bounded-unrealizable model skips verification and still gets a report
3. A failure carries the name of the phase that raised it
"""
import pytest

from coordsynth.benchgen.examples import example_text
from coordsynth.csp.parser import ModelSyntaxError
from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.synth_flow.flow_config.flow_registry import PHASE_NODES, route_after_synthesis
from coordsynth.synth_flow.synth_flow import synth_flow
from coordsynth.utils.errors import CoordSynthError, ScaleCapError

ALL_PHASES = {"parse", "flatten", "automata", "spec_automaton", "synthesize", "verify", "report"}


def test_realizable_run_visits_every_phase():
    state = synth_flow(example_text(0), source="ex0")
    assert set(state.timings) == ALL_PHASES
    assert state.report.source == "ex0"
    assert state.coordinator is not None
    assert state.verdict.passed
    assert route_after_synthesis(state) == "verify"


def test_unrealizable_run_skips_verification():
    state = synth_flow(example_text(2), SynthesisConfig(bounds=(1, 2)))
    assert set(state.timings) == ALL_PHASES - {"verify"}
    assert state.coordinator is None
    assert state.verdict is None
    assert state.report.coordinator is None
    assert route_after_synthesis(state) == "report"


def test_report_shows_timings_of_earlier_phases():
    state = synth_flow(example_text(1))
    assert set(state.report.timings) <= set(state.timings)
    assert "synthesize" in state.report.timings
    assert all(seconds >= 0 for seconds in state.timings.values())


def test_sizes_in_the_report():
    state = synth_flow(example_text(1))
    sizes = state.report.sizes
    assert sizes.environment == len(state.env.states)
    assert sizes.safety_states == state.safety_nfa.n_states
    assert sizes.ucw_states == state.spec_automaton.ucw.n_states


def test_registry_lists_the_nodes():
    assert list(PHASE_NODES) == [
        "parse", "flatten", "build_automata", "spec_automaton", "synthesize", "verify", "report",
    ]


def test_parse_errors_are_tagged():
    with pytest.raises(ModelSyntaxError) as caught:
        synth_flow("public a;\nprocess E = a -> ;\n")
    assert caught.value.phase == "parse"


def test_scale_caps_are_tagged_with_their_phase():
    names = [f"a{i}" for i in range(13)]
    text = (
        f"public {', '.join(names)};\n"
        f"process E = {' | '.join(f'{n} -> E' for n in names)};\n"
        'liveness "true";\n'
    )
    with pytest.raises(ScaleCapError) as caught:
        synth_flow(text, SynthesisConfig(mode="explicit"))
    assert caught.value.phase == "spec_automaton"
    assert isinstance(caught.value, CoordSynthError)
