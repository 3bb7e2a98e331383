"""Back of the pipeline: specification automaton, bounded synthesis, checking, report."""

import logging

from coordsynth.coordinator.machines import moore_to_csp
from coordsynth.csp.printer import format_process
from coordsynth.entity.SynthReport import AutomatonSizes, BoundRecord, SynthReport
from coordsynth.spec_automaton.builder import build_spec_automaton
from coordsynth.synth_flow.flow_config.SynthFlowState import SynthFlowState
from coordsynth.synth_flow.phase import phase
from coordsynth.synthesis.certificate import recheck_certificate
from coordsynth.synthesis.synthesize import synthesize
from coordsynth.verify.checker import check

logger = logging.getLogger(__name__)


@phase("spec_automaton")
def spec_automaton_node(state: SynthFlowState) -> dict:
    built = build_spec_automaton(
        state.env, state.safety_nfa, state.liveness_nba,
        mode=state.config.mode, node_cap=state.config.node_cap,
    )
    logger.info(
        f"[SPEC] {built.normal_states} normal states (bound {built.product_bound}), "
        f"UCW with {built.ucw.n_states} states"
    )
    return {"spec_automaton": built}


@phase("synthesize")
def synthesize_node(state: SynthFlowState) -> dict:
    actions = state.network.actions
    alphabet = tuple(actions[a] for a in state.spec_automaton.ucw.public)
    result = synthesize(state.spec_automaton.ucw, alphabet, state.config)
    return {"result": result}


@phase("verify")
def verify_node(state: SynthFlowState) -> dict:
    machine = state.result.machine
    coordinator = moore_to_csp(machine)
    certificate = recheck_certificate(state.spec_automaton.ucw, machine)
    verdict = check(state.env, coordinator, state.spec)
    return {"coordinator": coordinator, "verdict": verdict, "certificate": certificate}


@phase("report")
def report_node(state: SynthFlowState) -> dict:
    built = state.spec_automaton
    result = state.result
    name_of = state.network.actions.name_of
    sizes = AutomatonSizes(
        environment=len(state.env.states),
        safety_states=state.safety_nfa.n_states,
        liveness_states=state.liveness_nba.n_states,
        spec_normal_states=built.normal_states,
        spec_product_bound=built.product_bound,
        ucw_states=built.ucw.n_states,
    )
    report = SynthReport(
        source=state.source,
        mode=built.mode.value,
        status=result.status,
        bound=result.bound,
        sizes=sizes,
        attempts=[
            BoundRecord(bound=a.bound, variables=a.variables, clauses=a.clauses, satisfiable=a.satisfiable)
            for a in result.attempts
        ],
        mismatches=built.mismatches,
        timings=dict(state.timings),
    )
    if result.realizable:
        report.coordinator = format_process(state.coordinator)
        report.outputs = [sorted(name_of(a) for a in offered) for offered in result.machine.outputs]
        report.verdict = state.verdict.kind
        report.certificate_green_visits = state.certificate
        if state.verdict.witness is not None:
            report.witness = state.verdict.witness.render(name_of)
    return {"report": report}
