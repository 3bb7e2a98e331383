"""Front of the pipeline: parse the model, flatten the network, build A_S and A_L."""

import logging

from coordsynth.csp.compose import flatten_network
from coordsynth.csp.parser import parse_model
from coordsynth.ltl.formula import negate
from coordsynth.ltl.tableau import to_nba
from coordsynth.synth_flow.flow_config.SynthFlowState import SynthFlowState
from coordsynth.synth_flow.phase import phase

logger = logging.getLogger(__name__)


@phase("parse")
def parse_node(state: SynthFlowState) -> dict:
    network, spec = parse_model(state.model_text)
    logger.info(f"[MODEL] {state.source}: {len(network.agents)} agents, {len(network.actions)} actions")
    return {"network": network, "spec": spec}


@phase("flatten")
def flatten_node(state: SynthFlowState) -> dict:
    env = flatten_network(state.network)
    return {"env": env}


@phase("automata")
def build_automata_node(state: SynthFlowState) -> dict:
    letters = tuple(a.id for a in state.env.alphabet)
    nba = to_nba(negate(state.spec.liveness), letters)
    logger.info(
        f"[AUTOMATA] A_S has {state.spec.safety_complement.n_states} states, "
        f"A_L (negated liveness) has {nba.n_states}"
    )
    return {"safety_nfa": state.spec.safety_complement, "liveness_nba": nba}
