from langgraph.constants import END

from coordsynth.synth_flow.flow_config.SynthFlowState import SynthFlowState
from coordsynth.synth_flow.model_nodes import build_automata_node, flatten_node, parse_node
from coordsynth.synth_flow.synthesis_nodes import report_node, spec_automaton_node, synthesize_node, verify_node

PHASE_NODES = {
    "parse": parse_node,
    "flatten": flatten_node,
    "build_automata": build_automata_node,
    "spec_automaton": spec_automaton_node,
    "synthesize": synthesize_node,
    "verify": verify_node,
    "report": report_node,
}

STATIC_EDGES = [
    ("parse", "flatten"),
    ("flatten", "build_automata"),
    ("build_automata", "spec_automaton"),
    ("spec_automaton", "synthesize"),
    ("verify", "report"),
    ("report", END),
]


def route_after_synthesis(state: SynthFlowState) -> str:
    """Only a realizable result has a machine to extract and check."""
    return "verify" if state.result.realizable else "report"


CONDITIONAL_EDGES = [
    {
        "source": "synthesize",
        "path": route_after_synthesis,
        "path_map": {
            "verify": "verify",
            "report": "report",
        },
    },
]
