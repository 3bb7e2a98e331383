import logging
from typing import Optional

from langgraph.graph import StateGraph

from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.synth_flow.flow_config.SynthFlowState import SynthFlowState
from coordsynth.synth_flow.flow_config.flow_registry import CONDITIONAL_EDGES, PHASE_NODES, STATIC_EDGES

logger = logging.getLogger(__name__)

workflow_builder = StateGraph(SynthFlowState)
# register nodes
for phase_name, node in PHASE_NODES.items():
    workflow_builder.add_node(phase_name, node)
# wire static edges
for source, path in STATIC_EDGES:
    workflow_builder.add_edge(source, path)

for edge in CONDITIONAL_EDGES:
    workflow_builder.add_conditional_edges(
        source=edge["source"],
        path=edge["path"],
        path_map=edge["path_map"],
    )

workflow_builder.set_entry_point("parse")
graph = workflow_builder.compile()


def synth_flow(model_text: str, config: Optional[SynthesisConfig] = None,
               source: str = "<model>") -> SynthFlowState:
    """
    Run parse → flatten → automata → specification automaton → synthesis
    (→ extraction and checking when realizable) → report.

    Raises:
        CoordSynthError: From the failing phase, tagged with its `phase` attribute
    """
    initial_state = {
        "model_text": model_text,
        "source": source,
        "config": config or SynthesisConfig(),
    }
    logger.debug(f"[SYNTH] invoking pipeline on {source}")
    result = graph.invoke(initial_state)
    return SynthFlowState(**result)
