from typing import Any

from pydantic import BaseModel, ConfigDict

from coordsynth.automata.automaton import Automaton


class SpecPair(BaseModel):
    """
    Specification (φ_S, φ_L).

    The safety part is stored as a finite-word automaton for its complement:
    a maximal finite trace accepted by `safety_complement` violates φ_S.
    `liveness` is an `ltl.formula.Formula` tree.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    safety_complement: Automaton
    liveness: Any
    safety_source: str = "universal"
    liveness_source: str = "true"
