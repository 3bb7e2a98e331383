from typing import Any, Optional

from pydantic import BaseModel, ConfigDict

from coordsynth.automata.automaton import Automaton
from coordsynth.entity.Network import Network
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.entity.SynthesisConfig import SynthesisConfig
from coordsynth.entity.SynthReport import SynthReport
from coordsynth.entity.Verdict import Verdict


class SynthFlowState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    # Input
    model_text: str
    source: str = "<model>"
    config: SynthesisConfig = SynthesisConfig()

    # Parsed model
    network: Optional[Network] = None
    spec: Optional[SpecPair] = None
    env: Optional[Process] = None

    # Automata
    safety_nfa: Optional[Automaton] = None
    liveness_nba: Optional[Automaton] = None
    spec_automaton: Optional[Any] = None  # SpecAutomaton

    # Synthesis and checking
    result: Optional[Any] = None  # SynthesisResult
    coordinator: Optional[Process] = None
    verdict: Optional[Verdict] = None
    certificate: Optional[int] = None

    # Output
    timings: dict[str, float] = {}
    report: Optional[SynthReport] = None
