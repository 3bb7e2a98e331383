from typing import Optional

from pydantic import BaseModel, Field

from coordsynth.utils.constants import SynthesisStatus, VerdictKind


class AutomatonSizes(BaseModel):
    environment: int
    safety_states: int
    liveness_states: int
    spec_normal_states: int
    spec_product_bound: int
    ucw_states: int


class BoundRecord(BaseModel):
    bound: int
    variables: int
    clauses: int
    satisfiable: bool


class SynthReport(BaseModel):
    """
    Outcome of one `synth` run.

    `timings` is shown in the human report only; the JSON record leaves it out
    so that reruns with the same inputs produce identical files.
    """
    source: str
    mode: str
    status: SynthesisStatus
    bound: int
    coordinator: Optional[str] = None
    outputs: Optional[list[list[str]]] = None
    verdict: Optional[VerdictKind] = None
    witness: Optional[str] = None
    certificate_green_visits: Optional[int] = None
    sizes: AutomatonSizes
    attempts: list[BoundRecord] = []
    mismatches: Optional[list[str]] = None
    timings: dict[str, float] = Field(default_factory=dict, exclude=True)
