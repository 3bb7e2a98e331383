from typing import Optional

from pydantic import BaseModel

from coordsynth.entity.Trace import Trace
from coordsynth.utils.constants import VerdictKind


class Verdict(BaseModel):
    """Checker outcome; a failing verdict carries a replayable witness."""
    kind: VerdictKind = VerdictKind.PASS
    witness: Optional[Trace] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.kind == VerdictKind.PASS
