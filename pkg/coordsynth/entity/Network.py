from typing import Optional

from pydantic import BaseModel, model_validator

from coordsynth.entity.Action import ActionTable
from coordsynth.entity.Process import Process


class Network(BaseModel):
    """
    Agents composed left to right.

    `sync_sets[i]` is the set synchronized when agent i+1 joins the fold;
    None means every public action common to both operands.
    """
    actions: ActionTable
    agents: tuple[Process, ...]
    sync_sets: tuple[Optional[frozenset[int]], ...] = ()

    @model_validator(mode="after")
    def _check_steps(self):
        if not self.agents:
            raise ValueError("network has no agents")
        if len(self.sync_sets) != len(self.agents) - 1:
            raise ValueError(
                f"{len(self.agents)} agents need {len(self.agents) - 1} sync sets, got {len(self.sync_sets)}"
            )
        return self
