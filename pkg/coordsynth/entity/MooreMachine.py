from pydantic import BaseModel, ConfigDict, model_validator

from coordsynth.entity.Action import Action


class MooreMachine(BaseModel):
    """
    Deterministic machine with states 0..N-1 and initial state 0.

    `outputs[s]` is the set of Σ action ids offered at s; `transitions[s][m]`
    is the successor on `alphabet[m]` and is total over Σ.
    """
    model_config = ConfigDict(frozen=True)

    alphabet: tuple[Action, ...]
    outputs: tuple[frozenset[int], ...]
    transitions: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_total(self):
        n = len(self.outputs)
        if n == 0:
            raise ValueError("machine needs at least one state")
        if len(self.transitions) != n:
            raise ValueError("one transition row per state required")
        ids = {a.id for a in self.alphabet}
        for s in range(n):
            if len(self.transitions[s]) != len(self.alphabet):
                raise ValueError(f"state {s}: transition row is not total over the alphabet")
            if any(not 0 <= t < n for t in self.transitions[s]):
                raise ValueError(f"state {s}: successor out of range")
            if not self.outputs[s] <= ids:
                raise ValueError(f"state {s}: output outside the alphabet")
        return self

    @property
    def n_states(self) -> int:
        return len(self.outputs)

    def successor(self, state: int, action_id: int) -> int:
        position = next(m for m, a in enumerate(self.alphabet) if a.id == action_id)
        return self.transitions[state][position]
