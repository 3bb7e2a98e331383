from typing import Optional

from pydantic import BaseModel, PrivateAttr, field_validator, model_validator

from coordsynth.entity.Action import Action


class Process(BaseModel):
    """
    Flat CSP process: a finite labeled transition system.

    `public` is Σ and `private` is Γ; transitions are (source, action id, target)
    triples over state indices. A state with no outgoing transition is STOP.
    """
    name: str = "P"
    states: tuple[str, ...]
    initial: int = 0
    public: tuple[Action, ...] = ()
    private: tuple[Action, ...] = ()
    transitions: tuple[tuple[int, int, int], ...] = ()

    _succ: dict = PrivateAttr(default_factory=dict)
    _out: dict = PrivateAttr(default_factory=dict)

    @field_validator("transitions")
    @classmethod
    def _normalize_transitions(cls, value):
        return tuple(sorted(set(tuple(t) for t in value)))

    @model_validator(mode="after")
    def _check_structure(self):
        public_ids = {a.id for a in self.public}
        private_ids = {a.id for a in self.private}
        if public_ids & private_ids:
            raise ValueError(f"public and private alphabets overlap: {sorted(public_ids & private_ids)}")
        if not 0 <= self.initial < len(self.states):
            raise ValueError(f"initial state {self.initial} out of range")
        for source, action, target in self.transitions:
            if action not in public_ids and action not in private_ids:
                raise ValueError(f"transition action {action} not in the process alphabet")
            if not (0 <= source < len(self.states) and 0 <= target < len(self.states)):
                raise ValueError(f"transition ({source}, {action}, {target}) has an invalid endpoint")
        return self

    def model_post_init(self, __context) -> None:
        for source, action, target in self.transitions:
            self._succ.setdefault((source, action), []).append(target)
            self._out.setdefault(source, []).append((action, target))

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    @property
    def public_ids(self) -> frozenset[int]:
        return frozenset(a.id for a in self.public)

    @property
    def private_ids(self) -> frozenset[int]:
        return frozenset(a.id for a in self.private)

    @property
    def alphabet(self) -> tuple[Action, ...]:
        return tuple(sorted(self.public + self.private, key=lambda a: a.id))

    def successors(self, state: int, action: int) -> tuple[int, ...]:
        return tuple(self._succ.get((state, action), ()))

    def outgoing(self, state: int) -> tuple[tuple[int, int], ...]:
        """(action, target) pairs leaving `state`."""
        return tuple(self._out.get(state, ()))

    def state_index(self, name: str) -> Optional[int]:
        return self.states.index(name) if name in self.states else None

    def action_name(self, action_id: int) -> str:
        for action in self.public + self.private:
            if action.id == action_id:
                return action.name
        raise KeyError(action_id)
