"""
One structure for NBA, UCW and finite NFA.

Letters are hashable. Action automata (A_S, A_L) use global action ids.
Specification automata use composite letters `(a, L)` or `(a, L, g)` where
`L` is a Σ-bitset (bit m stands for `public[m]`); symbolic builds replace
the bitset by a guard `Bdd` over `letter_vars`, one variable per Σ position.
Explicit builds over wide Σ use `MaskCube` guards instead, one per class of
bitsets the construction cannot tell apart.
"""

from typing import Any, Hashable, Optional

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

from coordsynth.bdd.manager import Bdd
from coordsynth.utils.constants import AutomatonKind
from coordsynth.utils.errors import CoordSynthError


class AutomatonError(CoordSynthError):
    """Structurally invalid automaton."""
    pass


class MaskCube(BaseModel):
    """The Σ bitsets whose bits in `care` equal those of `value`."""
    model_config = ConfigDict(frozen=True)

    care: int
    value: int

    def contains(self, mask: int) -> bool:
        return mask & self.care == self.value

    def assignment(self) -> dict[int, bool]:
        return {
            m: bool((self.value >> m) & 1)
            for m in range(self.care.bit_length())
            if (self.care >> m) & 1
        }


def is_guard(part: Any) -> bool:
    return isinstance(part, (Bdd, MaskCube))


class Automaton(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: AutomatonKind
    n_states: int
    initial: tuple[int, ...] = ()
    green: frozenset[int] = frozenset()
    transitions: tuple[tuple[int, Any, int], ...] = ()
    alphabet: Optional[tuple[int, ...]] = None
    public: Optional[tuple[int, ...]] = None
    letter_vars: Optional[tuple[str, ...]] = None
    state_names: Optional[tuple[str, ...]] = None

    _out: dict = PrivateAttr(default_factory=dict)
    _by_letter: dict = PrivateAttr(default_factory=dict)
    _guarded: bool = PrivateAttr(default=False)

    @field_validator("transitions")
    @classmethod
    def _dedupe(cls, value):
        seen: dict = {}
        for t in value:
            seen.setdefault(tuple(t), None)
        return tuple(seen)

    @model_validator(mode="after")
    def _check_structure(self):
        for s in self.initial:
            if not 0 <= s < self.n_states:
                raise AutomatonError(f"initial state {s} out of range")
        for s in self.green:
            if not 0 <= s < self.n_states:
                raise AutomatonError(f"green state {s} out of range")
        letters = set(self.alphabet) if self.alphabet is not None else None
        for source, letter, target in self.transitions:
            if not (0 <= source < self.n_states and 0 <= target < self.n_states):
                raise AutomatonError(f"transition ({source}, {letter!r}, {target}) has an invalid endpoint")
            if letters is not None and letter not in letters:
                raise AutomatonError(f"letter {letter!r} not in the alphabet")
        return self

    def model_post_init(self, __context) -> None:
        for source, label, target in self.transitions:
            self._out.setdefault(source, []).append((label, target))
            self._by_letter.setdefault((source, label), []).append(target)
            if isinstance(label, tuple) and any(is_guard(part) for part in label):
                self._guarded = True

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def is_guarded(self) -> bool:
        return self._guarded

    def outgoing(self, state: int) -> tuple[tuple[Hashable, int], ...]:
        return tuple(self._out.get(state, ()))

    def step(self, state: int, letter: Hashable) -> tuple[int, ...]:
        """Successors of `state` on a concrete letter."""
        if not self._guarded:
            return tuple(self._by_letter.get((state, letter), ()))
        return tuple(t for label, t in self._out.get(state, ()) if self.admits(label, letter))

    def admits(self, label: Hashable, letter: Hashable) -> bool:
        """Whether a transition label matches a concrete letter (guards evaluated on the bitset)."""
        if not isinstance(label, tuple):
            return label == letter
        if not isinstance(letter, tuple) or len(label) != len(letter):
            return False
        for part, value in zip(label, letter):
            if isinstance(part, MaskCube):
                if not part.contains(value):
                    return False
            elif isinstance(part, Bdd):
                if not part.evaluate(self.mask_assignment(value)):
                    return False
            elif part != value:
                return False
        return True

    def mask_assignment(self, mask: int) -> dict[str, bool]:
        if self.letter_vars is None:
            raise AutomatonError("guarded labels need letter_vars")
        return {name: bool((mask >> m) & 1) for m, name in enumerate(self.letter_vars)}

    def state_name(self, state: int) -> str:
        return self.state_names[state] if self.state_names else str(state)

    def with_kind(self, kind: AutomatonKind) -> "Automaton":
        return self.rebuild(kind=kind)

    def rebuild(self, **changes) -> "Automaton":
        """Fresh automaton with some fields replaced (indexes are rebuilt)."""
        fields = {name: getattr(self, name) for name in type(self).model_fields}
        fields.update(changes)
        return Automaton(**fields)
