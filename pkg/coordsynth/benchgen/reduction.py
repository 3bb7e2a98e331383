"""
Instances of the hardness reduction from NFA non-universality.

The environment copies a complete NFA A and adds `sharp` edges to an accept
state (self-loop on `plus`) from accepting states and to a reject state
(self-loop on `minus`) from the others. With φ_L = F(sharp & X G minus) and
no finite maximal computation allowed, the instance is realizable iff A
rejects some word.
"""

import random
from typing import Optional

from coordsynth.automata.automaton import Automaton
from coordsynth.benchgen.examples import BenchmarkError
from coordsynth.csp.parser import parse_model
from coordsynth.entity.Network import Network
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.utils.constants import AutomatonKind

DEFAULT_LETTERS = ("a", "b")
PSPACE_LIVENESS = "F(sharp & X G minus)"


def random_complete_nfa(n_states: int, n_letters: int = 2, rng: Optional[random.Random] = None) -> Automaton:
    """Random NFA with initial state 0 and a non-empty successor set on every (state, letter)."""
    if n_states < 1 or n_letters < 1:
        raise BenchmarkError("random NFA needs at least one state and one letter")
    rng = rng or random.Random(0)
    transitions = []
    for s in range(n_states):
        for letter in range(n_letters):
            targets = [t for t in range(n_states) if rng.random() < 0.5] or [rng.randrange(n_states)]
            transitions.extend((s, letter, t) for t in targets)
    green = frozenset(s for s in range(n_states) if rng.random() < 0.5)
    return Automaton(
        kind=AutomatonKind.NFA,
        n_states=n_states,
        initial=(0,),
        green=green,
        transitions=tuple(transitions),
        alphabet=tuple(range(n_letters)),
    )


def _check_complete(nfa: Automaton, letters: tuple[int, ...]) -> None:
    if not nfa.initial:
        raise BenchmarkError("NFA has no initial state")
    for s in range(nfa.n_states):
        for letter in letters:
            if not nfa.step(s, letter):
                raise BenchmarkError(f"NFA is not complete: state {s} has no transition on letter {letter}")


def pspace_instance_text(nfa: Automaton, letter_names: tuple[str, ...] = DEFAULT_LETTERS) -> str:
    """
    Model text of the reduction instance for `nfa`, whose letters index `letter_names`.

    A fresh `Start` state merges the initial states so that E has one.

    Raises:
        BenchmarkError: If the NFA is not complete
    """
    letters = nfa.alphabet if nfa.alphabet is not None else tuple(range(len(letter_names)))
    if len(letters) > len(letter_names):
        raise BenchmarkError(f"{len(letters)} letters but only {len(letter_names)} names")
    _check_complete(nfa, letters)

    def branches(sources) -> list[str]:
        result = []
        for s in sources:
            for letter in letters:
                result.extend(f"{letter_names[letter]} -> A{t}" for t in nfa.step(s, letter))
            result.append("sharp -> Acc" if s in nfa.green else "sharp -> Rej")
        return list(dict.fromkeys(result))

    lines = [
        "# NFA non-universality reduction",
        f"public {', '.join(letter_names[a] for a in letters)}, sharp, plus, minus;",
        f"process Start = {' | '.join(branches(nfa.initial))};",
    ]
    for s in range(nfa.n_states):
        lines.append(f"process A{s} = {' | '.join(branches([s]))};")
    lines += [
        "process Acc = plus -> Acc;",
        "process Rej = minus -> Rej;",
        "system Start;",
        "safety_complement universal;",
        f'liveness "{PSPACE_LIVENESS}";',
    ]
    return "\n".join(lines) + "\n"


def pspace_instance(nfa: Automaton, letter_names: tuple[str, ...] = DEFAULT_LETTERS) -> tuple[Network, SpecPair]:
    return parse_model(pspace_instance_text(nfa, letter_names))
