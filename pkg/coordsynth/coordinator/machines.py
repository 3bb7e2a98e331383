"""
Moore machines and coordinator processes, in both directions, plus the
normalization steps that turn an arbitrary candidate coordinator into a
deterministic, internal-action-free one.
"""

import logging
from collections import deque

from coordsynth.csp.compose import enabled_public, is_deterministic
from coordsynth.entity.Action import Action
from coordsynth.entity.MooreMachine import MooreMachine
from coordsynth.entity.Process import Process
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class CoordinatorError(CoordSynthError):
    """Candidate coordinator has the wrong shape (private actions, nondeterminism)."""
    pass


def _machine_state_names(n: int, prefix: str) -> tuple[str, ...]:
    return tuple(prefix if s == 0 else f"{prefix}{s}" for s in range(n))


# ============================================================================
# Conversions
# ============================================================================

def moore_to_csp(m: MooreMachine, name: str = "M") -> Process:
    """
    Coordinator offering O(s) at each state s.

    A transition (s, a, t) exists iff a ∈ O(s) and T(s, a) = t, so the result
    is deterministic with Σ_M = Σ and Γ_M = ∅.
    """
    transitions = []
    for s in range(m.n_states):
        for position, action in enumerate(m.alphabet):
            if action.id in m.outputs[s]:
                transitions.append((s, action.id, m.transitions[s][position]))
    return Process(
        name=name,
        states=_machine_state_names(m.n_states, name),
        initial=0,
        public=m.alphabet,
        private=(),
        transitions=tuple(transitions),
    )


def csp_to_moore(p: Process, alphabet: tuple[Action, ...]) -> MooreMachine:
    """
    Total Moore machine of a deterministic, internal-action-free process.

    The initial state becomes state 0. Actions of Σ that p does not offer at
    a state lead to a fresh sink that offers nothing.

    Raises:
        CoordinatorError: If p has private actions or is nondeterministic
    """
    if p.private:
        raise CoordinatorError(f"{p.name} has private actions; apply hide_internal first")
    if not is_deterministic(p):
        raise CoordinatorError(f"{p.name} is nondeterministic; apply restrict_deterministic first")
    order = [p.initial] + [s for s in range(len(p.states)) if s != p.initial]
    index = {s: i for i, s in enumerate(order)}
    sink = len(order)
    ids = {a.id for a in alphabet}
    outputs: list[frozenset[int]] = []
    rows: list[tuple[int, ...]] = []
    needs_sink = False
    for s in order:
        outputs.append(frozenset(enabled_public(p, s) & ids))
        row = []
        for action in alphabet:
            targets = p.successors(s, action.id)
            if targets:
                row.append(index[targets[0]])
            else:
                row.append(sink)
                needs_sink = True
        rows.append(tuple(row))
    if needs_sink:
        outputs.append(frozenset())
        rows.append(tuple(sink for _ in alphabet))
    return MooreMachine(alphabet=alphabet, outputs=tuple(outputs), transitions=tuple(rows))


# ============================================================================
# Normalization
# ============================================================================

def _internal_closure(m: Process, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for action, v in m.outgoing(u):
            if action in m.private_ids and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def hide_internal(m: Process) -> Process:
    """Replace internal*·a·internal* paths by direct a-edges; Γ of the result is empty."""
    if not m.private:
        return m
    closures = [_internal_closure(m, s) for s in range(len(m.states))]
    transitions = set()
    for s in range(len(m.states)):
        for u in closures[s]:
            for action, v in m.outgoing(u):
                if action in m.private_ids:
                    continue
                transitions.update((s, action, t) for t in closures[v])
    logger.debug(f"[CSP] hid {len(m.private)} internal actions of {m.name}")
    return Process(
        name=m.name, states=m.states, initial=m.initial,
        public=m.public, private=(), transitions=tuple(transitions),
    )


def restrict_deterministic(m: Process) -> Process:
    """
    Keep, for each (state, action), only the smallest-index successor.

    Enabled sets are unchanged at every state.

    Raises:
        CoordinatorError: If m still has private actions
    """
    if m.private:
        raise CoordinatorError(f"{m.name} has private actions; apply hide_internal first")
    chosen: dict[tuple[int, int], int] = {}
    for s, action, t in m.transitions:
        key = (s, action)
        chosen[key] = min(t, chosen.get(key, t))
    transitions = tuple((s, action, t) for (s, action), t in chosen.items())
    return Process(
        name=m.name, states=m.states, initial=m.initial,
        public=m.public, private=(), transitions=transitions,
    )


def normalize_coordinator(m: Process) -> Process:
    """hide_internal followed by restrict_deterministic."""
    return restrict_deterministic(hide_internal(m))
