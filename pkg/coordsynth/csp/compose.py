"""
Parallel composition and simple semantic queries on flat processes.
"""

import logging
from collections import deque
from typing import Iterable, Union

from coordsynth.entity.Action import Action
from coordsynth.entity.Network import Network
from coordsynth.entity.Process import Process
from coordsynth.entity.Trace import Trace
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class CompositionError(CoordSynthError):
    """Sync set is not a subset of the operands' common public actions."""
    pass


# ============================================================================
# Composition
# ============================================================================

def compose_pair(p: Process, q: Process, x: Iterable[int]) -> Process:
    """
    P ||_X Q restricted to states reachable from (ι_P, ι_Q).

    Actions in X move both operands together and become private; every other
    action moves one operand alone.

    Raises:
        CompositionError: If X is not within Σ_P ∩ Σ_Q, or a private action of
            one operand is public in the other
    """
    x = frozenset(x)
    common = p.public_ids & q.public_ids
    if not x <= common:
        bad = sorted(x - common)
        raise CompositionError(f"sync actions {bad} are not public in both {p.name} and {q.name}")
    clash = (p.private_ids & q.public_ids) | (q.private_ids & p.public_ids)
    if clash:
        raise CompositionError(f"actions {sorted(clash)} are private in one operand and public in the other")

    index: dict[tuple[int, int], int] = {(p.initial, q.initial): 0}
    queue = deque([(p.initial, q.initial)])
    transitions = []

    def visit(source: tuple[int, int], action: int, target: tuple[int, int]) -> None:
        if target not in index:
            index[target] = len(index)
            queue.append(target)
        transitions.append((index[source], action, index[target]))

    while queue:
        s, t = pair = queue.popleft()
        for action, s2 in p.outgoing(s):
            if action in x:
                for t2 in q.successors(t, action):
                    visit(pair, action, (s2, t2))
            else:
                visit(pair, action, (s2, t))
        for action, t2 in q.outgoing(t):
            if action not in x:
                visit(pair, action, (s, t2))

    by_id: dict[int, Action] = {a.id: a for a in p.alphabet + q.alphabet}
    public = sorted((p.public_ids | q.public_ids) - x)
    private = sorted(p.private_ids | q.private_ids | x)
    states = [""] * len(index)
    for (s, t), i in index.items():
        states[i] = f"({p.states[s]},{q.states[t]})"
    composed = Process(
        name=f"{p.name}||{q.name}",
        states=tuple(states),
        initial=0,
        public=tuple(by_id[a] for a in public),
        private=tuple(by_id[a] for a in private),
        transitions=tuple(transitions),
    )
    logger.debug(f"[CSP] {p.name} ||{sorted(x)} {q.name}: {len(states)} reachable states")
    return composed


def flatten_network(n: Network) -> Process:
    """Left fold of compose_pair over the agents; a None sync set means all common public actions."""
    result = n.agents[0]
    for agent, sync in zip(n.agents[1:], n.sync_sets):
        x = sync if sync is not None else result.public_ids & agent.public_ids
        result = compose_pair(result, agent, x)
    logger.info(f"[CSP] flattened {len(n.agents)} agents into {len(result.states)} states")
    return result


# ============================================================================
# Queries
# ============================================================================

def enabled_public(p: Process, s: int) -> frozenset[int]:
    """Public actions with an outgoing transition at s (no private closure)."""
    public = p.public_ids
    return frozenset(a for a, _ in p.outgoing(s) if a in public)


def simulate(p: Process, t: Union[Trace, Iterable[int]]) -> frozenset[int]:
    """All states reached from ι by executions whose trace is exactly t."""
    actions = t.prefix if isinstance(t, Trace) else tuple(t)
    current = {p.initial}
    for action in actions:
        current = {target for s in current for target in p.successors(s, action)}
        if not current:
            break
    return frozenset(current)


def is_deterministic(p: Process) -> bool:
    for s in range(len(p.states)):
        seen = set()
        for action, _ in p.outgoing(s):
            if action in seen:
                return False
            seen.add(action)
    return True


def bisimilar_up_to(p: Process, q: Process, depth: int) -> bool:
    """
    Depth-bounded strong bisimilarity of the initial states.

    Partition refinement over the disjoint union, stopped after `depth`
    rounds; actions are compared by global id.
    """
    offset = len(p.states)
    edges: dict[int, list[tuple[int, int]]] = {}
    for s in range(len(p.states)):
        edges[s] = list(p.outgoing(s))
    for s in range(len(q.states)):
        edges[offset + s] = [(a, offset + t) for a, t in q.outgoing(s)]
    block = {s: 0 for s in edges}
    for _ in range(depth):
        signatures: dict[tuple, int] = {}
        refined = {}
        for s in edges:
            signature = (block[s], frozenset((a, block[t]) for a, t in edges[s]))
            refined[s] = signatures.setdefault(signature, len(signatures))
        if len(signatures) == len(set(block.values())):
            block = refined
            break
        block = refined
    return block[p.initial] == block[offset + q.initial]


