"""Fulltree prefixes of deterministic coordinators and their process readings."""

import logging
from itertools import product
from typing import Optional

from coordsynth.coordinator.machines import CoordinatorError
from coordsynth.csp.compose import enabled_public, is_deterministic
from coordsynth.entity.Action import Action
from coordsynth.entity.LabeledTreePrefix import LabeledTreePrefix
from coordsynth.entity.Process import Process
from coordsynth.utils.constants import ScaleCaps
from coordsynth.utils.errors import ScaleCapError

logger = logging.getLogger(__name__)


def fulltree_prefix(m: Process, depth: int) -> LabeledTreePrefix:
    """
    Label every node w of the full Σ-tree up to `depth` with the actions m offers after w.

    Nodes that m cannot reach are labeled ∅. The machine state at each
    reachable node is recorded for lasso closing.

    Raises:
        CoordinatorError: If m is nondeterministic or has private actions
        ScaleCapError: Beyond the oracle depth cap
    """
    if m.private:
        raise CoordinatorError(f"{m.name} has private actions")
    if not is_deterministic(m):
        raise CoordinatorError(f"{m.name} is nondeterministic")
    if depth > ScaleCaps.ORACLE_MAX_DEPTH:
        raise ScaleCapError("fulltree depth", depth, ScaleCaps.ORACLE_MAX_DEPTH)

    sigma = tuple(a.id for a in m.public)
    labels: dict[tuple[int, ...], frozenset[int]] = {}
    states: dict[tuple[int, ...], int] = {(): m.initial}
    for length in range(depth + 1):
        for node in product(sigma, repeat=length):
            if node and node[:-1] in states:
                targets = m.successors(states[node[:-1]], node[-1])
                if targets:
                    states[node] = targets[0]
            labels[node] = enabled_public(m, states[node]) if node in states else frozenset()
    return LabeledTreePrefix(alphabet=sigma, depth=depth, labels=labels, machine_states=states)


def proc_of_tree(t: LabeledTreePrefix, actions: Optional[tuple[Action, ...]] = None) -> Process:
    """
    Tree-shaped process reading a labeled prefix.

    One state per node reachable from the root through labels; a node offers
    exactly its label, and at depth `t.depth` the offered actions stop the
    process. Frontier states carry a trailing `!` in their names.
    """
    if actions is None:
        actions = tuple(Action(id=a, name=f"a{a}") for a in t.alphabet)
    index: dict[tuple[int, ...], int] = {(): 0}
    order = [()]
    transitions = []
    frontier = 0
    while frontier < len(order):
        node = order[frontier]
        frontier += 1
        if len(node) == t.depth:
            continue
        for action in sorted(t.label(node)):
            child = node + (action,)
            index[child] = len(order)
            order.append(child)
            transitions.append((index[node], action, index[child]))

    def name(node: tuple[int, ...]) -> str:
        suffix = "!" if len(node) == t.depth else ""
        return "T" + "".join(f"_{a}" for a in node) + suffix

    logger.debug(f"[CSP] tree process with {len(order)} states from a depth-{t.depth} prefix")
    return Process(
        name="T",
        states=tuple(name(node) for node in order),
        initial=0,
        public=tuple(a for a in actions if a.id in t.alphabet),
        private=(),
        transitions=tuple(transitions),
    )
