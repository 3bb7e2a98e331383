"""
Brute-force violation search over a labeled tree prefix, and run-graph
acceptance of a coordinator's fulltree by the specification UCW.

The search works directly on the environment, the safety NFA and the LTL
formula (through lasso evaluation), so it shares no code with the fixpoint
construction it is used to test. It only closes lassos that its bounded
unrolling can see: private loops are simple cycles, and infinite consistent
paths are closed where the tree's generating machine and E both repeat.
"""

import logging
from typing import Optional

import networkx as nx
from pydantic import BaseModel

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import nfa_runs_word, nontrivial
from coordsynth.csp.compose import enabled_public
from coordsynth.entity.LabeledTreePrefix import LabeledTreePrefix
from coordsynth.entity.MooreMachine import MooreMachine
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.entity.Trace import Trace
from coordsynth.ltl.semantics import eval_lasso
from coordsynth.utils.constants import ScaleCaps, WitnessKind
from coordsynth.utils.errors import ScaleCapError

logger = logging.getLogger(__name__)


class ViolationWitness(BaseModel):
    kind: WitnessKind
    node: tuple[int, ...]
    trace: Trace


# ============================================================================
# Violation conditions on a tree prefix
# ============================================================================

class _TreeSearch:

    def __init__(self, env: Process, spec: SpecPair, tree: LabeledTreePrefix, depth: int):
        self.env = env
        self.spec = spec
        self.tree = tree
        self.depth = depth
        self.private = env.private_ids

    def run(self) -> Optional[ViolationWitness]:
        history = []
        if self.tree.machine_states is not None:
            history.append(((self.tree.machine_states[()], self.env.initial), 0))
        return self._visit((), self.env.initial, (), history, frozenset([self.env.initial]))

    def _visit(self, node, e, trace, history, segment) -> Optional[ViolationWitness]:
        """
        Explore E from state e sitting at tree node `node`.

        `history` lists (machine state, e) keys with the trace length at each
        public arrival, for closing consistent lassos; `segment` holds the
        E-states of the current private run, which stays simple.
        """
        offered = self.tree.label(node)
        for witness in (self._maximal(node, e, trace, offered), self._unfair_suffix(node, e, trace, offered)):
            if witness is not None:
                return witness
        for action, t in self.env.outgoing(e):
            if action in self.private:
                if t in segment:
                    continue
                found = self._visit(node, t, trace + (action,), history, segment | {t})
            elif action in offered and len(node) < self.depth:
                found = self._public_step(node + (action,), t, trace + (action,), history)
            else:
                continue
            if found is not None:
                return found
        return None

    def _maximal(self, node, e, trace, offered) -> Optional[ViolationWitness]:
        has_private = any(a in self.private for a, _ in self.env.outgoing(e))
        if has_private or enabled_public(self.env, e) & offered:
            return None
        if nfa_runs_word(self.spec.safety_complement, trace):
            return ViolationWitness(kind=WitnessKind.MAXIMAL, node=node, trace=Trace(prefix=trace))
        return None

    def _unfair_suffix(self, node, e, trace, offered) -> Optional[ViolationWitness]:
        """Private simple-cycle lassos whose loop never enables an offered action."""
        path = [e]
        actions: list[int] = []

        def walk(s) -> Optional[ViolationWitness]:
            for action, t in self.env.outgoing(s):
                if action not in self.private:
                    continue
                if t in path:
                    i = path.index(t)
                    if not any(enabled_public(self.env, u) & offered for u in path[i:]):
                        word = Trace(prefix=trace + tuple(actions[:i]), loop=tuple(actions[i:]) + (action,))
                        if not eval_lasso(self.spec.liveness, word):
                            return ViolationWitness(kind=WitnessKind.UNFAIR_SUFFIX, node=node, trace=word)
                    continue
                path.append(t)
                actions.append(action)
                found = walk(t)
                path.pop()
                actions.pop()
                if found is not None:
                    return found
            return None

        return walk(e)

    def _public_step(self, node, e, trace, history) -> Optional[ViolationWitness]:
        states = self.tree.machine_states
        if states is not None and node in states:
            key = (states[node], e)
            for past_key, start in history:
                if past_key == key:
                    word = Trace(prefix=trace[:start], loop=trace[start:])
                    if not eval_lasso(self.spec.liveness, word):
                        return ViolationWitness(kind=WitnessKind.INFINITE_PATH, node=node, trace=word)
            history = history + [(key, len(trace))]
        return self._visit(node, e, trace, history, frozenset([e]))


def check_violation_conditions(env: Process, spec: SpecPair, tree: LabeledTreePrefix,
                               depth: Optional[int] = None) -> Optional[ViolationWitness]:
    """
    Search a tree prefix for a computation meeting a violation condition.

    (A) a maximal finite computation whose trace the safety NFA accepts;
    (B) a private-only suffix, never enabling an offered action, violating φ_L;
    (C) an infinite consistent path violating φ_L.

    Args:
        env: Flattened environment
        spec: Specification pair
        tree: Labeled tree prefix (machine_states enables condition C)
        depth: Public steps to unroll; defaults to the tree depth

    Returns:
        The first witness found, or None

    Raises:
        ScaleCapError: Beyond oracle depth or alphabet limits
    """
    depth = tree.depth if depth is None else min(depth, tree.depth)
    if depth > ScaleCaps.ORACLE_MAX_DEPTH:
        raise ScaleCapError("oracle depth", depth, ScaleCaps.ORACLE_MAX_DEPTH)
    if len(tree.alphabet) > ScaleCaps.ORACLE_MAX_PUBLIC:
        raise ScaleCapError("oracle public actions", len(tree.alphabet), ScaleCaps.ORACLE_MAX_PUBLIC)
    witness = _TreeSearch(env, spec, tree, depth).run()
    if witness is not None:
        logger.debug(f"[SPEC] oracle witness {witness.kind.value} at node {witness.node}")
    return witness


# ============================================================================
# Fulltree acceptance
# ============================================================================

def output_mask(ucw: Automaton, offered: frozenset[int]) -> int:
    return sum(1 << m for m, a in enumerate(ucw.public or ()) if a in offered)


def run_graph(ucw: Automaton, machine: MooreMachine) -> nx.DiGraph:
    """Reachable (UCW state, machine state) pairs under every input action."""
    graph = nx.DiGraph()
    start = [(q, 0) for q in ucw.initial]
    graph.add_nodes_from(start)
    stack = list(start)
    while stack:
        q, s = node = stack.pop()
        mask = output_mask(ucw, machine.outputs[s])
        for m, action in enumerate(machine.alphabet):
            s2 = machine.transitions[s][m]
            for q2 in ucw.step(q, (action.id, mask)):
                following = (q2, s2)
                if following not in graph:
                    stack.append(following)
                graph.add_edge(node, following)
    return graph


def fulltree_ucw_accepts(ucw: Automaton, machine: MooreMachine) -> bool:
    """The UCW accepts the machine's fulltree iff no reachable run-graph cycle visits green."""
    graph = run_graph(ucw, machine)
    for component in nx.strongly_connected_components(graph):
        if any(q in ucw.green for q, _ in component) and nontrivial(graph, component):
            return False
    return True
