"""
Model checking of E ||_Σ M against a specification pair.

Safety walks the product of E, M and the subset construction of the safety
complement, looking for a deadlocked product state whose trace the
complement accepts. Liveness walks the product of E, M and a Buchi automaton
for the negated liveness formula, looking for a reachable green cycle that is
fair: it takes an E-M synchronization, or no synchronization is enabled
anywhere along it.

Nothing here touches the specification automaton or the SAT encoding.
"""

import logging
from collections import deque
from typing import Optional

import networkx as nx

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import nontrivial
from coordsynth.coordinator.machines import CoordinatorError
from coordsynth.csp.compose import enabled_public, is_deterministic
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.entity.Trace import Trace
from coordsynth.entity.Verdict import Verdict
from coordsynth.ltl.formula import negate
from coordsynth.ltl.tableau import to_nba
from coordsynth.utils.constants import VerdictKind

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


class Checker:
    """
    Product exploration for one (E, M, spec) triple.

    Args:
        env: Flattened environment E
        coordinator: Deterministic, internal-action-free M over Σ_E
        spec: Specification pair
    """

    def __init__(self, env: Process, coordinator: Process, spec: SpecPair):
        if coordinator.private:
            raise CoordinatorError(f"{coordinator.name} has private actions")
        if not is_deterministic(coordinator):
            raise CoordinatorError(f"{coordinator.name} is nondeterministic")
        stray = coordinator.public_ids - env.public_ids
        if stray:
            raise CoordinatorError(f"{coordinator.name} uses actions outside Σ: {sorted(stray)}")
        self.env = env
        self.coordinator = coordinator
        self.spec = spec
        self.private = env.private_ids
        self.letters = tuple(a.id for a in env.alphabet)
        self._roots: list = []

    # ------------------------------------------------------------------
    # E ||_Σ M
    # ------------------------------------------------------------------

    def moves(self, pair: Pair) -> list[tuple[int, Pair]]:
        """(action, successor) pairs of the composition at `pair`."""
        e, s = pair
        result = []
        for action, e2 in self.env.outgoing(e):
            if action in self.private:
                result.append((action, (e2, s)))
            else:
                for s2 in self.coordinator.successors(s, action):
                    result.append((action, (e2, s2)))
        return result

    def sync_enabled(self, pair: Pair) -> bool:
        e, s = pair
        return bool(enabled_public(self.env, e) & enabled_public(self.coordinator, s))

    def is_sync(self, action: int) -> bool:
        return action not in self.private

    @property
    def start(self) -> Pair:
        return self.env.initial, self.coordinator.initial

    # ------------------------------------------------------------------
    # Safety
    # ------------------------------------------------------------------

    def check_safety(self) -> Optional[Trace]:
        """Shortest trace of a maximal finite computation accepted by the safety complement."""
        nfa = self.spec.safety_complement
        start = (self.start, frozenset(nfa.initial))
        parent: dict = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            pair, subset = node
            moves = self.moves(pair)
            if not moves and subset & nfa.green:
                return Trace(prefix=_unwind(parent, node))
            for action, following in moves:
                successor = (following, frozenset(t for r in subset for t in nfa.step(r, action)))
                if successor not in parent:
                    parent[successor] = (node, action)
                    queue.append(successor)
        return None

    # ------------------------------------------------------------------
    # Liveness
    # ------------------------------------------------------------------

    def liveness_graph(self, nba: Automaton) -> nx.DiGraph:
        """Reachable ((e, s), q) nodes; edge attribute `actions` lists the labels."""
        graph = nx.DiGraph()
        stack = [(self.start, q) for q in nba.initial]
        graph.add_nodes_from(stack)
        while stack:
            node = stack.pop()
            pair, q = node
            for action, following in self.moves(pair):
                for q2 in nba.step(q, action):
                    successor = (following, q2)
                    if successor not in graph:
                        stack.append(successor)
                    if graph.has_edge(node, successor):
                        graph.edges[node, successor]["actions"].add(action)
                    else:
                        graph.add_edge(node, successor, actions={action})
        return graph

    def check_liveness(self) -> Optional[Trace]:
        nba = to_nba(negate(self.spec.liveness), self.letters)
        graph = self.liveness_graph(nba)
        self._roots = [(self.start, q) for q in nba.initial]
        for component in nx.strongly_connected_components(graph):
            if not nontrivial(graph, component):
                continue
            greens = [node for node in component if node[1] in nba.green]
            if not greens:
                continue
            sub = graph.subgraph(component)
            sync_edge = next(
                ((u, v) for u, v, data in sub.edges(data=True) if any(self.is_sync(a) for a in data["actions"])),
                None,
            )
            if sync_edge is not None:
                return self._lasso(graph, sub, greens[0], sync_edge)
            quiet = graph.subgraph(node for node in component if not self.sync_enabled(node[0]))
            for inner in nx.strongly_connected_components(quiet):
                if not nontrivial(quiet, inner):
                    continue
                inner_greens = [node for node in inner if node[1] in nba.green]
                if inner_greens:
                    return self._lasso(graph, quiet.subgraph(inner), inner_greens[0], None)
        return None

    def _lasso(self, graph: nx.DiGraph, cycle_graph: nx.DiGraph, anchor, through) -> Trace:
        """Prefix from the start to `anchor`, then a cycle back to it (via edge `through` when set)."""
        sources = [node for node in self._roots if nx.has_path(graph, node, anchor)]
        prefix_nodes = nx.shortest_path(graph, sources[0], anchor)
        prefix = self._label(graph, prefix_nodes, sync_on=None)
        if through is None:
            cycle = _shortest_cycle(cycle_graph, anchor)
            loop = self._label(cycle_graph, cycle, sync_on=None)
        else:
            u, v = through
            head = nx.shortest_path(cycle_graph, anchor, u)
            tail = nx.shortest_path(cycle_graph, v, anchor)
            loop = self._label(cycle_graph, head + tail, sync_on=(u, v))
        return Trace(prefix=tuple(prefix), loop=tuple(loop))

    def _label(self, graph: nx.DiGraph, nodes: list, sync_on) -> list[int]:
        actions = []
        for u, v in zip(nodes, nodes[1:]):
            choices = sorted(graph.edges[u, v]["actions"])
            if (u, v) == sync_on:
                choices = [a for a in choices if self.is_sync(a)]
            actions.append(choices[0])
        return actions


def _unwind(parent: dict, node) -> tuple[int, ...]:
    actions = []
    while parent[node] is not None:
        node, action = parent[node]
        actions.append(action)
    return tuple(reversed(actions))


def _shortest_cycle(graph: nx.DiGraph, anchor) -> list:
    if graph.has_edge(anchor, anchor):
        return [anchor, anchor]
    best = None
    for successor in graph.successors(anchor):
        path = nx.shortest_path(graph, successor, anchor)
        if best is None or len(path) < len(best):
            best = path
    return [anchor] + best


def check(env: Process, coordinator: Process, spec: SpecPair) -> Verdict:
    """
    Verdict of E ||_Σ M against (φ_S, φ_L).

    Args:
        env: Flattened environment
        coordinator: Deterministic coordinator without private actions
        spec: Specification pair

    Returns:
        pass, or a failing verdict with a finite (safety) or lasso (liveness) witness

    Raises:
        CoordinatorError: If the coordinator breaks the Γ_M = ∅, determinism or Σ preconditions
    """
    checker = Checker(env, coordinator, spec)
    witness = checker.check_safety()
    if witness is not None:
        logger.info(f"[VERIFY] deadlock-safety violation after {len(witness.prefix)} actions")
        return Verdict(kind=VerdictKind.DEADLOCK_SAFETY, witness=witness,
                       detail="maximal finite computation violates φ_S")
    witness = checker.check_liveness()
    if witness is not None:
        logger.info("[VERIFY] fair-liveness violation")
        return Verdict(kind=VerdictKind.FAIR_LIVENESS, witness=witness,
                       detail="fair infinite computation violates φ_L")
    logger.info("[VERIFY] pass")
    return Verdict()
