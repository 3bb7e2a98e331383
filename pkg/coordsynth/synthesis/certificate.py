"""Independent re-check of an extracted machine against the specification UCW."""

import logging

import networkx as nx

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import nontrivial
from coordsynth.entity.MooreMachine import MooreMachine
from coordsynth.spec_automaton.oracle import run_graph
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class CertificateError(CoordSynthError):
    """The run graph of UCW × machine admits unboundedly many green visits."""
    pass


def recheck_certificate(ucw: Automaton, machine: MooreMachine) -> int:
    """
    Largest number of green visits on any run-graph path.

    Walks the product of the UCW with the machine's fulltree, ignoring the SAT
    model entirely. Nontrivial components must be green-free; the answer is
    the longest green-weighted path through the condensation.

    Raises:
        CertificateError: If a green cycle is reachable, or the count exceeds |Q|·N
    """
    graph = run_graph(ucw, machine)
    condensed = nx.condensation(graph)
    weight = {}
    for c, data in condensed.nodes(data=True):
        members = data["members"]
        greens = sum(1 for q, _ in members if q in ucw.green)
        if greens and nontrivial(graph, members):
            q, s = next(node for node in members if node[0] in ucw.green)
            raise CertificateError(f"green cycle through UCW state {q} at machine state {s}")
        weight[c] = greens

    longest = {}
    for c in reversed(list(nx.topological_sort(condensed))):
        tail = max((longest[d] for d in condensed.successors(c)), default=0)
        longest[c] = weight[c] + tail
    count = max(longest.values(), default=0)

    limit = ucw.n_states * machine.n_states
    if count > limit:
        raise CertificateError(f"{count} green visits exceed |Q|·N = {limit}")
    logger.debug(f"[SYNTH] certificate re-check: at most {count} green visits (limit {limit})")
    return count
