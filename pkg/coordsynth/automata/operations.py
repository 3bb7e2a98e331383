"""
Membership, pruning and structural transformations on automata.
"""

import logging
from collections import deque
from typing import Hashable, Iterable, Optional, Sequence, Union

import networkx as nx

from coordsynth.automata.automaton import Automaton, AutomatonError
from coordsynth.entity.Trace import Trace
from coordsynth.ltl.semantics import LassoError
from coordsynth.utils.constants import AutomatonKind

logger = logging.getLogger(__name__)

LassoWord = Union[Trace, tuple[Sequence[Hashable], Sequence[Hashable]]]


# ============================================================================
# Membership
# ============================================================================

def _split(w: LassoWord) -> tuple[tuple, tuple]:
    if isinstance(w, Trace):
        if not w.is_lasso:
            raise LassoError("a lasso word is required")
        return w.prefix, w.loop
    prefix, loop = w
    if not loop:
        raise LassoError("lasso loop must be non-empty")
    return tuple(prefix), tuple(loop)


def nontrivial(graph: nx.DiGraph, component: set) -> bool:
    """An SCC carries a cycle iff it has two nodes or a self-loop."""
    if len(component) > 1:
        return True
    node = next(iter(component))
    return graph.has_edge(node, node)


def nba_accepts_lasso(a: Automaton, w: LassoWord) -> bool:
    """
    Some run over the lasso visits a green state infinitely often.

    The lasso positions times automaton states form a finite graph; the word
    is accepted iff a reachable cycle of that graph passes a green state.
    """
    prefix, loop = _split(w)
    word = prefix + loop
    n = len(word)
    nxt = [i + 1 for i in range(n - 1)] + [len(prefix)]

    graph = nx.DiGraph()
    queue = deque((0, s) for s in a.initial)
    graph.add_nodes_from(queue)
    seen = set(queue)
    while queue:
        i, s = queue.popleft()
        for t in a.step(s, word[i]):
            node = (nxt[i], t)
            graph.add_edge((i, s), node)
            if node not in seen:
                seen.add(node)
                queue.append(node)
    for component in nx.strongly_connected_components(graph):
        if any(s in a.green for _, s in component) and nontrivial(graph, component):
            return True
    return False


def ucw_accepts_lasso(a: Automaton, w: LassoWord) -> bool:
    """Every run visits green only finitely often."""
    return not nba_accepts_lasso(a, w)


def nfa_runs_word(a: Automaton, word: Iterable[Hashable]) -> bool:
    """Finite-word membership by subset simulation."""
    current = set(a.initial)
    for letter in word:
        current = {t for s in current for t in a.step(s, letter)}
        if not current:
            return False
    return bool(current & a.green)


def nfa_shortest_rejected(a: Automaton, letters: Sequence[Hashable]) -> Optional[tuple]:
    """Shortest word (BFS over subsets) that `a` does not accept; None if universal."""
    start = frozenset(a.initial)
    parent: dict[frozenset, Optional[tuple[frozenset, Hashable]]] = {start: None}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        if not subset & a.green:
            word = []
            while parent[subset] is not None:
                subset, letter = parent[subset]
                word.append(letter)
            return tuple(reversed(word))
        for letter in letters:
            following = frozenset(t for s in subset for t in a.step(s, letter))
            if following not in parent:
                parent[following] = (subset, letter)
                queue.append(following)
    return None


def nfa_universal(a: Automaton, letters: Sequence[Hashable]) -> bool:
    return nfa_shortest_rejected(a, letters) is None


# ============================================================================
# Reinterpretation and pruning
# ============================================================================

def as_ucw(a: Automaton) -> Automaton:
    """Same structure read universally with co-Buchi acceptance (complement language)."""
    return a.with_kind(AutomatonKind.UCW)


def reachable_states(a: Automaton) -> set[int]:
    seen = set(a.initial)
    queue = deque(a.initial)
    while queue:
        s = queue.popleft()
        for _, t in a.outgoing(s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def restrict(a: Automaton, keep: set[int]) -> Automaton:
    """Sub-automaton on `keep`, renumbered densely in increasing original order."""
    order = sorted(keep)
    index = {s: i for i, s in enumerate(order)}
    return a.rebuild(
        n_states=len(order),
        initial=tuple(index[s] for s in a.initial if s in index),
        green=frozenset(index[s] for s in a.green if s in index),
        transitions=tuple(
            (index[s], label, index[t]) for s, label, t in a.transitions if s in index and t in index
        ),
        state_names=tuple(a.state_names[s] for s in order) if a.state_names else None,
    )


def _transition_graph(a: Automaton) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(a.n_states))
    graph.add_edges_from((s, t) for s, _, t in a.transitions)
    return graph


def prune(a: Automaton) -> Automaton:
    """
    Remove states that cannot matter.

    NBA: unreachable states and states with no path to a green cycle.
    NFA: unreachable states and states with no path to an accepting state.
    UCW: unreachable states only (dropping a rejecting sink would change the language).
    """
    keep = reachable_states(a)
    if a.kind != AutomatonKind.UCW:
        graph = _transition_graph(a).subgraph(keep)
        if a.kind == AutomatonKind.NBA:
            targets = set()
            for component in nx.strongly_connected_components(graph):
                if component & a.green and nontrivial(graph, component):
                    targets |= component
        else:
            targets = keep & set(a.green)
        alive = set(targets)
        for target in targets:
            alive |= nx.ancestors(graph, target)
        keep &= alive
    pruned = restrict(a, keep)
    logger.debug(f"[AUTOMATA] prune {a.kind.value}: {a.n_states} -> {pruned.n_states} states")
    return pruned


# ============================================================================
# Structural transformations
# ============================================================================

def complete(a: Automaton, letters: Sequence[Hashable]) -> Automaton:
    """Add a non-green sink so that every (state, letter) pair has a successor."""
    if a.is_guarded:
        raise AutomatonError("complete() needs concrete letters")
    missing = [(s, letter) for s in range(a.n_states) for letter in letters if not a.step(s, letter)]
    if not missing and a.initial:
        return a
    sink = a.n_states
    extra = [(s, letter, sink) for s, letter in missing]
    extra += [(sink, letter, sink) for letter in letters]
    return a.rebuild(
        n_states=a.n_states + 1,
        initial=a.initial or (sink,),
        transitions=a.transitions + tuple(extra),
        state_names=a.state_names + ("sink",) if a.state_names else None,
    )


def green_edges_to_states(a: Automaton) -> Automaton:
    """
    Turn green edges into green states.

    Every label ends with a green bit g. State s becomes (s, 0) = 2s and
    (s, 1) = 2s+1; a g-edge enters the flagged copy. Greens are the flagged
    copies plus both copies of originally green states. Labels lose their g.
    """
    transitions = []
    for s, label, t in a.transitions:
        plain, flagged = label[:-1], bool(label[-1])
        for f in (0, 1):
            transitions.append((2 * s + f, plain, 2 * t + int(flagged)))
    green = {2 * s + 1 for s in range(a.n_states)} | {2 * s + f for s in a.green for f in (0, 1)}
    names = None
    if a.state_names:
        names = tuple(f"{name}{'+' if f else ''}" for name in a.state_names for f in (0, 1))
    doubled = a.rebuild(
        n_states=2 * a.n_states,
        initial=tuple(2 * s for s in a.initial),
        green=frozenset(green),
        transitions=tuple(transitions),
        alphabet=None,
        state_names=names,
    )
    return restrict(doubled, reachable_states(doubled))


# ============================================================================
# Standard safety complements
# ============================================================================

def universal_nfa(letters: Sequence[Hashable]) -> Automaton:
    """Accepts every finite word: the complement of φ_S = ∅ (any maximal finite trace is a deadlock)."""
    return Automaton(
        kind=AutomatonKind.NFA, n_states=1, initial=(0,), green=frozenset({0}),
        transitions=tuple((0, letter, 0) for letter in letters), alphabet=tuple(letters),
    )


def empty_nfa(letters: Sequence[Hashable]) -> Automaton:
    """Accepts nothing: φ_S allows every maximal finite trace."""
    return Automaton(
        kind=AutomatonKind.NFA, n_states=1, initial=(0,), green=frozenset(),
        transitions=tuple((0, letter, 0) for letter in letters), alphabet=tuple(letters),
    )
