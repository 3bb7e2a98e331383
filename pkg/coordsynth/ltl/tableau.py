"""
LTL to Buchi translation by tableau expansion.

A tableau state is a set of NNF obligations. Expanding it yields terms: the
letter constraint for the current step, the obligations for the next step,
and the eventualities postponed by this step. Acceptance is generalized
(one set per eventuality, on transitions that do not postpone it) and is
degeneralized with a counter over eventualities in subterm order.
"""

import logging
from collections import deque
from typing import Iterator, NamedTuple

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import prune
from coordsynth.ltl.formula import (
    Always, And, Atom, Eventually, FalseF, Formula, Next, Not, Or, Release, TrueF, Until,
    is_nnf, nnf, subformulas,
)
from coordsynth.utils.constants import AutomatonKind

logger = logging.getLogger(__name__)


class _Term(NamedTuple):
    positive: frozenset[int]
    negative: frozenset[int]
    following: frozenset[Formula]
    postponed: frozenset[Formula]


def _expand(todo: tuple[Formula, ...], pos: frozenset, neg: frozenset,
            nxt: frozenset, post: frozenset) -> Iterator[_Term]:
    if not todo:
        yield _Term(pos, neg, nxt, post)
        return
    f, rest = todo[0], todo[1:]
    match f:
        case TrueF():
            yield from _expand(rest, pos, neg, nxt, post)
        case FalseF():
            return
        case Atom(action=a):
            if a in neg or (pos and a not in pos):
                return
            yield from _expand(rest, pos | {a}, neg, nxt, post)
        case Not(operand=Atom(action=a)):
            if a in pos:
                return
            yield from _expand(rest, pos, neg | {a}, nxt, post)
        case And(left=l, right=r):
            yield from _expand((l, r) + rest, pos, neg, nxt, post)
        case Or(left=l, right=r):
            yield from _expand((l,) + rest, pos, neg, nxt, post)
            yield from _expand((r,) + rest, pos, neg, nxt, post)
        case Next(operand=g):
            yield from _expand(rest, pos, neg, nxt | {g}, post)
        case Until(left=l, right=r):
            yield from _expand((r,) + rest, pos, neg, nxt, post)
            yield from _expand((l,) + rest, pos, neg, nxt | {f}, post | {f})
        case Eventually(operand=g):
            yield from _expand((g,) + rest, pos, neg, nxt, post)
            yield from _expand(rest, pos, neg, nxt | {f}, post | {f})
        case Release(left=l, right=r):
            yield from _expand((r, l) + rest, pos, neg, nxt, post)
            yield from _expand((r,) + rest, pos, neg, nxt | {f}, post)
        case Always(operand=g):
            yield from _expand((g,) + rest, pos, neg, nxt | {f}, post)
        case _:
            raise ValueError(f"formula not in negation normal form: {f!r}")


def _letters_of(term: _Term, letters: tuple[int, ...]) -> tuple[int, ...]:
    if term.positive:
        (a,) = term.positive
        return (a,) if a in letters else ()
    return tuple(a for a in letters if a not in term.negative)


def to_nba(f: Formula, letters: tuple[int, ...]) -> Automaton:
    """
    Translate an LTL formula into a Buchi automaton over single-action letters.

    Args:
        f: Formula; converted to NNF first when needed
        letters: Action ids forming the alphabet (one action per step)

    Returns:
        A pruned NBA with L(NBA) = L(f)
    """
    if not is_nnf(f):
        f = nnf(f)
    eventualities = [g for g in subformulas(f) if isinstance(g, (Until, Eventually))]
    k = len(eventualities)
    expansions: dict[frozenset, list[_Term]] = {}

    def terms_of(obligations: frozenset) -> list[_Term]:
        if obligations not in expansions:
            empty = frozenset()
            expansions[obligations] = list(dict.fromkeys(
                _expand(tuple(obligations), empty, empty, empty, empty)))
        return expansions[obligations]

    start = (frozenset({f}), 0)
    index = {start: 0}
    queue = deque([start])
    transitions = []
    while queue:
        node = queue.popleft()
        obligations, level = node
        for term in terms_of(obligations):
            j = 0 if level == k else level
            while j < k and eventualities[j] not in term.postponed:
                j += 1
            target = (term.following, j)
            if target not in index:
                index[target] = len(index)
                queue.append(target)
            for letter in _letters_of(term, letters):
                transitions.append((index[node], letter, index[target]))

    green = frozenset(i for (_, level), i in index.items() if level == k)
    raw = Automaton(
        kind=AutomatonKind.NBA,
        n_states=len(index),
        initial=(0,),
        green=green,
        transitions=tuple(transitions),
        alphabet=tuple(letters),
    )
    result = prune(raw)
    logger.debug(f"[LTL] tableau: {raw.n_states} raw states, {result.n_states} after pruning")
    return result
