"""
Automaton structure, membership and transformations.

Scenarios:
1. Lasso membership for NBA and its universal co-Buchi reading
2. Subset-construction universality with shortest rejected words
3. complete / prune / green_edges_to_states keep the intended language
4. The text format reads action automata back
"""
import pytest

from coordsynth.automata.automaton import Automaton, AutomatonError
from coordsynth.automata.operations import (
    as_ucw, complete, empty_nfa, green_edges_to_states, nba_accepts_lasso, nfa_runs_word,
    nfa_shortest_rejected, nfa_universal, prune, ucw_accepts_lasso, universal_nfa,
)
from coordsynth.automata.serialize import dump_dot, format_automaton, parse_automaton
from coordsynth.entity.Trace import Trace
from coordsynth.ltl.formula import Always, Atom, Eventually, Not, Until, negate
from coordsynth.ltl.semantics import LassoError, all_lassos, eval_lasso
from coordsynth.ltl.tableau import to_nba
from coordsynth.utils.constants import AutomatonKind

LETTERS = (0, 1)


def _infinitely_many_zeros() -> Automaton:
    # state 1 is entered on every 0
    return Automaton(
        kind=AutomatonKind.NBA, n_states=2, initial=(0,), green=frozenset({1}),
        transitions=((0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 0)), alphabet=LETTERS,
    )


def _ends_with_zero() -> Automaton:
    return Automaton(
        kind=AutomatonKind.NFA, n_states=2, initial=(0,), green=frozenset({1}),
        transitions=((0, 0, 0), (0, 1, 0), (0, 0, 1)), alphabet=LETTERS,
    )


def test_nba_membership():
    nba = _infinitely_many_zeros()
    assert nba_accepts_lasso(nba, Trace(prefix=(1, 1), loop=(1, 0)))
    assert not nba_accepts_lasso(nba, Trace(prefix=(0, 0), loop=(1,)))
    assert nba_accepts_lasso(nba, ((), (0,)))
    with pytest.raises(LassoError):
        nba_accepts_lasso(nba, ((0,), ()))


def test_ucw_reading_is_the_complement():
    for f in (Always(Eventually(Atom(0))), Until(Atom(0), Atom(1)), Eventually(Always(Not(Atom(1))))):
        ucw = as_ucw(to_nba(negate(f), LETTERS))
        assert ucw.kind == AutomatonKind.UCW
        for w in all_lassos(LETTERS, 2, 3):
            assert ucw_accepts_lasso(ucw, w) == eval_lasso(f, w), (f, w)


def test_nfa_universality():
    nfa = _ends_with_zero()
    assert nfa_runs_word(nfa, (1, 0))
    assert not nfa_runs_word(nfa, (0, 1))
    assert nfa_shortest_rejected(nfa, LETTERS) == ()
    assert not nfa_universal(nfa, LETTERS)
    assert nfa_universal(universal_nfa(LETTERS), LETTERS)
    assert nfa_shortest_rejected(empty_nfa(LETTERS), LETTERS) == ()


def test_shortest_rejected_word_is_shortest():
    # accepts every word except those of length exactly 2
    nfa = Automaton(
        kind=AutomatonKind.NFA, n_states=4, initial=(0,), green=frozenset({0, 1, 3}),
        transitions=tuple((s, a, t) for s, t in ((0, 1), (1, 2), (2, 3), (3, 3)) for a in LETTERS),
        alphabet=LETTERS,
    )
    assert nfa_shortest_rejected(nfa, LETTERS) == (0, 0)


def test_complete_adds_a_rejecting_sink():
    nfa = _ends_with_zero()
    completed = complete(nfa, LETTERS)
    assert completed.n_states == 3
    assert 2 not in completed.green
    for s in range(completed.n_states):
        for letter in LETTERS:
            assert completed.step(s, letter)
    for word in ((0,), (1, 0), (0, 1), (1, 1, 1)):
        assert nfa_runs_word(completed, word) == nfa_runs_word(nfa, word)
    assert complete(completed, LETTERS) is completed


def test_prune_drops_dead_states():
    nba = Automaton(
        kind=AutomatonKind.NBA, n_states=4, initial=(0,), green=frozenset({1, 2}),
        transitions=((0, 0, 1), (1, 0, 1), (0, 1, 2), (3, 0, 3)), alphabet=LETTERS,
    )
    pruned = prune(nba)
    assert pruned.n_states == 2
    assert pruned.green == frozenset({1})
    ucw = prune(as_ucw(nba))
    assert ucw.n_states == 3


def test_green_edges_to_states():
    edge_green = Automaton(
        kind=AutomatonKind.NBA, n_states=1, initial=(0,),
        transitions=((0, (5, True), 0), (0, (6, False), 0)),
    )
    converted = green_edges_to_states(edge_green)
    assert converted.n_states == 2
    assert converted.initial == (0,)
    assert converted.green == frozenset({1})
    assert converted.step(0, (5,)) == (1,)
    assert converted.step(0, (6,)) == (0,)
    assert converted.step(1, (6,)) == (0,)


def test_structural_errors():
    with pytest.raises(AutomatonError):
        Automaton(kind=AutomatonKind.NFA, n_states=1, initial=(0,), transitions=((0, 0, 3),))
    with pytest.raises(AutomatonError):
        Automaton(kind=AutomatonKind.NFA, n_states=1, initial=(0,), transitions=((0, 7, 0),), alphabet=LETTERS)


def test_text_format_reads_back():
    nba = _infinitely_many_zeros()
    names = {"x": 0, "y": 1}
    text = format_automaton(nba, lambda a: "xy"[a])
    assert text.startswith("states 2\n")
    assert "trans 0 x 1" in text
    again = parse_automaton(text, names.__getitem__)
    assert again.kind == AutomatonKind.NBA
    assert parse_automaton(text, names.__getitem__, kind=AutomatonKind.UCW).kind == AutomatonKind.UCW
    assert again.transitions == tuple(sorted(nba.transitions))
    assert again.green == nba.green
    assert format_automaton(again, lambda a: "xy"[a]) == text
    with pytest.raises(AutomatonError):
        parse_automaton("states 1\ntrans 0 x|{x} 0\n", names.__getitem__)
    with pytest.raises(AutomatonError):
        parse_automaton("kind nba\nstates 1\n", names.__getitem__)
    assert "doublecircle" in dump_dot(nba)
