"""
Coordinator shapes: Moore machines, processes, normalization and fulltree prefixes.

Scenarios:
1. A Moore machine and its coordinator process describe the same offers
2. Internal actions are hidden and nondeterminism resolved before checking
3. A fulltree prefix read back as a process is bisimilar to the coordinator up to the prefix depth
"""
import pytest
from pydantic import ValidationError

from coordsynth.coordinator.fulltree import fulltree_prefix, proc_of_tree
from coordsynth.coordinator.machines import (
    CoordinatorError, csp_to_moore, hide_internal, moore_to_csp, normalize_coordinator,
    restrict_deterministic,
)
from coordsynth.csp.compose import bisimilar_up_to, enabled_public, is_deterministic
from coordsynth.entity.Action import Action
from coordsynth.entity.LabeledTreePrefix import LabeledTreePrefix
from coordsynth.entity.MooreMachine import MooreMachine
from coordsynth.entity.Process import Process
from coordsynth.utils.errors import ScaleCapError
from test.helpers import machine, sigma_of

A0 = Action(id=0, name="a0")
TAU = Action(id=5, name="tau")


def _alternating(load_example):
    network, _, env = load_example(1)
    m = machine(network, "process M = a0 -> M1;\nprocess M1 = a1 -> M;")
    return network, env, m


def test_moore_machine_to_process(load_example):
    _, _, env = load_example(1)
    a0, a1 = sigma_of(env)
    moore = MooreMachine(
        alphabet=(a0, a1),
        outputs=(frozenset({a0.id}), frozenset({a0.id, a1.id})),
        transitions=((1, 0), (1, 0)),
    )
    p = moore_to_csp(moore)
    assert p.states == ("M", "M1")
    assert not p.private
    assert set(p.transitions) == {(0, a0.id, 1), (1, a0.id, 1), (1, a1.id, 0)}


def test_total_machine_round_trip(load_example):
    _, _, env = load_example(1)
    a0, a1 = sigma_of(env)
    both = frozenset({a0.id, a1.id})
    moore = MooreMachine(alphabet=(a0, a1), outputs=(both, both), transitions=((1, 0), (1, 0)))
    assert csp_to_moore(moore_to_csp(moore), (a0, a1)) == moore


def test_process_to_moore_adds_a_sink(load_example):
    network, _, env = load_example(1)
    a0, a1 = sigma_of(env)
    moore = csp_to_moore(machine(network, "process M = a0 -> M;"), (a0, a1))
    assert moore.n_states == 2
    assert moore.outputs == (frozenset({a0.id}), frozenset())
    assert moore.transitions == ((0, 1), (1, 1))


def test_process_to_moore_starts_at_the_initial_state():
    p = Process(name="M", states=("X", "M"), initial=1, public=(A0,), transitions=((1, 0, 0), (0, 0, 0)))
    moore = csp_to_moore(p, (A0,))
    assert moore.transitions == ((1,), (1,))


def test_process_to_moore_rejects_bad_shapes():
    hidden = Process(name="M", states=("M",), public=(A0,), private=(TAU,), transitions=((0, 5, 0),))
    with pytest.raises(CoordinatorError):
        csp_to_moore(hidden, (A0,))
    branching = Process(name="M", states=("M", "M1"), public=(A0,), transitions=((0, 0, 0), (0, 0, 1)))
    with pytest.raises(CoordinatorError):
        csp_to_moore(branching, (A0,))


def test_hide_then_restrict():
    m = Process(name="M", states=("M", "M1"), public=(A0,), private=(TAU,),
                transitions=((0, 5, 1), (1, 0, 0)))
    hidden = hide_internal(m)
    assert not hidden.private
    assert set(hidden.transitions) == {(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1)}
    deterministic = restrict_deterministic(hidden)
    assert set(deterministic.transitions) == {(0, 0, 0), (1, 0, 0)}
    assert normalize_coordinator(m).transitions == deterministic.transitions
    for s in range(2):
        assert enabled_public(deterministic, s) == enabled_public(hidden, s)


def test_restrict_requires_hidden_actions():
    m = Process(name="M", states=("M",), public=(A0,), private=(TAU,), transitions=((0, 5, 0),))
    with pytest.raises(CoordinatorError):
        restrict_deterministic(m)


def test_normalize_keeps_deterministic_coordinators(load_example):
    _, _, m = _alternating(load_example)
    assert hide_internal(m) is m
    assert normalize_coordinator(m).transitions == m.transitions
    assert is_deterministic(normalize_coordinator(m))


def test_fulltree_labels(load_example):
    _, env, m = _alternating(load_example)
    a0, a1 = (a.id for a in sigma_of(env))
    tree = fulltree_prefix(m, 2)
    assert len(tree.labels) == 1 + 2 + 4
    assert tree.label(()) == {a0}
    assert tree.label((a0,)) == {a1}
    assert tree.label((a0, a1)) == {a0}
    assert tree.label((a1,)) == frozenset()
    assert tree.label((a0, a0)) == frozenset()
    assert tree.machine_states == {(): 0, (a0,): 1, (a0, a1): 0}


def test_fulltree_rejections(load_example):
    _, _, m = _alternating(load_example)
    with pytest.raises(ScaleCapError):
        fulltree_prefix(m, 7)
    branching = Process(name="M", states=("M", "M1"), public=(A0,), transitions=((0, 0, 0), (0, 0, 1)))
    with pytest.raises(CoordinatorError):
        fulltree_prefix(branching, 1)


def test_tree_prefix_must_be_full():
    with pytest.raises(ValidationError):
        LabeledTreePrefix(alphabet=(0,), depth=1, labels={(): frozenset({0})})


def test_tree_process_is_bisimilar_up_to_depth(load_example):
    _, env, m = _alternating(load_example)
    t = proc_of_tree(fulltree_prefix(m, 4), sigma_of(env))
    assert len(t.states) == 5
    assert t.states[-1].endswith("!")
    assert bisimilar_up_to(m, t, 4)
    assert not bisimilar_up_to(m, t, 5)


def test_tree_process_default_names():
    tree = LabeledTreePrefix(
        alphabet=(0,), depth=1,
        labels={(): frozenset({0}), (0,): frozenset({0})},
    )
    t = proc_of_tree(tree)
    assert t.states == ("T", "T_0!")
    assert t.public == (A0,)
    assert t.transitions == ((0, 0, 1),)
