"""
Benchmark generators: illustrative examples, case studies and the hardness reduction.

Scenarios:
1. Every registered benchmark parses and prints back to an equivalent model
2. Case studies have the documented shapes
3. A reduction instance has a coordinator exactly when its NFA rejects some word
"""
import random

import pytest

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import nfa_runs_word, nfa_shortest_rejected
from coordsynth.benchgen.case_studies import arbiter, pr_async, pr_sync, pr_write_change_monitor, thermostat
from coordsynth.benchgen.examples import BenchmarkError, example_text, running_example_coordinator
from coordsynth.benchgen.reduction import pspace_instance, pspace_instance_text, random_complete_nfa
from coordsynth.benchgen.registry import BENCHMARKS, generate, generate_text
from coordsynth.csp.compose import flatten_network
from coordsynth.csp.parser import parse_model
from coordsynth.csp.printer import format_model
from coordsynth.utils.constants import AutomatonKind
from coordsynth.verify.checker import check
from coordsynth.verify.enumerate import enumerate_coordinators


def _names(env):
    return sorted(a.name for a in env.public), sorted(a.name for a in env.private)


def _reduction_agrees(nfa: Automaton, max_chain: int) -> bool:
    """Linear enumeration matches universality; skipped (True) when the witness chain is too long."""
    network, spec = pspace_instance(nfa)
    env = flatten_network(network)
    rejected = nfa_shortest_rejected(nfa, nfa.alphabet)
    if rejected is None:
        return enumerate_coordinators(env, spec, 4, linear=True).exhausted
    if len(rejected) + 2 > max_chain:
        return True
    result = enumerate_coordinators(env, spec, len(rejected) + 2, linear=True)
    return not result.exhausted and check(env, result.coordinator, spec).passed


def test_example_range():
    with pytest.raises(BenchmarkError):
        example_text(6)
    with pytest.raises(BenchmarkError):
        example_text(-1)


@pytest.mark.parametrize("k, public", [
    (0, ["a0", "a1"]),
    (1, ["a0", "a1"]),
    (2, ["a0"]),
    (3, ["a0"]),
    (4, ["a0", "a1"]),
    (5, ["a0"]),
])
def test_example_alphabets(load_example, k, public):
    _, _, env = load_example(k)
    assert _names(env)[0] == public


def test_running_example_coordinator(running):
    network, _, env = running
    m = running_example_coordinator(network)
    assert {a.name for a in m.public} == {a.name for a in env.public}
    assert [network.actions.name_of(a) for _, a, _ in m.transitions] == ["a1"]


@pytest.mark.parametrize("name", sorted(BENCHMARKS))
def test_registry_models_print_back(name):
    network, spec = generate(name)
    again, again_spec = parse_model(format_model(network, spec))
    left, right = flatten_network(network), flatten_network(again)
    assert _names(left) == _names(right)
    assert len(left.states) == len(right.states)
    assert len(left.transitions) == len(right.transitions)
    assert again_spec.safety_source == spec.safety_source


def test_registry_rejects_unknown_names():
    with pytest.raises(BenchmarkError):
        generate_text("no-such-benchmark")
    with pytest.raises(BenchmarkError):
        generate_text("thermostat", n=4)


def test_thermostat_shape():
    network, spec = thermostat(3)
    env = flatten_network(network)
    public, private = _names(env)
    assert public == sorted(["JustRight", "Cold", "Warm", "switchACOff", "switchACOn",
                             "switchHeatOff", "switchHeatOn"])
    assert private == ["ACisOn", "HeatisOn", "drift"]
    assert spec.safety_source == "universal"


@pytest.mark.parametrize("n, states", [(2, 9), (3, 27), (4, 81)])
def test_arbiter_shape(n, states):
    network, _ = arbiter(n)
    env = flatten_network(network)
    assert len(env.public) == 3 * n
    assert not env.private
    assert len(env.states) == states
    with pytest.raises(BenchmarkError):
        arbiter(1)


def test_shared_variable_models():
    sync_env = flatten_network(pr_sync()[0])
    async_env = flatten_network(pr_async()[0])
    assert _names(sync_env) == (["r0", "r1", "w0", "w1"], ["tau"])
    assert _names(async_env) == (["r0", "r1", "w0", "w1"], ["h0", "h1", "tau"])


def test_write_change_monitor():
    network, _ = pr_sync()
    monitor = pr_write_change_monitor(network.actions)
    ids = {name: network.actions.lookup(name).id for name in ("r0", "r1", "w0", "w1")}
    word = lambda *names: [ids[n] for n in names]
    assert monitor.kind == AutomatonKind.NFA
    assert nfa_runs_word(monitor, word("w0", "r0", "w1", "w0"))
    assert not nfa_runs_word(monitor, word("w0", "w1", "r0", "w0"))
    assert not nfa_runs_word(monitor, word("w1", "w1", "r1", "w0", "w0"))


def test_random_nfas_are_complete():
    rng = random.Random(7)
    for n in (1, 2, 3, 4):
        nfa = random_complete_nfa(n, 2, rng)
        assert nfa.initial == (0,)
        for s in range(n):
            for letter in (0, 1):
                assert nfa.step(s, letter)
    with pytest.raises(BenchmarkError):
        random_complete_nfa(0)


def test_reduction_requires_a_complete_nfa():
    partial = Automaton(kind=AutomatonKind.NFA, n_states=1, initial=(0,), transitions=((0, 0, 0),),
                        alphabet=(0, 1))
    with pytest.raises(BenchmarkError):
        pspace_instance_text(partial)


def test_reduction_instance_shape():
    nfa = random_complete_nfa(3, 2, random.Random(1))
    network, spec = pspace_instance(nfa)
    names = [agent.name for agent in network.agents]
    assert names == ["Start"]
    env = flatten_network(network)
    public, private = _names(env)
    assert {"a", "b", "sharp"} <= set(public) <= {"a", "b", "sharp", "plus", "minus"}
    assert not private
    assert env.states[env.initial] == "Start"
    assert spec.safety_source == "universal"


def test_reduction_on_random_nfas():
    rng = random.Random(2024)
    for _ in range(20):
        nfa = random_complete_nfa(rng.choice((1, 2, 3)), 2, rng)
        assert _reduction_agrees(nfa, max_chain=4)


@pytest.mark.slow
def test_reduction_on_many_random_nfas():
    rng = random.Random(99)
    for _ in range(200):
        nfa = random_complete_nfa(rng.choice((1, 2, 3, 4)), 2, rng)
        assert _reduction_agrees(nfa, max_chain=6)
