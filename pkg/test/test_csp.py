"""
Model parsing, parallel composition and process queries.

Scenarios:
1. The illustrative models parse into one agent over the declared alphabets
2. Grammar and semantic errors carry their position
3. `||{X}` synchronizes on X and hides it; `||` defaults to the common actions
4. Coordinators read from equations are restricted to Σ
"""
import pytest

from coordsynth.csp.compose import (
    CompositionError, bisimilar_up_to, compose_pair, enabled_public, flatten_network, is_deterministic, simulate,
)
from coordsynth.csp.parser import ModelError, ModelSyntaxError, parse_coordinator, parse_model
from coordsynth.csp.printer import format_model, format_process
from coordsynth.entity.Action import Action
from coordsynth.entity.Process import Process
from coordsynth.ltl.formula import format_formula

HANDSHAKE = """
public a, c, d;
process P  = a -> P1;
process P1 = c -> P;
process Q  = a -> Q1;
process Q1 = d -> Q;
system P ||{a} Q;
liveness "G F c";
"""


def _ids(network, *names):
    return {network.actions.lookup(name).id for name in names}


def test_parse_example_one(load_example):
    network, spec, env = load_example(1)
    assert len(network.agents) == 1
    assert env.states == ("E", "E0", "E1")
    assert env.public_ids == _ids(network, "a0", "a1")
    assert env.private_ids == _ids(network, "b")
    assert spec.safety_source == "universal"
    assert format_formula(spec.liveness, network.actions.name_of) == "F G !b"


def test_stop_is_a_state_without_moves(load_example):
    network, _, env = load_example(0)
    stop = env.state_index("STOP")
    assert stop is not None
    assert env.outgoing(stop) == ()
    assert enabled_public(env, env.initial) == _ids(network, "a0", "a1")


def test_syntax_error_reports_line():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model("public a0;\nprocess E = a0 -> ;\n")
    assert info.value.line == 2


@pytest.mark.parametrize("text", [
    "public a0;\nprocess E = a1 -> E;\n",
    "public a0;\nprocess E = a0 -> E;\nprocess E = a0 -> E;\n",
    "public a0;\nprocess E = a0 -> F;\n",
    'public a0;\nprocess E = a0 -> E;\nliveness "G F z";\n',
    "public a0, a1;\nprocess P = a0 -> P;\nprocess Q = a1 -> Q;\nsystem P ||{a0} Q;\n",
    "public a0;\npublic a0;\n",
])
def test_semantic_errors(text):
    with pytest.raises(ModelError):
        parse_model(text)


def test_sync_composition_hides_the_sync_set():
    network, _ = parse_model(HANDSHAKE)
    env = flatten_network(network)
    assert len(env.states) == 4
    assert env.public_ids == _ids(network, "c", "d")
    assert env.private_ids == _ids(network, "a")
    a = network.actions.lookup("a").id
    assert len(env.successors(env.initial, a)) == 1


def test_default_composition_syncs_on_common_actions():
    explicit, _ = parse_model(HANDSHAKE)
    implicit, _ = parse_model(HANDSHAKE.replace("||{a}", "||"))
    assert implicit.sync_sets == (None,)
    assert flatten_network(implicit).transitions == flatten_network(explicit).transitions


def test_empty_sync_set_interleaves():
    network, _ = parse_model(HANDSHAKE.replace("||{a}", "||{}"))
    env = flatten_network(network)
    a = network.actions.lookup("a").id
    assert a in env.public_ids
    assert len(env.states) == 4


def test_compose_pair_rejects_foreign_sync_actions():
    network, _ = parse_model(HANDSHAKE)
    p, q = network.agents
    c = network.actions.lookup("c").id
    with pytest.raises(CompositionError):
        compose_pair(p, q, {c})


def test_simulate_and_determinism(load_example):
    network, _, env = load_example(2)
    a0 = network.actions.lookup("a0").id
    assert simulate(env, [a0]) == frozenset({env.state_index("E0"), env.state_index("E1")})
    assert simulate(env, [a0, a0, a0]) == frozenset({env.state_index("E0")})
    assert not is_deterministic(env)
    assert is_deterministic(load_example(1)[2])


def test_bisimilar_up_to_depth():
    a = Action(id=0, name="a")
    loop = Process(name="P", states=("P",), public=(a,), transitions=((0, 0, 0),))
    pair = Process(name="Q", states=("Q", "Q1"), public=(a,), transitions=((0, 0, 1), (1, 0, 0)))
    once = Process(name="R", states=("R", "STOP"), public=(a,), transitions=((0, 0, 1),))
    assert bisimilar_up_to(loop, pair, 10)
    assert bisimilar_up_to(loop, once, 1)
    assert not bisimilar_up_to(loop, once, 2)


def test_format_process(load_example):
    network, _, env = load_example(0)
    assert format_process(env) == "process E = a0 -> E0 | a1 -> STOP;\nprocess E0 = a0 -> E0;"


def test_format_model_parses_back(load_example):
    network, spec, env = load_example(3)
    again, spec_again = parse_model(format_model(network, spec))
    env_again = flatten_network(again)
    assert len(env_again.states) == len(env.states)
    assert len(env_again.transitions) == len(env.transitions)
    name_of, name_of_again = network.actions.name_of, again.actions.name_of
    assert format_formula(spec_again.liveness, name_of_again) == format_formula(spec.liveness, name_of)


def test_shared_equations_print_once():
    network, spec = parse_model(
        "public a, b, c;\n"
        "process P = a -> Q;\n"
        "process R = b -> Q;\n"
        "process Q = c -> Q;\n"
        "system P ||{} R;\n"
    )
    assert [agent.states for agent in network.agents] == [("P", "Q"), ("R", "Q")]
    text = format_model(network, spec)
    assert text.count("process Q = c -> Q;") == 1
    again, _ = parse_model(text)
    env, env_again = flatten_network(network), flatten_network(again)
    assert len(env_again.states) == len(env.states)
    assert len(env_again.transitions) == len(env.transitions)


def test_safety_automaton_block():
    network, spec = parse_model("""
        public a0, a1;
        process E = a0 -> E | a1 -> E;
        safety_complement nfa {
          states r0, r1;
          initial r0;
          accepting r1;
          trans r0 a0 r1;
          trans r1 * r1;
        };
    """)
    nfa = spec.safety_complement
    a0, a1 = (network.actions.lookup(name).id for name in ("a0", "a1"))
    assert spec.safety_source == "nfa"
    assert nfa.n_states == 2
    assert nfa.green == frozenset({1})
    assert nfa.step(0, a0) == (1,)
    assert nfa.step(0, a1) == ()
    assert set(nfa.step(1, a1)) == {1}


def test_parse_coordinator_over_sigma(load_example):
    network, _, env = load_example(1)
    sigma = tuple(sorted(env.public_ids))
    m = parse_coordinator("process M = a0 -> M1;\nprocess M1 = a0 -> M;", network.actions, sigma)
    assert m.states == ("M", "M1")
    assert m.public_ids == env.public_ids
    assert not m.private


@pytest.mark.parametrize("text", [
    "process M = b -> M;",
    "public a0;\nprocess M = a0 -> M;",
    "",
])
def test_parse_coordinator_rejects(load_example, text):
    network, _, env = load_example(1)
    with pytest.raises(ModelError):
        parse_coordinator(text, network.actions, tuple(sorted(env.public_ids)))
