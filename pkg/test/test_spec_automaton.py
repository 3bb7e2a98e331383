"""
Specification automaton construction and its independent oracles.

Scenarios:
1. Explicit and symbolic builds yield identical transition relations
2. Fail and Sink sit at states 0 and 1, and the normal part stays within the product bound
3. The run-graph acceptance of a coordinator's fulltree matches the model checker
4. The brute-force tree search finds each kind of violation on small trees
5. Above the bitset limit the explicit build works on enabledness classes and still agrees
"""
import pytest

from coordsynth.coordinator.fulltree import fulltree_prefix
from coordsynth.coordinator.machines import csp_to_moore
from coordsynth.csp.parser import parse_model
from coordsynth.csp.compose import flatten_network
from coordsynth.ltl.formula import negate
from coordsynth.ltl.tableau import to_nba
from coordsynth.automata.automaton import MaskCube
from coordsynth.spec_automaton.builder import _class_cubes, _enabledness_blocks, build_spec_automaton
from coordsynth.spec_automaton.oracle import check_violation_conditions, fulltree_ucw_accepts
from coordsynth.spec_automaton.product import FAIL, SINK, SpecContext
from coordsynth.utils.constants import AutomatonKind, BuildMode, ScaleCaps, WitnessKind
from coordsynth.utils.errors import ScaleCapError
from coordsynth.verify.checker import check
from coordsynth.verify.enumerate import canonical_machines
from test.helpers import machine, sigma_of


def _build(network, spec, env, mode=BuildMode.SYMBOLIC):
    nba = to_nba(negate(spec.liveness), tuple(a.id for a in env.alphabet))
    return build_spec_automaton(env, spec.safety_complement, nba, mode=mode)


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4, 5])
def test_explicit_and_symbolic_agree(load_example, k):
    built = _build(*load_example(k), mode=BuildMode.BOTH)
    assert built.mode == BuildMode.BOTH
    assert built.mismatches == []


def test_running_example_agrees(running):
    built = _build(*running, mode="both")
    assert built.mismatches == []


def test_shape_of_the_automaton(load_example):
    built = _build(*load_example(1))
    assert built.states[0] == FAIL
    assert built.states[1] == SINK
    assert built.normal_states <= built.product_bound
    assert built.ucw.kind == AutomatonKind.UCW
    assert built.ucw.public == built.context.sigma


def _wide_model() -> str:
    wide = [f"a{i}" for i in range(1, 13)]
    return (
        f"public a0, {', '.join(wide)};\n"
        "private b;\n"
        f"process E = a0 -> E | {' | '.join(f'{n} -> E1' for n in wide[:5])} | b -> E2;\n"
        f"process E1 = {' | '.join(f'{n} -> E' for n in wide[5:])};\n"
        "process E2 = a0 -> E;\n"
        "system E;\n"
        'liveness "G F a6";\n'
    )


def test_explicit_mode_above_the_bitset_limit(load_text):
    network, spec, env = load_text(_wide_model())
    assert len(env.public_ids) > ScaleCaps.EXPLICIT_MAX_PUBLIC
    explicit = _build(network, spec, env, mode=BuildMode.EXPLICIT)
    assert any(isinstance(label[1], MaskCube) for _, label, _ in explicit.ucw.transitions)
    built = _build(network, spec, env, mode=BuildMode.BOTH)
    assert built.mismatches == []
    assert explicit.normal_states == built.normal_states


def test_enabledness_classes_cover_every_offered_set(load_text):
    _, spec, env = load_text(_wide_model())
    nba = to_nba(negate(spec.liveness), tuple(a.id for a in env.alphabet))
    context = SpecContext(env, spec.safety_complement, nba)
    blocks = _enabledness_blocks(context)
    assert len(blocks) == 3
    for abit in (1 << 0, 1 << 3, 1 << 9):
        covered = []
        for pattern in range(1 << len(blocks)):
            covered += [cube for _, cube in _class_cubes(blocks, pattern, abit)]
        for mask in range(0, 1 << len(context.sigma), 97):
            assert sum(cube.contains(mask) for cube in covered) == 1, (abit, mask)


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4, 5])
def test_fulltree_acceptance_matches_checker(load_example, k):
    network, spec, env = load_example(k)
    built = _build(network, spec, env)
    sigma = tuple(network.actions[a] for a in built.ucw.public)
    for n in (1, 2):
        for candidate in canonical_machines(n, sigma):
            accepted = fulltree_ucw_accepts(built.ucw, csp_to_moore(candidate, sigma))
            assert accepted == check(env, candidate, spec).passed, candidate.transitions


def test_running_example_tree_is_valid(running):
    network, spec, env = running
    built = _build(network, spec, env)
    m = machine(network, "process M = a1 -> M;")
    assert fulltree_ucw_accepts(built.ucw, csp_to_moore(m, sigma_of(env)))
    assert check_violation_conditions(env, spec, fulltree_prefix(m, 4)) is None


def test_oracle_finds_no_violation_for_valid_coordinators(load_example):
    for k, equations in ((0, "process M = a0 -> M;"), (1, "process M = a0 -> M;"),
                         (3, "process M = a0 -> M;"), (4, "process M = a0 -> M | a1 -> M;")):
        network, spec, env = load_example(k)
        assert check_violation_conditions(env, spec, fulltree_prefix(machine(network, equations), 3)) is None


def test_oracle_maximal_computation(load_example):
    network, spec, env = load_example(1)
    witness = check_violation_conditions(env, spec, fulltree_prefix(machine(network, "process M = STOP;"), 2))
    assert witness.kind == WitnessKind.MAXIMAL
    assert witness.node == ()
    assert witness.trace.prefix == ()


def test_oracle_unfair_private_suffix(load_example):
    network, spec, env = load_example(1)
    witness = check_violation_conditions(env, spec, fulltree_prefix(machine(network, "process M = a1 -> M;"), 2))
    a1, b = network.actions.lookup("a1").id, network.actions.lookup("b").id
    assert witness.kind == WitnessKind.UNFAIR_SUFFIX
    assert witness.trace.prefix == (a1,)
    assert witness.trace.loop == (b,)


def test_oracle_infinite_consistent_path(load_example):
    network, spec, env = load_example(5)
    witness = check_violation_conditions(env, spec, fulltree_prefix(machine(network, "process M = a0 -> M;"), 3))
    a0, b = network.actions.lookup("a0").id, network.actions.lookup("b").id
    assert witness.kind == WitnessKind.INFINITE_PATH
    assert witness.trace.prefix == (a0,)
    assert witness.trace.loop == (b, a0)


def test_oracle_caps(load_example):
    network, spec, env = load_example(1)
    tree = fulltree_prefix(machine(network, "process M = a0 -> M;"), 6)
    assert check_violation_conditions(env, spec, tree, depth=2) is None
    big, big_spec = parse_model(
        "public a, b, c, d;\nprocess E = a -> E | b -> E | c -> E | d -> E;\n"
    )
    big_env = flatten_network(big)
    with pytest.raises(ScaleCapError):
        check_violation_conditions(big_env, big_spec, fulltree_prefix(machine(big, "process M = a -> M;"), 1))
