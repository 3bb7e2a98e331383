"""
Specification automaton B and its universal co-Buchi reading.

Per normal state (q, r, e) and input (a, L) the successor follows a priority
cascade: Efail goes to Fail, else a green noSynch lasso goes to Fail, else
Esink goes to Sink, else every normalTrans successor with its green bit.
Fail self-loops with both green bits; Sink self-loops with g = false only.
"""

import logging
from collections import deque
from typing import Any, Iterable, Iterator, Optional

from pydantic import BaseModel, ConfigDict

from coordsynth.automata.automaton import Automaton, MaskCube
from coordsynth.automata.operations import as_ucw, green_edges_to_states
from coordsynth.automata.serialize import explicit_labels
from coordsynth.entity.Process import Process
from coordsynth.spec_automaton.explicit import ExplicitRelations
from coordsynth.spec_automaton.product import FAIL, SINK, InputSymbol, SpecContext, SpecState, Triple
from coordsynth.spec_automaton.symbolic import SymbolicRelations
from coordsynth.utils.constants import AutomatonKind, BuildMode, ScaleCaps, StateKind
from coordsynth.utils.errors import ScaleCapError

logger = logging.getLogger(__name__)

_RELATIONS = ("enabled", "efail", "eprivate", "gen_eprivate", "no_synch", "esink", "normal_trans")


class SpecAutomaton(BaseModel):
    """B with green edges (`edge_green`) and the converted UCW over (a, L)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    mode: BuildMode
    states: tuple[SpecState, ...]
    edge_green: Automaton
    ucw: Automaton
    context: Any
    relations: Any
    mismatches: Optional[list[str]] = None

    @property
    def normal_states(self) -> int:
        return sum(1 for s in self.states if s.kind == StateKind.NORMAL)

    @property
    def product_bound(self) -> int:
        """|A_L|·|A_S|·|E| + 2, the pre-conversion state bound."""
        nq, nr, ne = self.context.shape
        return nq * nr * ne + 2


# ============================================================================
# Exploration
# ============================================================================

def _explicit_edges(context: SpecContext, rel: ExplicitRelations, x: Triple):
    _, r, e = x
    for mask in context.masks():
        efail = (r, e) in rel.efail(mask)
        lasso = True in rel.no_synch(x, mask)
        for a in context.sigma:
            if efail:
                yield InputSymbol(a, mask, False), FAIL
            elif lasso:
                yield InputSymbol(a, mask, True), FAIL
            elif rel.esink(a, e, mask):
                yield InputSymbol(a, mask, False), SINK
            else:
                for g, y in sorted(rel.normal_trans(x, a)):
                    yield InputSymbol(a, mask, g), _normal(y)


def _enabledness_blocks(context: SpecContext) -> list[int]:
    """Σ positions grouped by the E-states that directly enable them; never-enabled positions left out."""
    signature: dict[frozenset[int], int] = {}
    for m in range(len(context.sigma)):
        states = frozenset(e for e, direct in enumerate(context.direct_public) if (direct >> m) & 1)
        if states:
            signature[states] = signature.get(states, 0) | (1 << m)
    return sorted(signature.values())


def _bits(mask: int) -> list[int]:
    return [1 << m for m in range(mask.bit_length()) if (mask >> m) & 1]


def _class_cubes(blocks: list[int], pattern: int, abit: int) -> Iterator[tuple[bool, MaskCube]]:
    """
    Disjoint cubes covering the bitsets L that meet exactly the blocks in
    `pattern`, split by whether the input action's own bit is in L.
    """
    for in_l in (False, True):
        partial = [(abit, abit if in_l else 0)]
        for i, block in enumerate(blocks):
            if not (pattern >> i) & 1:
                if in_l and block & abit:
                    break
                partial = [(care | block, value) for care, value in partial]
                continue
            if in_l and block & abit:
                continue
            members = _bits(block & ~abit)
            if not members:
                break
            chain, before = [], 0
            for bit in members:
                chain.append((before | bit, bit))
                before |= bit
            partial = [(care | c, value | v) for care, value in partial for c, v in chain]
        else:
            for care, value in partial:
                yield in_l, MaskCube(care=care, value=value)


def _class_edges(context: SpecContext, rel: ExplicitRelations, blocks: list[int], x: Triple):
    _, r, e = x
    for pattern in range(1 << len(blocks)):
        representative = sum(block & -block for i, block in enumerate(blocks) if (pattern >> i) & 1)
        efail = (r, e) in rel.efail(representative)
        lasso = True in rel.no_synch(x, representative)
        for m, a in enumerate(context.sigma):
            for in_l, cube in _class_cubes(blocks, pattern, 1 << m):
                if efail:
                    yield InputSymbol(a, cube, False), FAIL
                elif lasso:
                    yield InputSymbol(a, cube, True), FAIL
                elif rel.esink(a, e, cube.value):
                    yield InputSymbol(a, cube, False), SINK
                else:
                    for g, y in sorted(rel.normal_trans(x, a)):
                        yield InputSymbol(a, cube, g), _normal(y)


def _symbolic_edges(context: SpecContext, rel: SymbolicRelations, x: Triple):
    _, _, e = x
    efail, lasso = rel.fail_guards(x)
    lasso = lasso & ~efail
    blocked = efail | lasso
    for m, a in enumerate(context.sigma):
        if not efail.is_false:
            yield InputSymbol(a, efail, False), FAIL
        if not lasso.is_false:
            yield InputSymbol(a, lasso, True), FAIL
        sink = rel.sink_guard(m, e)
        if not (sink & ~blocked).is_false:
            yield InputSymbol(a, sink & ~blocked, False), SINK
        normal = ~blocked & ~sink
        if normal.is_false:
            continue
        for g, y in sorted(rel.successors(x, m)):
            yield InputSymbol(a, normal, g), _normal(y)


def _normal(x: Triple) -> SpecState:
    q, r, e = x
    return SpecState(kind=StateKind.NORMAL, q=q, r=r, e=e)


def _special_loops(context: SpecContext, true_label: Iterable) -> list[tuple[int, InputSymbol, int]]:
    loops = []
    for a in context.sigma:
        for label in true_label:
            loops.append((0, InputSymbol(a, label, False), 0))
            loops.append((0, InputSymbol(a, label, True), 0))
            loops.append((1, InputSymbol(a, label, False), 1))
    return loops


def _explore(context: SpecContext, edges_of, true_label: Iterable, letter_vars) -> tuple[list[SpecState], Automaton]:
    index: dict[SpecState, int] = {FAIL: 0, SINK: 1}
    states = [FAIL, SINK]
    queue = deque()
    initial = []
    for x in context.initial_triples:
        state = _normal(x)
        if state not in index:
            index[state] = len(states)
            states.append(state)
            queue.append(state)
        initial.append(index[state])

    transitions = _special_loops(context, true_label)
    while queue:
        state = queue.popleft()
        for label, target in edges_of(state.triple):
            if target not in index:
                if len(states) >= ScaleCaps.SPEC_MAX_STATES:
                    raise ScaleCapError("specification automaton states", len(states) + 1, ScaleCaps.SPEC_MAX_STATES)
                index[target] = len(states)
                states.append(target)
                queue.append(target)
            transitions.append((index[state], label, index[target]))

    green = {0} | {i for i, s in enumerate(states) if s.kind == StateKind.NORMAL and context.green(s.q)}
    automaton = Automaton(
        kind=AutomatonKind.NBA,
        n_states=len(states),
        initial=tuple(initial),
        green=frozenset(green),
        transitions=tuple(transitions),
        public=context.sigma,
        letter_vars=letter_vars,
        state_names=tuple(s.render(context) for s in states),
    )
    return states, automaton


# ============================================================================
# Entry points
# ============================================================================

def _finish(mode: BuildMode, context, relations, states, edge_green) -> SpecAutomaton:
    ucw = as_ucw(green_edges_to_states(edge_green))
    logger.info(
        f"[SPEC] {mode.value} build: {len(states)} states "
        f"({len(states) - 2} normal, bound {context.shape[0] * context.shape[1] * context.shape[2] + 2}), "
        f"UCW {ucw.n_states} states / {len(ucw.transitions)} transitions"
    )
    return SpecAutomaton(
        mode=mode, states=tuple(states), edge_green=edge_green, ucw=ucw,
        context=context, relations=relations,
    )


def build_explicit(context: SpecContext) -> SpecAutomaton:
    """
    Reference build with plain sets. Up to EXPLICIT_MAX_PUBLIC public actions
    every L bitset is its own letter; above that L ranges over the classes of
    bitsets meeting the same enabledness blocks, each labelled by MaskCube guards.
    """
    rel = ExplicitRelations(context)
    width = len(context.sigma)
    if width <= ScaleCaps.EXPLICIT_MAX_PUBLIC:
        states, edge_green = _explore(context, lambda x: _explicit_edges(context, rel, x), context.masks(), None)
        return _finish(BuildMode.EXPLICIT, context, rel, states, edge_green)
    blocks = _enabledness_blocks(context)
    if len(blocks) > ScaleCaps.EXPLICIT_MAX_CLASSES:
        raise ScaleCapError("enabledness classes for explicit mode", len(blocks), ScaleCaps.EXPLICIT_MAX_CLASSES)
    logger.info(f"[SPEC] explicit build over {len(blocks)} enabledness classes of {width} public actions")
    states, edge_green = _explore(
        context, lambda x: _class_edges(context, rel, blocks, x), (MaskCube(care=0, value=0),), None,
    )
    return _finish(BuildMode.EXPLICIT, context, rel, states, edge_green)


def build_symbolic(context: SpecContext, node_cap: int = ScaleCaps.BDD_MAX_NODES) -> SpecAutomaton:
    rel = SymbolicRelations(context, node_cap=node_cap)
    states, edge_green = _explore(
        context, lambda x: _symbolic_edges(context, rel, x), (rel.manager.true,), rel.letter_vars,
    )
    return _finish(BuildMode.SYMBOLIC, context, rel, states, edge_green)


def build_spec_automaton(env: Process, safety: Automaton, liveness: Automaton,
                         mode: BuildMode = BuildMode.SYMBOLIC,
                         node_cap: int = ScaleCaps.BDD_MAX_NODES) -> SpecAutomaton:
    """
    Build B from the environment, the safety-complement NFA and the NBA of ¬φ_L.

    Args:
        env: Flattened environment E
        safety: A_S, accepting the maximal finite traces that violate φ_S
        liveness: A_L, an NBA over E's actions for the negated liveness formula
        mode: explicit, symbolic, or both (symbolic result carrying the cross-check)
        node_cap: BDD node cap for the symbolic build

    Returns:
        SpecAutomaton whose `ucw` is the input of bounded synthesis

    Raises:
        ScaleCapError: When a state, node or enumeration cap is exceeded
    """
    mode = BuildMode(BuildMode.normalize(mode)) if isinstance(mode, str) else mode
    context = SpecContext(env, safety, liveness)
    if mode == BuildMode.EXPLICIT:
        return build_explicit(context)
    symbolic = build_symbolic(context, node_cap)
    if mode == BuildMode.SYMBOLIC:
        return symbolic
    explicit = build_explicit(context)
    if len(context.sigma) <= ScaleCaps.EXPLICIT_MAX_PUBLIC:
        mismatches = compare_transitions(explicit, symbolic)
    else:
        mismatches = compare_guards(explicit, symbolic)
    if len(context.sigma) <= 9:
        mismatches += compare_relations(explicit.relations, symbolic.relations)
    if mismatches:
        logger.error(f"[SPEC] explicit/symbolic cross-check: {len(mismatches)} mismatches")
    else:
        logger.info("[SPEC] explicit/symbolic cross-check: identical")
    return symbolic.model_copy(update={"mode": BuildMode.BOTH, "mismatches": mismatches})


# ============================================================================
# Cross-checks
# ============================================================================

def keyed_transitions(spec: SpecAutomaton) -> set[tuple[SpecState, tuple, SpecState]]:
    """Transitions of the edge-green automaton with concrete labels and state keys."""
    b = spec.edge_green
    result = set()
    for source, label, target in b.transitions:
        for concrete in explicit_labels(b, label):
            result.add((spec.states[source], tuple(concrete), spec.states[target]))
    return result


def compare_transitions(left: SpecAutomaton, right: SpecAutomaton) -> list[str]:
    mine, theirs = keyed_transitions(left), keyed_transitions(right)
    mismatches = []
    for edge in sorted(mine - theirs, key=repr)[:5]:
        mismatches.append(f"transition only in {left.mode.value}: {edge}")
    for edge in sorted(theirs - mine, key=repr)[:5]:
        mismatches.append(f"transition only in {right.mode.value}: {edge}")
    extra = len(mine ^ theirs) - len(mismatches)
    if extra > 0:
        mismatches.append(f"... and {extra} more differing transitions")
    return mismatches


def _as_guard(part, manager, letter_vars: tuple[str, ...]):
    if isinstance(part, MaskCube):
        return manager.cube({letter_vars[m]: value for m, value in part.assignment().items()})
    if isinstance(part, int):
        return manager.cube({name: bool((part >> m) & 1) for m, name in enumerate(letter_vars)})
    return part


def guarded_transitions(spec: SpecAutomaton, manager, letter_vars: tuple[str, ...]) -> dict[tuple, Any]:
    """(source, a, g, target) -> union of the L guards on that edge, as one Bdd."""
    result: dict[tuple, Any] = {}
    for source, label, target in spec.edge_green.transitions:
        a, part, g = label
        key = (spec.states[source], a, bool(g), spec.states[target])
        guard = _as_guard(part, manager, letter_vars)
        result[key] = result[key] | guard if key in result else guard
    return result


def compare_guards(explicit: SpecAutomaton, symbolic: SpecAutomaton) -> list[str]:
    """Edge-by-edge comparison of L guards, without expanding Σ bitsets."""
    manager, letter_vars = symbolic.relations.manager, symbolic.relations.letter_vars
    mine = guarded_transitions(explicit, manager, letter_vars)
    theirs = guarded_transitions(symbolic, manager, letter_vars)
    mismatches = []
    for key in sorted(set(mine) | set(theirs), key=repr):
        left, right = mine.get(key, manager.false), theirs.get(key, manager.false)
        if left != right:
            mismatches.append(f"guard of {key} differs between explicit and symbolic")
    if len(mismatches) > 10:
        mismatches = mismatches[:10] + [f"... and {len(mismatches) - 10} more differing edges"]
    return mismatches


def compare_relations(explicit, symbolic) -> list[str]:
    """Name every fixpoint relation whose set view differs between the two builds."""
    mismatches = []
    for name in _RELATIONS:
        mine = getattr(explicit, f"{name}_set")()
        theirs = getattr(symbolic, f"{name}_set")()
        if mine != theirs:
            sample = sorted(mine ^ theirs, key=repr)[:3]
            mismatches.append(
                f"{name}: {len(mine - theirs)} explicit-only, {len(theirs - mine)} symbolic-only, e.g. {sample}"
            )
    return mismatches
