"""
Brute-force coordinator enumeration.

Candidates are deterministic Moore-shaped processes over Σ in canonical form:
every state is reachable from state 0 and states are numbered in the order a
breadth-first walk (states by index, offered actions by id) discovers them.
Each candidate goes through the checker; the first passing one is returned.

`linear=True` restricts the search to single-execution coordinators, chains
that offer one action per state and loop back at the end. Partial chains are
pruned as soon as they expose a safety-violating deadlock.
"""

import logging
from typing import Iterator, Optional

from pydantic import BaseModel

from coordsynth.csp.compose import enabled_public
from coordsynth.entity.Action import Action
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.utils.constants import ScaleCaps
from coordsynth.utils.errors import ScaleCapError
from coordsynth.verify.checker import check

logger = logging.getLogger(__name__)


class EnumerationResult(BaseModel):
    max_states: int
    candidates: int = 0
    coordinator: Optional[Process] = None

    @property
    def exhausted(self) -> bool:
        return self.coordinator is None


def _candidate(n: int, sigma: tuple[Action, ...], edges: list[tuple[int, int, int]]) -> Process:
    return Process(
        name="M",
        states=tuple("M" if s == 0 else f"M{s}" for s in range(n)),
        initial=0,
        public=sigma,
        private=(),
        transitions=tuple(edges),
    )


# ============================================================================
# Canonical branching machines
# ============================================================================

def canonical_machines(n: int, sigma: tuple[Action, ...]) -> Iterator[Process]:
    """Every canonical coordinator with exactly n reachable states."""
    ids = [a.id for a in sigma]

    def extend(s: int, discovered: int, edges: list) -> Iterator[list]:
        if s == discovered:
            if discovered == n:
                yield edges
            return
        for mask in range(1 << len(ids)):
            offered = [a for m, a in enumerate(ids) if (mask >> m) & 1]
            yield from assign(s, offered, 0, discovered, edges)

    def assign(s: int, offered: list[int], i: int, discovered: int, edges: list) -> Iterator[list]:
        if i == len(offered):
            yield from extend(s + 1, discovered, edges)
            return
        for t in range(min(discovered + 1, n)):
            grown = discovered + 1 if t == discovered else discovered
            yield from assign(s, offered, i + 1, grown, edges + [(s, offered[i], t)])

    for edges in extend(0, 1, []):
        yield _candidate(n, sigma, edges)


# ============================================================================
# Single-execution chains
# ============================================================================

class _ChainPruner:
    """Tracks (E state, safety-complement subset) pairs along a partial chain."""

    def __init__(self, env: Process, spec: SpecPair):
        self.env = env
        self.nfa = spec.safety_complement
        self.private = env.private_ids

    def start(self) -> frozenset:
        return self._closure({(self.env.initial, frozenset(self.nfa.initial))})

    def _closure(self, frontier: set) -> frozenset:
        seen = set(frontier)
        stack = list(frontier)
        while stack:
            e, subset = stack.pop()
            for action, e2 in self.env.outgoing(e):
                if action not in self.private:
                    continue
                node = (e2, frozenset(t for r in subset for t in self.nfa.step(r, action)))
                if node not in seen:
                    seen.add(node)
                    stack.append(node)
        return frozenset(seen)

    def deadlocks(self, frontier: frozenset, action: int) -> bool:
        """Offering only `action` here leaves a maximal computation the safety complement accepts."""
        for e, subset in frontier:
            stuck = not any(a in self.private for a, _ in self.env.outgoing(e))
            if stuck and action not in enabled_public(self.env, e) and subset & self.nfa.green:
                return True
        return False

    def step(self, frontier: frozenset, action: int) -> frozenset:
        moved = {
            (e2, frozenset(t for r in subset for t in self.nfa.step(r, action)))
            for e, subset in frontier
            for e2 in self.env.successors(e, action)
        }
        return self._closure(moved)


def linear_machines(env: Process, spec: SpecPair, n: int, sigma: tuple[Action, ...]) -> Iterator[Process]:
    """Chains of exactly n states whose every prefix survives the deadlock check."""
    pruner = _ChainPruner(env, spec)

    def grow(frontier: frozenset, word: list[int]) -> Iterator[list[int]]:
        if len(word) == n:
            yield word
            return
        for action in sigma:
            if pruner.deadlocks(frontier, action.id):
                continue
            yield from grow(pruner.step(frontier, action.id), word + [action.id])

    for word in grow(pruner.start(), []):
        for back in range(n):
            edges = [(s, word[s], s + 1) for s in range(n - 1)] + [(n - 1, word[-1], back)]
            yield _candidate(n, sigma, edges)


# ============================================================================
# Driver
# ============================================================================

def enumerate_coordinators(env: Process, spec: SpecPair, max_states: int,
                           sigma: Optional[tuple[Action, ...]] = None,
                           linear: bool = False) -> EnumerationResult:
    """
    First checker-passing coordinator with at most `max_states` states.

    Args:
        env: Flattened environment
        spec: Specification pair
        max_states: Largest candidate size k
        sigma: Coordinator alphabet; defaults to Σ of E
        linear: Enumerate single-execution chains only

    Returns:
        EnumerationResult; `exhausted` when no candidate passes

    Raises:
        ScaleCapError: If k or |Σ| exceed the enumeration caps
    """
    sigma = sigma if sigma is not None else tuple(sorted(env.public, key=lambda a: a.id))
    state_cap = ScaleCaps.ENUMERATE_LINEAR_MAX_STATES if linear else ScaleCaps.ENUMERATE_MAX_STATES
    public_cap = ScaleCaps.ENUMERATE_LINEAR_MAX_PUBLIC if linear else ScaleCaps.ENUMERATE_MAX_PUBLIC
    if max_states > state_cap:
        raise ScaleCapError("enumeration states", max_states, state_cap)
    if len(sigma) > public_cap:
        raise ScaleCapError("enumeration public actions", len(sigma), public_cap)

    result = EnumerationResult(max_states=max_states)
    for n in range(1, max_states + 1):
        candidates = linear_machines(env, spec, n, sigma) if linear else canonical_machines(n, sigma)
        for candidate in candidates:
            result.candidates += 1
            if check(env, candidate, spec).passed:
                logger.info(f"[VERIFY] candidate {result.candidates} with {n} states passes")
                result.coordinator = candidate
                return result
    logger.info(f"[VERIFY] exhausted {result.candidates} candidates up to k={max_states}")
    return result
