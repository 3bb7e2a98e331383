"""
Propositional encoding of bounded realizability.

For a UCW over Σ × 2^Σ and a bound N the instance asks for an N-state Moore
machine together with a run-graph annotation:

    T(s, m, t)   machine moves from s to t on Σ position m (one-hot per (s, m))
    O(s, m)      Σ position m is offered at machine state s
    A(q, s)      (q, s) is reachable in the run graph
    C(q, s, i)   bit i of the counter at (q, s), LSB first

For every UCW state q, machine state s and input position m (one group per
triple) and every UCW edge from q on (a, L) with L matching O(s, ·):

    A(q, s) ∧ [L = O(s)] ∧ T(s, m, t)  →  A(q', t) ∧ C(q', t) ≥ C(q, s) + [q' green]

Guards are turned into disjoint cubes over the O(s, ·) bits, so the offered
set is matched without enumerating 2^Σ letters.
"""

import io
import logging
import math
from collections import defaultdict
from typing import Hashable, Optional

from pydantic import BaseModel
from pysat.formula import CNF, IDPool

from coordsynth.automata.automaton import Automaton, MaskCube
from coordsynth.bdd.manager import Bdd
from coordsynth.utils.constants import ScaleCaps
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class EncodingError(CoordSynthError):
    """The instance cannot be encoded (bad bound, counter width beyond budget)."""
    pass


class CnfInstance(BaseModel):
    """Clauses plus the table of named variables (T, O, A, C keys)."""
    n_states: int
    n_ucw_states: int
    sigma: tuple[int, ...]
    counter_width: int
    groups: int
    n_vars: int
    clauses: list[list[int]]
    variables: dict[tuple, int]

    def var(self, *key: Hashable) -> Optional[int]:
        return self.variables.get(tuple(key))

    @property
    def output_vars(self) -> list[int]:
        """O(s, m) variables in (s, m) order; absent ones are skipped."""
        return [
            v for s in range(self.n_states) for m in range(len(self.sigma))
            if (v := self.var("O", s, m)) is not None
        ]

    def to_dimacs(self) -> str:
        formula = CNF(from_clauses=self.clauses)
        formula.nv = max(formula.nv, self.n_vars)
        buffer = io.StringIO()
        formula.to_fp(buffer)
        return buffer.getvalue()


# ============================================================================
# Guard expansion
# ============================================================================

def _label_cubes(ucw: Automaton, label) -> list[dict[int, bool]]:
    """Cubes over Σ positions covered by the L part of a label."""
    guard = label[1]
    if isinstance(guard, MaskCube):
        return [guard.assignment()]
    if isinstance(guard, Bdd):
        position = {name: m for m, name in enumerate(ucw.letter_vars)}
        return [
            {position[name]: value for name, value in cube.items()}
            for cube in guard.manager.cubes(guard, ucw.letter_vars)
        ]
    width = len(ucw.public or ())
    return [{m: bool((guard >> m) & 1) for m in range(width)}]


def _edges_by_source(ucw: Automaton) -> dict[tuple[int, int], list[tuple[dict[int, bool], tuple[int, ...]]]]:
    """(q, a) -> [(cube, targets)], guards expanded once and targets grouped per label."""
    grouped: dict[tuple[int, int], dict] = defaultdict(dict)
    for source, label, target in ucw.transitions:
        grouped[(source, label[0])].setdefault(label, []).append(target)
    result = {}
    for key, by_label in grouped.items():
        entries = []
        for label, targets in by_label.items():
            for cube in _label_cubes(ucw, label):
                entries.append((cube, tuple(dict.fromkeys(targets))))
        result[key] = entries
    return result


# ============================================================================
# Encoder
# ============================================================================

class _Encoder:

    def __init__(self, ucw: Automaton, n_states: int):
        self.ucw = ucw
        self.n = n_states
        self.sigma = tuple(ucw.public or ())
        self.pool = IDPool()
        self.clauses: list[list[int]] = []
        self.width = max(1, math.ceil(math.log2(ucw.n_states * n_states + 2)))
        if self.width > ScaleCaps.COUNTER_BIT_BUDGET:
            raise EncodingError(
                f"counter width {self.width} for |Q|={ucw.n_states}, N={n_states} "
                f"exceeds the budget of {ScaleCaps.COUNTER_BIT_BUDGET} bits"
            )
        self._comparators: dict[tuple, int] = {}

    def v(self, *key) -> int:
        return self.pool.id(key)

    def counter(self, q: int, s: int) -> list[int]:
        return [self.v("C", q, s, i) for i in range(self.width)]

    def compare(self, upper: tuple[int, int], lower: tuple[int, int], strict: bool) -> Optional[int]:
        """
        Literal implying C(upper) ≥ C(lower), or > when strict.

        Chain from the least significant bit: v_i forces the comparison on
        bits 0..i. Returns None when the relation holds trivially.
        """
        if not strict and upper == lower:
            return None
        key = (upper, lower, strict)
        if key in self._comparators:
            return self._comparators[key]
        xs, ys = self.counter(*upper), self.counter(*lower)
        previous: Optional[int] = None
        for i, (x, y) in enumerate(zip(xs, ys)):
            out = self.v("V", upper, lower, strict, i)
            self.clauses.append([-out, x, -y])
            if previous is None:
                if strict:
                    self.clauses.append([-out, x])
                    self.clauses.append([-out, -y])
            else:
                self.clauses.append([-out, x, previous])
                self.clauses.append([-out, -y, previous])
            previous = out
        self._comparators[key] = previous
        return previous

    def encode(self) -> CnfInstance:
        ucw, n, sigma = self.ucw, self.n, self.sigma
        for s in range(n):
            for m in range(len(sigma)):
                self.v("O", s, m)
        for s in range(n):
            for m in range(len(sigma)):
                moves = [self.v("T", s, m, t) for t in range(n)]
                self.clauses.append(list(moves))
                for i in range(n):
                    for j in range(i + 1, n):
                        self.clauses.append([-moves[i], -moves[j]])
        for q in ucw.initial:
            self.clauses.append([self.v("A", q, 0)])

        edges = _edges_by_source(ucw)
        groups = 0
        for q in range(ucw.n_states):
            for s in range(n):
                active = self.v("A", q, s)
                for m, a in enumerate(sigma):
                    groups += 1
                    for cube, targets in edges.get((q, a), ()):
                        offered = [self.v("O", s, k) if value else -self.v("O", s, k) for k, value in cube.items()]
                        premise = [-active] + [-lit for lit in offered]
                        for t in range(n):
                            move = self.v("T", s, m, t)
                            for q2 in targets:
                                self.clauses.append(premise + [-move, self.v("A", q2, t)])
                                bound = self.compare((q2, t), (q, s), q2 in ucw.green)
                                if bound is not None:
                                    self.clauses.append(premise + [-move, bound])

        variables = {key: self.pool.obj2id[key] for key in self.pool.obj2id if key[0] in ("T", "O", "A", "C")}
        instance = CnfInstance(
            n_states=n,
            n_ucw_states=ucw.n_states,
            sigma=sigma,
            counter_width=self.width,
            groups=groups,
            n_vars=self.pool.top,
            clauses=self.clauses,
            variables=variables,
        )
        logger.debug(
            f"[SYNTH] encoded N={n}: {instance.n_vars} vars, {len(instance.clauses)} clauses, "
            f"{groups} one-hot groups, counter width {self.width}"
        )
        return instance


def encode(ucw: Automaton, n_states: int) -> CnfInstance:
    """
    Encode "some n_states-state Moore machine is accepted by the UCW".

    Args:
        ucw: Specification UCW with (a, L) labels (bitset or BDD guard)
        n_states: Bound N on the machine size

    Returns:
        CnfInstance with |Q|·N·|Σ| one-hot constraint groups

    Raises:
        EncodingError: If N < 1 or the counters need too many bits
    """
    if n_states < 1:
        raise EncodingError(f"bound must be positive, got {n_states}")
    return _Encoder(ucw, n_states).encode()
