"""
Product indexing shared by the explicit and symbolic builds.

A normal state is a triple (q, r, e): a state of the completed liveness
automaton A_L, of the completed safety-complement automaton A_S, and of the
flattened environment E. Σ positions index the L bitset (bit m is `sigma[m]`).
"""

import logging
from typing import Iterator, NamedTuple

from pydantic import BaseModel, ConfigDict

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import complete
from coordsynth.csp.compose import enabled_public
from coordsynth.entity.Process import Process
from coordsynth.utils.constants import StateKind

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]


class InputSymbol(NamedTuple):
    """Letter (a, L, g) of the edge-green automaton; L is a Σ bitset or a guard."""
    a: int
    L: object
    g: bool


class SpecState(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: StateKind
    q: int = -1
    r: int = -1
    e: int = -1

    @property
    def triple(self) -> Triple:
        return (self.q, self.r, self.e)

    def render(self, context: "SpecContext") -> str:
        if self.kind == StateKind.FAIL:
            return "Fail"
        if self.kind == StateKind.SINK:
            return "Sink"
        return f"({self.q},{self.r},{context.env.states[self.e]})"


FAIL = SpecState(kind=StateKind.FAIL)
SINK = SpecState(kind=StateKind.SINK)


class SpecContext:
    """
    The three components of the product, completed over E's alphabet.

    Letters of E are ordered public-first (Σ by id, then Γ by id), so a
    public action's position in `letters` equals its Σ position.
    """

    def __init__(self, env: Process, safety: Automaton, liveness: Automaton):
        self.env = env
        self.sigma: tuple[int, ...] = tuple(sorted(env.public_ids))
        self.gamma: tuple[int, ...] = tuple(sorted(env.private_ids))
        self.letters: tuple[int, ...] = self.sigma + self.gamma
        self.position = {a: m for m, a in enumerate(self.sigma)}
        self.a_s = complete(safety, self.letters)
        self.a_l = complete(liveness, self.letters)
        self.direct_public = [self.mask_of(enabled_public(env, e)) for e in range(len(env.states))]
        logger.debug(
            f"[SPEC] product of |A_L|={self.a_l.n_states}, |A_S|={self.a_s.n_states}, "
            f"|E|={len(env.states)} over |Σ|={len(self.sigma)}, |Γ|={len(self.gamma)}"
        )

    # ------------------------------------------------------------------
    # Sizes and masks
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Triple:
        return (self.a_l.n_states, self.a_s.n_states, len(self.env.states))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.sigma)) - 1

    def mask_of(self, actions) -> int:
        return sum(1 << self.position[a] for a in actions if a in self.position)

    def masks(self) -> range:
        return range(1 << len(self.sigma))

    def triples(self) -> Iterator[Triple]:
        nq, nr, ne = self.shape
        for q in range(nq):
            for r in range(nr):
                for e in range(ne):
                    yield (q, r, e)

    @property
    def initial_triples(self) -> list[Triple]:
        return [(q, r, self.env.initial) for q in self.a_l.initial for r in self.a_s.initial]

    # ------------------------------------------------------------------
    # Component moves
    # ------------------------------------------------------------------

    def green(self, q: int) -> bool:
        return q in self.a_l.green

    def joint(self, x: Triple, c: int) -> list[Triple]:
        """All (q', r', e') with Joint(x, c, ·)."""
        q, r, e = x
        return [
            (q2, r2, e2)
            for e2 in self.env.successors(e, c)
            for r2 in self.a_s.step(r, c)
            for q2 in self.a_l.step(q, c)
        ]

    def hits(self, e: int, mask: int) -> bool:
        """Some public action directly enabled at e lies in L."""
        return bool(self.direct_public[e] & mask)

    def has_private(self, e: int) -> bool:
        return any(a in self.env.private_ids for a, _ in self.env.outgoing(e))
