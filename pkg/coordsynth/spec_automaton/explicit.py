"""
Reference construction of the fixpoint relations with plain Python sets.

Each relation is computed on demand per source (and per L bitset where it
depends on L) and memoized. The `*_set` views enumerate the full product
domain and are only meant for cross-checking against the symbolic build.
"""

import logging
from collections import deque
from functools import lru_cache
from typing import Optional

from coordsynth.spec_automaton.product import SpecContext, Triple

logger = logging.getLogger(__name__)


class ExplicitRelations:

    def __init__(self, context: SpecContext):
        self.context = context
        self._enabled = self._fx_enabled()
        self._private_pred = self._private_predecessors()
        self.eprivate = lru_cache(maxsize=None)(self._eprivate)
        self.gen_eprivate = lru_cache(maxsize=None)(self._gen_eprivate)
        self.efail = lru_cache(maxsize=None)(self._efail)
        self._loop_bits = lru_cache(maxsize=None)(self._loop_bits_uncached)
        logger.debug(f"[SPEC] explicit relations: {len(self._enabled)} enabled pairs")

    # ------------------------------------------------------------------
    # Fixpoints
    # ------------------------------------------------------------------

    def _fx_enabled(self) -> frozenset[tuple[int, int]]:
        """(a, e) such that a private path from e reaches a direct a-edge."""
        env = self.context.env
        private = env.private_ids
        result = set()
        for e in range(len(env.states)):
            seen = {e}
            queue = deque([e])
            while queue:
                s = queue.popleft()
                for action, t in env.outgoing(s):
                    if action in private:
                        if t not in seen:
                            seen.add(t)
                            queue.append(t)
                    else:
                        result.add((action, e))
        return frozenset(result)

    def _private_predecessors(self) -> dict[tuple[int, int], set[tuple[int, int]]]:
        ctx = self.context
        pred: dict[tuple[int, int], set[tuple[int, int]]] = {}
        for r in range(ctx.a_s.n_states):
            for e in range(len(ctx.env.states)):
                for b in ctx.gamma:
                    for e2 in ctx.env.successors(e, b):
                        for r2 in ctx.a_s.step(r, b):
                            pred.setdefault((r2, e2), set()).add((r, e))
        return pred

    def _efail(self, mask: int) -> frozenset[tuple[int, int]]:
        """(r, e) pairs with Efail(r, e, L) for the bitset L = mask."""
        ctx = self.context
        found = {
            (r, e)
            for r in ctx.a_s.green
            for e in range(len(ctx.env.states))
            if not ctx.has_private(e) and not ctx.hits(e, mask)
        }
        queue = deque(found)
        while queue:
            pair = queue.popleft()
            for before in self._private_pred.get(pair, ()):
                if before not in found:
                    found.add(before)
                    queue.append(before)
        return frozenset(found)

    def _closure(self, x: Triple, mask: Optional[int] = None) -> frozenset[tuple[Triple, bool]]:
        ctx = self.context
        if mask is not None and ctx.hits(x[2], mask):
            return frozenset()
        start = (x, ctx.green(x[0]))
        seen = {start}
        queue = deque([start])
        while queue:
            y, g = queue.popleft()
            for b in ctx.gamma:
                for y2 in ctx.joint(y, b):
                    if mask is not None and ctx.hits(y2[2], mask):
                        continue
                    item = (y2, g or ctx.green(y2[0]))
                    if item not in seen:
                        seen.add(item)
                        queue.append(item)
        return frozenset(seen)

    def _eprivate(self, x: Triple) -> frozenset[tuple[Triple, bool]]:
        """(x', g) with Eprivate(x, g, x')."""
        return self._closure(x)

    def _gen_eprivate(self, x: Triple, mask: int) -> frozenset[tuple[Triple, bool]]:
        """(x', g) with GenEprivate(x, g, L, x'): no visited E-state enables an action of L."""
        return self._closure(x, mask)

    def _loop_bits_uncached(self, y: Triple, mask: int) -> frozenset[bool]:
        bits = set()
        for b in self.context.gamma:
            for y1 in self.context.joint(y, b):
                for end, g1 in self.gen_eprivate(y1, mask):
                    if end == y:
                        bits.add(g1)
        return frozenset(bits)

    # ------------------------------------------------------------------
    # Derived relations
    # ------------------------------------------------------------------

    def enabled(self, a: int, e: int) -> bool:
        return (a, e) in self._enabled

    def no_synch(self, x: Triple, mask: int) -> frozenset[bool]:
        """Green bits g with noSynch(x, L, g): a private lasso from x avoiding L on its loop."""
        bits = set()
        for y, _ in self.eprivate(x):
            bits |= self._loop_bits(y, mask)
        return frozenset(bits)

    def esink(self, a: int, e: int, mask: int) -> bool:
        in_l = bool((mask >> self.context.position[a]) & 1)
        return not in_l or not self.enabled(a, e)

    def normal_trans(self, x: Triple, a: int) -> frozenset[tuple[bool, Triple]]:
        """(g, x') reached by private moves, one joint a-move, then private moves."""
        result = set()
        for y0, g0 in self.eprivate(x):
            for y1 in self.context.joint(y0, a):
                for x2, g1 in self.eprivate(y1):
                    result.add((g0 or g1, x2))
        return frozenset(result)

    # ------------------------------------------------------------------
    # Set views
    # ------------------------------------------------------------------

    def enabled_set(self) -> set:
        return {(a, e) for a, e in self._enabled if a in self.context.position}

    def efail_set(self) -> set:
        return {(r, e, mask) for mask in self.context.masks() for r, e in self.efail(mask)}

    def eprivate_set(self) -> set:
        return {(x, g, y) for x in self.context.triples() for y, g in self.eprivate(x)}

    def gen_eprivate_set(self) -> set:
        ctx = self.context
        return {
            (x, g, mask, y)
            for mask in ctx.masks()
            for x in ctx.triples()
            for y, g in self.gen_eprivate(x, mask)
        }

    def no_synch_set(self) -> set:
        ctx = self.context
        return {(x, mask, g) for mask in ctx.masks() for x in ctx.triples() for g in self.no_synch(x, mask)}

    def esink_set(self) -> set:
        ctx = self.context
        return {
            (a, e, mask)
            for a in ctx.sigma
            for e in range(len(ctx.env.states))
            for mask in ctx.masks()
            if self.esink(a, e, mask)
        }

    def normal_trans_set(self) -> set:
        ctx = self.context
        return {(x, a, g, y) for x in ctx.triples() for a in ctx.sigma for g, y in self.normal_trans(x, a)}
