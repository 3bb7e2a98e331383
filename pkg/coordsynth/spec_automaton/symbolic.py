"""
Symbolic construction of the fixpoint relations over BDDs.

Variable order (fixed, no reordering):

    q/r/e state bits, three interleaved copies per bit (X, X', X'')
    g, g0, g1                   green bits
    a bits                      Σ position of the input action
    c bits                      position in E's letters (Σ first, then Γ)
    L0 .. L{|Σ|-1}              the offered set, last

Public letters share codes between `a` and `c`, so a public joint step is a
plain rename of c to a. Every relation carries the domain constraints of
its state vectors, so minterm enumeration only yields valid indices.
"""

import logging
from typing import Iterator

from coordsynth.bdd.bitvector import BitVector, bit_width
from coordsynth.bdd.manager import Bdd, BddManager
from coordsynth.spec_automaton.product import SpecContext, Triple
from coordsynth.utils.constants import ScaleCaps

logger = logging.getLogger(__name__)

_COMPONENTS = ("q", "r", "e")


class SymbolicRelations:

    def __init__(self, context: SpecContext, node_cap: int = ScaleCaps.BDD_MAX_NODES):
        self.context = context
        self.manager = BddManager(node_cap=node_cap)
        self._declare()
        self._component_relations()
        self._fixpoints()
        logger.info(f"[BDD] symbolic relations built, {self.manager.node_count()} live nodes")

    # ==================================================================
    # Variables
    # ==================================================================

    def _declare(self) -> None:
        ctx, mgr = self.context, self.manager
        sizes = dict(zip(_COMPONENTS, ctx.shape))
        self.vectors: dict[str, list[BitVector]] = {}
        for comp in _COMPONENTS:
            width = bit_width(sizes[comp])
            for i in range(width):
                mgr.declare(*(f"{comp}{i}_{k}" for k in range(3)))
            self.vectors[comp] = [
                BitVector(mgr, [f"{comp}{i}_{k}" for i in range(width)], sizes[comp]) for k in range(3)
            ]
        mgr.declare("g", "g0", "g1")
        code_width = bit_width(len(ctx.letters))
        mgr.declare(*(f"a{i}" for i in range(code_width)))
        mgr.declare(*(f"c{i}" for i in range(code_width)))
        self.letter_vars = tuple(f"L{m}" for m in range(len(ctx.sigma)))
        mgr.declare(*self.letter_vars)

        self.act = BitVector(mgr, [f"a{i}" for i in range(code_width)], len(ctx.sigma))
        self.chr = BitVector(mgr, [f"c{i}" for i in range(code_width)], len(ctx.letters))
        self.g, self.g0, self.g1 = mgr.var("g"), mgr.var("g0"), mgr.var("g1")

    def names(self, copy: int) -> list[str]:
        return [n for comp in _COMPONENTS for n in self.vectors[comp][copy].names]

    def shift(self, source: int, target: int, components: str = "qre") -> dict[str, str]:
        mapping = {}
        for comp in components:
            mapping.update(self.vectors[comp][source].renaming(self.vectors[comp][target]))
        return mapping

    def x_assignment(self, x: Triple, copy: int = 0) -> dict[str, bool]:
        result = {}
        for comp, value in zip(_COMPONENTS, x):
            result.update(self.vectors[comp][copy].assignment(value))
        return result

    def decode(self, assignment: dict[str, bool], copy: int) -> Triple:
        return tuple(self.vectors[comp][copy].decode(assignment) for comp in _COMPONENTS)

    # ==================================================================
    # Component relations
    # ==================================================================

    def _edges(self, comp: str, triples) -> Bdd:
        vec = self.vectors[comp]
        code = {c: i for i, c in enumerate(self.context.letters)}
        result = self.manager.false
        for source, letter, target in triples:
            if letter not in code:
                continue
            result = result | self.manager.cube({
                **vec[0].assignment(source),
                **self.chr.assignment(code[letter]),
                **vec[1].assignment(target),
            })
        return result

    def _any_of(self, vec: BitVector, values) -> Bdd:
        result = self.manager.false
        for value in values:
            result = result | vec.eq_value(value)
        return result

    def _component_relations(self) -> None:
        ctx, mgr = self.context, self.manager
        q, r, e = (self.vectors[c] for c in _COMPONENTS)
        n_public = len(ctx.sigma)

        self.trans_l = self._edges("q", ctx.a_l.transitions)
        self.trans_s = self._edges("r", ctx.a_s.transitions)
        self.trans_e = self._edges("e", ctx.env.transitions)
        self.joint = self.trans_l & self.trans_s & self.trans_e

        self.private = self._any_of(self.chr, range(n_public, len(ctx.letters)))
        self.public = self._any_of(self.chr, range(n_public))
        self.green = [self._any_of(q[k], ctx.a_l.green) for k in range(2)]
        self.accepting = self._any_of(r[0], ctx.a_s.green)
        self.domain = [q[k].domain() & r[k].domain() & e[k].domain() for k in range(3)]
        self.same = q[0].eq(q[1]) & r[0].eq(r[1]) & e[0].eq(e[1])

        in_l = mgr.false
        for m, name in enumerate(self.letter_vars):
            in_l = in_l | (self.chr.eq_value(m) & mgr.var(name))
        self.in_l = in_l

        c_names = list(self.chr.names)
        self.direct_public = (self.trans_e & self.public).exists(e[1].names)
        self.hits = [(self.direct_public & in_l).exists(c_names)]
        self.hits.append(self.hits[0].rename(self.shift(0, 1, "e")))
        self.no_private = ~(self.trans_e & self.private).exists(c_names + list(e[1].names))
        self.joint_from_x2 = self.joint.rename(self.shift(0, 2))

    # ==================================================================
    # Fixpoints
    # ==================================================================

    def _fixpoints(self) -> None:
        mgr = self.manager
        e = self.vectors["e"]
        r = self.vectors["r"]
        c_names = list(self.chr.names)
        to_a = self.chr.renaming(self.act)

        # enabled(a, e): direct public edge, closed under private predecessors
        enabled_base = self.direct_public.rename(to_a)
        e_shift = self.shift(0, 1, "e")
        self.enabled = mgr.lfp(
            lambda X: enabled_base | (self.trans_e & self.private & X.rename(e_shift)).exists(c_names + list(e[1].names)),
            mgr.false, label="enabled",
        )

        # Efail(r, e, L)
        efail_base = self.accepting & self.no_private & ~self.hits[0] & r[0].domain() & e[0].domain()
        re_shift = self.shift(0, 1, "re")
        re_primed = c_names + list(r[1].names) + list(e[1].names)
        self.efail = mgr.lfp(
            lambda Y: efail_base | (self.private & self.trans_s & self.trans_e & Y.rename(re_shift)).exists(re_primed),
            mgr.false, label="efail",
        )

        # Eprivate(X, G, X') and GenEprivate(X, G, L, X')
        into_x2 = {**self.shift(1, 2), "g": "g0"}
        inner = self.names(2) + ["g0"] + c_names
        accumulate = self.g.iff(self.g0 | self.green[1])
        step = self.private & self.joint_from_x2 & accumulate
        eprivate_base = self.same & self.domain[0] & self.g.iff(self.green[0])
        self.eprivate = mgr.lfp(
            lambda Z: eprivate_base | (Z.rename(into_x2) & step).exists(inner),
            mgr.false, label="eprivate",
        )
        gen_base = eprivate_base & ~self.hits[0]
        gen_step = step & ~self.hits[1]
        self.gen_eprivate = mgr.lfp(
            lambda Z: gen_base | (Z.rename(into_x2) & gen_step).exists(inner),
            mgr.false, label="gen_eprivate",
        )

        # noSynch(X, L, G): Eprivate to the loop entry X'', one private step
        # to X', GenEprivate from X' back to X''
        entry = self.eprivate.rename(into_x2)
        close = self.gen_eprivate.rename(self.shift(1, 2)).rename({**self.shift(0, 1), "g": "g1"})
        self.no_synch = (
            entry & self.private & self.joint_from_x2 & close & self.g.iff(self.g1)
        ).exists(self.names(1) + self.names(2) + ["g0", "g1"] + c_names)
        mgr.check_cap()

        # Esink(a, e, L)
        in_l_a = self.in_l.rename(to_a)
        self.esink = self.act.domain() & e[0].domain() & (~in_l_a | ~self.enabled)

        # normalTrans(X, a, G, X')
        joint_public = (self.joint & self.public).rename(to_a)
        first = (entry & joint_public.rename(self.shift(0, 2))).exists(self.names(2))
        first = first.rename(self.shift(1, 2))
        tail = self.eprivate.rename({**self.shift(0, 2), "g": "g1"})
        self.normal_trans = (
            first & tail & self.g.iff(self.g0 | self.g1)
        ).exists(self.names(2) + ["g0", "g1"])
        mgr.check_cap()

    # ==================================================================
    # Per-state queries used by the builder
    # ==================================================================

    def fail_guards(self, x: Triple) -> tuple[Bdd, Bdd]:
        """Guards over L for Efail(r, e, L) and noSynch(x, L, true)."""
        _, r, e = x
        efail = self.efail.cofactor({**self.vectors["r"][0].assignment(r), **self.vectors["e"][0].assignment(e)})
        no_synch = self.no_synch.cofactor({**self.x_assignment(x), "g": True})
        return efail, no_synch

    def sink_guard(self, position: int, e: int) -> Bdd:
        return self.esink.cofactor({**self.act.assignment(position), **self.vectors["e"][0].assignment(e)})

    def successors(self, x: Triple, position: int) -> Iterator[tuple[bool, Triple]]:
        u = self.normal_trans.cofactor({**self.x_assignment(x), **self.act.assignment(position)})
        for assignment in self.manager.minterms(u, ["g"] + self.names(1)):
            yield bool(assignment["g"]), self.decode(assignment, 1)

    # ==================================================================
    # Set views
    # ==================================================================

    def _mask(self, assignment: dict[str, bool]) -> int:
        return sum(1 << m for m, name in enumerate(self.letter_vars) if assignment.get(name, False))

    def _rows(self, u: Bdd, care: list[str]) -> Iterator[dict[str, bool]]:
        return self.manager.minterms(u, care)

    def enabled_set(self) -> set:
        e = self.vectors["e"][0]
        sigma = self.context.sigma
        return {
            (sigma[self.act.decode(row)], e.decode(row))
            for row in self._rows(self.enabled & self.act.domain(), list(self.act.names) + list(e.names))
        }

    def efail_set(self) -> set:
        r, e = self.vectors["r"][0], self.vectors["e"][0]
        care = list(r.names) + list(e.names) + list(self.letter_vars)
        return {(r.decode(row), e.decode(row), self._mask(row)) for row in self._rows(self.efail, care)}

    def eprivate_set(self) -> set:
        care = self.names(0) + ["g"] + self.names(1)
        return {
            (self.decode(row, 0), bool(row["g"]), self.decode(row, 1))
            for row in self._rows(self.eprivate, care)
        }

    def gen_eprivate_set(self) -> set:
        care = self.names(0) + ["g"] + self.names(1) + list(self.letter_vars)
        return {
            (self.decode(row, 0), bool(row["g"]), self._mask(row), self.decode(row, 1))
            for row in self._rows(self.gen_eprivate, care)
        }

    def no_synch_set(self) -> set:
        care = self.names(0) + ["g"] + list(self.letter_vars)
        return {
            (self.decode(row, 0), self._mask(row), bool(row["g"]))
            for row in self._rows(self.no_synch, care)
        }

    def esink_set(self) -> set:
        e = self.vectors["e"][0]
        sigma = self.context.sigma
        care = list(self.act.names) + list(e.names) + list(self.letter_vars)
        return {
            (sigma[self.act.decode(row)], e.decode(row), self._mask(row))
            for row in self._rows(self.esink, care)
        }

    def normal_trans_set(self) -> set:
        sigma = self.context.sigma
        care = self.names(0) + list(self.act.names) + ["g"] + self.names(1)
        return {
            (self.decode(row, 0), sigma[self.act.decode(row)], bool(row["g"]), self.decode(row, 1))
            for row in self._rows(self.normal_trans, care)
        }
