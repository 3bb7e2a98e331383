"""
Thin, typed wrapper over the `dd` BDD engine.

The manager fixes the variable order at declaration time (no dynamic
reordering) and enforces a hard node cap. `Bdd` values are hashable and
refuse to mix with values from another manager.
"""

import logging
from typing import Callable, Iterable, Iterator, Mapping, Optional

from dd import autoref as _bdd

from coordsynth.utils.constants import ScaleCaps
from coordsynth.utils.errors import CoordSynthError, ScaleCapError

logger = logging.getLogger(__name__)


class BddError(CoordSynthError):
    """Invalid BDD operation (mixed managers, bad rename, unknown variable)."""
    pass


class FixpointError(CoordSynthError):
    """A fixpoint iteration exceeded its safety cap."""
    pass


class BddManager:
    """Owner of one `dd` manager; single-threaded."""

    def __init__(self, node_cap: int = ScaleCaps.BDD_MAX_NODES):
        self._bdd = _bdd.BDD()
        self._bdd.configure(reordering=False)
        self.node_cap = node_cap
        self._order: list[str] = []

    # ------------------------------------------------------------------
    # Variables
    # ------------------------------------------------------------------

    def declare(self, *names: str) -> None:
        """Append variables at the bottom of the order, in the given sequence."""
        for name in names:
            if name in self._bdd.vars:
                raise BddError(f"variable '{name}' declared twice")
            self._bdd.add_var(name, level=len(self._order))
            self._order.append(name)

    @property
    def order(self) -> tuple[str, ...]:
        return tuple(self._order)

    def level_of(self, name: str) -> int:
        if name not in self._bdd.vars:
            raise BddError(f"unknown variable '{name}'")
        return self._bdd.level_of_var(name)

    def var(self, name: str) -> "Bdd":
        self.level_of(name)
        return Bdd(self, self._bdd.var(name))

    def mk_var(self, level: int) -> "Bdd":
        return self.var(self._order[level])

    @property
    def true(self) -> "Bdd":
        return Bdd(self, self._bdd.true)

    @property
    def false(self) -> "Bdd":
        return Bdd(self, self._bdd.false)

    def cube(self, assignment: Mapping[str, bool]) -> "Bdd":
        result = self.true
        for name, value in assignment.items():
            literal = self.var(name)
            result = result & (literal if value else ~literal)
        return result

    # ------------------------------------------------------------------
    # Bookkeeping
    # ------------------------------------------------------------------

    def node_count(self) -> int:
        return len(self._bdd)

    def check_cap(self) -> None:
        count = self.node_count()
        if count > self.node_cap:
            logger.error(f"[BDD] node cap exceeded: {count} > {self.node_cap}")
            raise ScaleCapError("BDD nodes", count, self.node_cap)

    def dump(self, path: str, roots: Iterable["Bdd"]) -> None:
        """Write roots to `path`; the file type follows the extension (e.g. `.dot`, `.pdf`)."""
        self._bdd.dump(path, roots=[r._f for r in roots])

    # ------------------------------------------------------------------
    # Composite operations
    # ------------------------------------------------------------------

    def ite(self, cond: "Bdd", then: "Bdd", other: "Bdd") -> "Bdd":
        for operand in (cond, then, other):
            self._own(operand)
        return Bdd(self, self._bdd.ite(cond._f, then._f, other._f))

    def lfp(self, step: Callable[["Bdd"], "Bdd"], bottom: "Bdd",
            max_iterations: Optional[int] = None, label: str = "lfp") -> "Bdd":
        """
        Least fixpoint of a monotone transformer, iterated from `bottom`.

        Args:
            step: Monotone Bdd -> Bdd map (caller-guaranteed)
            bottom: Starting point of the iteration
            max_iterations: Safety cap; None means one more than the number of
                atoms over the variables the iterates mention so far
            label: Name used in log lines

        Returns:
            F with F == step(F)

        Raises:
            FixpointError: If the cap is reached before stabilization
        """
        support = bottom.support()
        current = bottom
        iteration = 0
        while True:
            iteration += 1
            following = step(current)
            self.check_cap()
            if following == current:
                logger.debug(f"[BDD] {label} converged after {iteration} iterations")
                return current
            support |= following.support()
            cap = max_iterations if max_iterations is not None else 2 ** len(support) + 1
            if iteration >= cap:
                logger.error(f"[BDD] {label} did not converge within {cap} iterations")
                raise FixpointError(f"{label}: no fixpoint within {cap} iterations")
            current = following

    def cubes(self, u: "Bdd", care_vars: Iterable[str]) -> Iterator[dict[str, bool]]:
        """
        Disjoint cubes covering `u`, by Shannon expansion in variable order.

        Variables outside the support are left out of each cube, so a cube
        may stand for many minterms over `care_vars`.
        """
        self._own(u)
        care = sorted(set(care_vars), key=self.level_of)
        missing = u.support() - set(care)
        if missing:
            raise BddError(f"support {sorted(missing)} outside care variables")
        yield from self._expand(u, care, {})

    def _expand(self, u: "Bdd", care: list[str], partial: dict[str, bool]) -> Iterator[dict[str, bool]]:
        if u.is_false:
            return
        if u.is_true:
            yield dict(partial)
            return
        support = u.support()
        top = next(name for name in care if name in support)
        for value in (False, True):
            partial[top] = value
            yield from self._expand(u.cofactor({top: value}), care, partial)
            del partial[top]

    def minterms(self, u: "Bdd", care_vars: Iterable[str]) -> Iterator[dict[str, bool]]:
        """Every full assignment to `care_vars` satisfying `u`."""
        self._own(u)
        yield from self._bdd.pick_iter(u._f, care_vars=set(care_vars))

    def _own(self, u: "Bdd") -> None:
        if u.manager is not self:
            raise BddError("operand belongs to a different BDD manager")


class Bdd:
    """A BDD root within one manager."""

    __slots__ = ("manager", "_f")

    def __init__(self, manager: BddManager, function):
        self.manager = manager
        self._f = function

    def _peer(self, other: "Bdd"):
        if not isinstance(other, Bdd) or other.manager is not self.manager:
            raise BddError("operands belong to different BDD managers")
        return other._f

    # Boolean connectives
    def __and__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self._f & self._peer(other))

    def __or__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self._f | self._peer(other))

    def __xor__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self.manager._bdd.apply("xor", self._f, self._peer(other)))

    def __invert__(self) -> "Bdd":
        return Bdd(self.manager, ~self._f)

    def iff(self, other: "Bdd") -> "Bdd":
        return ~(self ^ other)

    def implies(self, other: "Bdd") -> "Bdd":
        return ~self | other

    def __eq__(self, other) -> bool:
        return isinstance(other, Bdd) and other.manager is self.manager and other._f == self._f

    def __hash__(self) -> int:
        return hash((id(self.manager), self._f.node))

    def __repr__(self) -> str:
        return f"Bdd({self.manager._bdd.to_expr(self._f)})"

    @property
    def is_true(self) -> bool:
        return self._f == self.manager._bdd.true

    @property
    def is_false(self) -> bool:
        return self._f == self.manager._bdd.false

    # Quantification and substitution
    def exists(self, names: Iterable[str]) -> "Bdd":
        names = set(names)
        if not names:
            return self
        return Bdd(self.manager, self.manager._bdd.exist(names, self._f))

    def forall(self, names: Iterable[str]) -> "Bdd":
        return ~((~self).exists(names))

    def rename(self, mapping: Mapping[str, str]) -> "Bdd":
        """
        Substitute variables by variables.

        Raises:
            BddError: If the map is not injective or does not preserve the
                relative order of the renamed variables
        """
        if not mapping:
            return self
        if len(set(mapping.values())) != len(mapping):
            raise BddError("rename map is not injective")
        level_of = self.manager.level_of
        pairs = sorted((level_of(src), level_of(dst)) for src, dst in mapping.items())
        targets = [dst for _, dst in pairs]
        if targets != sorted(targets):
            raise BddError("rename map is not order-compatible")
        return Bdd(self.manager, self.manager._bdd.let(dict(mapping), self._f))

    def cofactor(self, assignment: Mapping[str, bool]) -> "Bdd":
        if not assignment:
            return self
        return Bdd(self.manager, self.manager._bdd.let({k: bool(v) for k, v in assignment.items()}, self._f))

    def evaluate(self, assignment: Mapping[str, bool]) -> bool:
        """Truth value under an assignment covering the support."""
        support = self.support()
        return self.cofactor({k: v for k, v in assignment.items() if k in support}).is_true

    def support(self) -> set[str]:
        return set(self.manager._bdd.support(self._f))

    def count(self, nvars: Optional[int] = None) -> int:
        return int(self.manager._bdd.count(self._f, nvars=nvars))
