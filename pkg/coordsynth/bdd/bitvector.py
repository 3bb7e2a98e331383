import math
from typing import Mapping

from coordsynth.bdd.manager import Bdd, BddManager


def bit_width(size: int) -> int:
    """Bits needed for values 0 .. size-1 (at least one)."""
    return max(1, math.ceil(math.log2(size))) if size > 1 else 1


class BitVector:
    """Binary encoding of a bounded integer over named BDD variables, LSB first."""

    def __init__(self, manager: BddManager, names: list[str], size: int):
        self.manager = manager
        self.names = tuple(names)
        self.size = size

    def eq_value(self, value: int) -> Bdd:
        return self.manager.cube(self.assignment(value))

    def assignment(self, value: int) -> dict[str, bool]:
        return {name: bool((value >> i) & 1) for i, name in enumerate(self.names)}

    def eq(self, other: "BitVector") -> Bdd:
        result = self.manager.true
        for mine, theirs in zip(self.names, other.names):
            result = result & self.manager.var(mine).iff(self.manager.var(theirs))
        return result

    def domain(self) -> Bdd:
        """Codes of valid values only."""
        result = self.manager.false
        for value in range(self.size):
            result = result | self.eq_value(value)
        return result

    def decode(self, assignment: Mapping[str, bool]) -> int:
        return sum(1 << i for i, name in enumerate(self.names) if assignment.get(name, False))

    def renaming(self, other: "BitVector") -> dict[str, str]:
        return dict(zip(self.names, other.names))
