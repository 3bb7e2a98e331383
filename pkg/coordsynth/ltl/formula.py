"""
LTL formula trees over an action alphabet.

Atoms are global action ids: `Atom(a)` holds at position i iff the i-th letter
is a. Nodes are frozen dataclasses so formulas hash structurally and can be
used as tableau obligations.
"""

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Union


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Atom:
    action: int


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Next:
    operand: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Release:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Eventually:
    operand: "Formula"


@dataclass(frozen=True)
class Always:
    operand: "Formula"


Formula = Union[TrueF, FalseF, Atom, Not, And, Or, Next, Until, Release, Eventually, Always]

TRUE = TrueF()
FALSE = FalseF()

_UNARY = (Not, Next, Eventually, Always)
_BINARY = (And, Or, Until, Release)


# ============================================================================
# Builders
# ============================================================================

def conj(*parts: Formula) -> Formula:
    """Right-nested conjunction; the empty conjunction is true."""
    parts = [p for p in parts if p != TRUE]
    if not parts:
        return TRUE
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = And(part, result)
    return result


def disj(*parts: Formula) -> Formula:
    """Right-nested disjunction; the empty disjunction is false."""
    parts = [p for p in parts if p != FALSE]
    if not parts:
        return FALSE
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Or(part, result)
    return result


def implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


# ============================================================================
# Structure
# ============================================================================

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _UNARY):
        return (f.operand,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


def formula_size(f: Formula) -> int:
    return 1 + sum(formula_size(c) for c in children(f))


def atoms(f: Formula) -> frozenset[int]:
    if isinstance(f, Atom):
        return frozenset({f.action})
    result = frozenset()
    for child in children(f):
        result |= atoms(child)
    return result


def subformulas(f: Formula) -> list[Formula]:
    """Post-order list of distinct subformulas; the order is the subterm index."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        for child in children(g):
            visit(child)
        seen.setdefault(g, None)

    visit(f)
    return list(seen)


# ============================================================================
# Negation normal form
# ============================================================================

def nnf(f: Formula) -> Formula:
    """Push negations down to atoms using the Until/Release duality."""
    match f:
        case Not(operand=g):
            return _negated(g)
        case And(left=l, right=r):
            return And(nnf(l), nnf(r))
        case Or(left=l, right=r):
            return Or(nnf(l), nnf(r))
        case Next(operand=g):
            return Next(nnf(g))
        case Until(left=l, right=r):
            return Until(nnf(l), nnf(r))
        case Release(left=l, right=r):
            return Release(nnf(l), nnf(r))
        case Eventually(operand=g):
            return Eventually(nnf(g))
        case Always(operand=g):
            return Always(nnf(g))
    return f


def _negated(f: Formula) -> Formula:
    match f:
        case TrueF():
            return FALSE
        case FalseF():
            return TRUE
        case Atom():
            return Not(f)
        case Not(operand=g):
            return nnf(g)
        case And(left=l, right=r):
            return Or(_negated(l), _negated(r))
        case Or(left=l, right=r):
            return And(_negated(l), _negated(r))
        case Next(operand=g):
            return Next(_negated(g))
        case Until(left=l, right=r):
            return Release(_negated(l), _negated(r))
        case Release(left=l, right=r):
            return Until(_negated(l), _negated(r))
        case Eventually(operand=g):
            return Always(_negated(g))
        case Always(operand=g):
            return Eventually(_negated(g))
    raise TypeError(f"not a formula: {f!r}")


def negate(f: Formula) -> Formula:
    """Not(f) in negation normal form."""
    return _negated(f)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.operand, Atom)
    return all(is_nnf(c) for c in children(f))


# ============================================================================
# Printing
# ============================================================================

_BINARY_SYMBOL = {And: "&", Or: "|", Until: "U", Release: "R"}
_UNARY_SYMBOL = {Not: "!", Next: "X ", Eventually: "F ", Always: "G "}


def format_formula(f: Formula, name_of: Callable[[int], str]) -> str:
    """Fully parenthesized text accepted by parse_ltl."""
    match f:
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Atom(action=a):
            return name_of(a)
    if isinstance(f, _UNARY):
        return f"{_UNARY_SYMBOL[type(f)]}{_wrap(f.operand, name_of)}"
    return f"{_wrap(f.left, name_of)} {_BINARY_SYMBOL[type(f)]} {_wrap(f.right, name_of)}"


def _wrap(f: Formula, name_of: Callable[[int], str]) -> str:
    text = format_formula(f, name_of)
    return f"({text})" if isinstance(f, _BINARY) else text


# ============================================================================
# Enumeration
# ============================================================================

def enumerate_formulas(size: int, letters: tuple[int, ...]) -> Iterator[Formula]:
    """Every formula of exactly `size` nodes over the given atoms."""
    if size == 1:
        yield TRUE
        yield FALSE
        for a in letters:
            yield Atom(a)
        return
    for ctor in _UNARY:
        for operand in enumerate_formulas(size - 1, letters):
            yield ctor(operand)
    for ctor in _BINARY:
        for left_size in range(1, size - 1):
            lefts = list(enumerate_formulas(left_size, letters))
            rights = list(enumerate_formulas(size - 1 - left_size, letters))
            for left, right in product(lefts, rights):
                yield ctor(left, right)
