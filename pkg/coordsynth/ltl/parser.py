"""
LTL formula parser.

Grammar (loosest to tightest): `->` (right), `|`, `&`, `U`/`R` (right),
prefix `! X F G`, then atoms `true`, `false`, action names and parentheses.
"""

import logging
from typing import Optional

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from coordsynth.entity.Action import ActionTable
from coordsynth.ltl.formula import (
    FALSE, TRUE, Always, And, Atom, Eventually, Formula, Next, Not, Or, Release, Until, implies,
)
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class LtlSyntaxError(CoordSynthError):
    """Formula text does not conform to the LTL grammar."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class UnknownActionError(CoordSynthError):
    """An atom names an action missing from the model's action table."""
    pass


LTL_GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction
                | disjunction "->" implication      -> imp

    ?disjunction: conjunction
                | disjunction "|" conjunction       -> or_

    ?conjunction: temporal
                | conjunction "&" temporal          -> and_

    ?temporal: unary
             | unary "U" temporal                   -> until
             | unary "R" temporal                   -> release

    ?unary: "!" unary                               -> not_
          | "X" unary                               -> next
          | "F" unary                               -> eventually
          | "G" unary                               -> always
          | primary

    ?primary: "true"                                -> true
            | "false"                               -> false
            | NAME                                  -> atom
            | "(" implication ")"

    NAME: /[A-Za-z_][A-Za-z0-9_.]*/

    COMMENT: /#[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_LTL_PARSER = Lark(LTL_GRAMMAR, parser="lalr", start="start")


@v_args(inline=True)
class _FormulaBuilder(Transformer):

    def __init__(self, actions: ActionTable):
        super().__init__()
        self._actions = actions

    def true(self):
        return TRUE

    def false(self):
        return FALSE

    def atom(self, name):
        try:
            return Atom(self._actions.lookup(str(name)).id)
        except KeyError:
            raise UnknownActionError(f"unknown action '{name}' at line {name.line}, column {name.column}")

    def not_(self, operand):
        return Not(operand)

    def next(self, operand):
        return Next(operand)

    def eventually(self, operand):
        return Eventually(operand)

    def always(self, operand):
        return Always(operand)

    def and_(self, left, right):
        return And(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def until(self, left, right):
        return Until(left, right)

    def release(self, left, right):
        return Release(left, right)

    def imp(self, left, right):
        return implies(left, right)


def parse_ltl(text: str, actions: ActionTable) -> Formula:
    """
    Parse an LTL formula whose atoms are action names.

    Args:
        text: Formula source, e.g. "F G !b" or "G (request.0 -> F grant.0)"
        actions: Action table the atoms are resolved against

    Returns:
        The parsed formula tree; `->` is desugared to `!a | b`

    Raises:
        LtlSyntaxError: If the text does not parse
        UnknownActionError: If an atom is not a declared action
    """
    try:
        tree = _LTL_PARSER.parse(text)
    except UnexpectedInput as e:
        logger.debug(f"[LTL] syntax error in {text!r}: {e}")
        raise LtlSyntaxError("invalid LTL formula", e.line, e.column) from e
    try:
        return _FormulaBuilder(actions).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, CoordSynthError):
            raise e.orig_exc from None
        raise
