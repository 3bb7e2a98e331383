"""Reference semantics of LTL on ultimately periodic words."""

import random
from itertools import product
from typing import Iterator

from coordsynth.entity.Trace import Trace
from coordsynth.ltl.formula import (
    Always, And, Atom, Eventually, FalseF, Formula, Next, Not, Or, Release, TrueF, Until,
)
from coordsynth.utils.errors import CoordSynthError


class LassoError(CoordSynthError):
    """A lasso-shaped word was required but none (or an empty loop) was given."""
    pass


def eval_lasso(f: Formula, w: Trace) -> bool:
    """
    Decide w, 0 |= f for the lasso w = prefix . loop^omega.

    Positions 0 .. |prefix|+|loop|-1 represent every suffix of w, so each
    subformula is evaluated once as a truth vector over those positions.
    Until is the least and Release the greatest solution of its unfolding.

    Raises:
        LassoError: If w has no loop
    """
    if not w.is_lasso:
        raise LassoError("eval_lasso needs a lasso word")
    word = w.prefix + w.loop
    n = len(word)
    nxt = [i + 1 for i in range(n - 1)] + [len(w.prefix)]
    memo: dict[Formula, list[bool]] = {}

    def fix(init: bool, step) -> list[bool]:
        values = [init] * n
        changed = True
        while changed:
            changed = False
            for i in reversed(range(n)):
                value = step(i, values)
                if value != values[i]:
                    values[i] = value
                    changed = True
        return values

    def vec(g: Formula) -> list[bool]:
        if g in memo:
            return memo[g]
        match g:
            case TrueF():
                result = [True] * n
            case FalseF():
                result = [False] * n
            case Atom(action=a):
                result = [letter == a for letter in word]
            case Not(operand=h):
                result = [not v for v in vec(h)]
            case And(left=l, right=r):
                result = [x and y for x, y in zip(vec(l), vec(r))]
            case Or(left=l, right=r):
                result = [x or y for x, y in zip(vec(l), vec(r))]
            case Next(operand=h):
                inner = vec(h)
                result = [inner[nxt[i]] for i in range(n)]
            case Until(left=l, right=r):
                a, b = vec(l), vec(r)
                result = fix(False, lambda i, v: b[i] or (a[i] and v[nxt[i]]))
            case Release(left=l, right=r):
                a, b = vec(l), vec(r)
                result = fix(True, lambda i, v: b[i] and (a[i] or v[nxt[i]]))
            case Eventually(operand=h):
                b = vec(h)
                result = fix(False, lambda i, v: b[i] or v[nxt[i]])
            case Always(operand=h):
                b = vec(h)
                result = fix(True, lambda i, v: b[i] and v[nxt[i]])
            case _:
                raise TypeError(f"not a formula: {g!r}")
        memo[g] = result
        return result

    return vec(f)[0]


# ============================================================================
# Lasso generators for oracle grids
# ============================================================================

def all_lassos(letters: tuple[int, ...], max_prefix: int, max_loop: int) -> Iterator[Trace]:
    for prefix_len in range(max_prefix + 1):
        for loop_len in range(1, max_loop + 1):
            for prefix in product(letters, repeat=prefix_len):
                for loop in product(letters, repeat=loop_len):
                    yield Trace(prefix=prefix, loop=loop)


def random_lassos(letters: tuple[int, ...], count: int, max_len: int, seed: int = 0) -> list[Trace]:
    rng = random.Random(seed)
    result = []
    for _ in range(count):
        prefix = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
        result.append(Trace(prefix=prefix, loop=loop))
    return result
