"""
Line-oriented text format for automata.

    states 3
    initial 0
    green 2
    alphabet a0 a1 b
    trans 0 a0 1
    trans 1 a0|{a0,a1} 2 1

Composite letters render as `a|{l1,l2}` with an optional trailing green bit
column. Guarded (symbolic) labels are expanded into one line per minterm.
Lines are sorted so equal automata print identically. The automaton kind is
not part of the text; the reader takes it as an argument.
"""

from typing import Callable, Hashable, Optional

from coordsynth.automata.automaton import Automaton, AutomatonError, is_guard
from coordsynth.utils.constants import AutomatonKind, ScaleCaps
from coordsynth.utils.errors import ScaleCapError


def _mask_names(mask: int, public: tuple[int, ...], name_of: Callable[[int], str]) -> str:
    return "{" + ",".join(name_of(a) for m, a in enumerate(public) if (mask >> m) & 1) + "}"


def explicit_labels(a: Automaton, label: Hashable) -> list[Hashable]:
    """Concrete labels covered by a (possibly guarded) label."""
    if not (isinstance(label, tuple) and any(is_guard(part) for part in label)):
        return [label]
    width = len(a.public or ())
    if width > ScaleCaps.EXPLICIT_MAX_PUBLIC:
        raise ScaleCapError("public actions to expand", width, ScaleCaps.EXPLICIT_MAX_PUBLIC)
    result = []
    for mask in range(1 << width):
        concrete = tuple(mask if is_guard(part) else part for part in label)
        if a.admits(label, concrete):
            result.append(concrete)
    return result


def render_letter(a: Automaton, letter: Hashable, name_of: Callable[[int], str]) -> str:
    if not isinstance(letter, tuple):
        return name_of(letter)
    action, mask = letter[0], letter[1]
    text = f"{name_of(action)}|{_mask_names(mask, a.public or (), name_of)}"
    if len(letter) > 2:
        text += f" {int(bool(letter[2]))}"
    return text


def format_automaton(a: Automaton, name_of: Callable[[int], str] = str) -> str:
    lines = [
        f"states {a.n_states}",
        "initial " + " ".join(str(s) for s in sorted(a.initial)),
        "green " + " ".join(str(s) for s in sorted(a.green)),
    ]
    if a.alphabet is not None:
        lines.append("alphabet " + " ".join(name_of(x) for x in a.alphabet))
    rows = set()
    for source, label, target in a.transitions:
        for concrete in explicit_labels(a, label):
            rendered = render_letter(a, concrete, name_of)
            letter, _, flag = rendered.partition(" ")
            rows.add((source, letter, target, flag))
    for source, letter, target, flag in sorted(rows):
        lines.append(f"trans {source} {letter} {target}" + (f" {flag}" if flag else ""))
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, lookup: Optional[Callable[[str], int]] = None,
                    kind: AutomatonKind = AutomatonKind.NBA) -> Automaton:
    """
    Read back an automaton over single-action letters.

    Args:
        text: Output of format_automaton for an action automaton
        lookup: Maps letter names to action ids; defaults to int()
        kind: Kind of the automaton read back

    Raises:
        AutomatonError: On malformed lines or composite letters
    """
    lookup = lookup or int
    fields: dict = {"kind": kind, "initial": (), "green": frozenset(), "alphabet": None}
    transitions = []
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        head, rest = parts[0], parts[1:]
        try:
            if head == "states":
                fields["n_states"] = int(rest[0])
            elif head == "initial":
                fields["initial"] = tuple(int(x) for x in rest)
            elif head == "green":
                fields["green"] = frozenset(int(x) for x in rest)
            elif head == "alphabet":
                fields["alphabet"] = tuple(lookup(x) for x in rest)
            elif head == "trans":
                if "|" in rest[1]:
                    raise AutomatonError("composite letters cannot be read back")
                transitions.append((int(rest[0]), lookup(rest[1]), int(rest[2])))
            else:
                raise AutomatonError(f"unknown directive '{head}'")
        except (IndexError, ValueError, KeyError) as e:
            raise AutomatonError(f"line {number}: cannot parse '{raw}'") from e
    if "n_states" not in fields:
        raise AutomatonError("missing 'states' header")
    return Automaton(transitions=tuple(transitions), **fields)


def dump_dot(a: Automaton, name_of: Callable[[int], str] = str) -> str:
    """Graphviz text for debugging; green states are double circles."""
    lines = ["digraph automaton {", "  rankdir=LR;"]
    for s in range(a.n_states):
        shape = "doublecircle" if s in a.green else "circle"
        lines.append(f'  {s} [shape={shape}, label="{a.state_name(s)}"];')
    for i, s in enumerate(sorted(a.initial)):
        lines.append(f"  init{i} [shape=point]; init{i} -> {s};")
    for source, label, target in a.transitions:
        text = "guard" if a.is_guarded else render_letter(a, label, name_of)
        lines.append(f'  {source} -> {target} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
