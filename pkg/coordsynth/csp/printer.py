"""Print processes and models back in the model grammar."""

import re

from coordsynth.csp.parser import ModelError
from coordsynth.entity.Network import Network
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.ltl.formula import format_formula
from coordsynth.utils.constants import ModelKeywords

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


def _state_names(p: Process, prefix: str) -> list[str]:
    names = list(p.states)
    if all(_IDENTIFIER.match(n) for n in names) and len(set(names)) == len(names):
        return names
    return [prefix if i == p.initial else f"{prefix}{i}" for i in range(len(names))]


def _equations(p: Process, prefix: str) -> list[tuple[str, str]]:
    names = _state_names(p, prefix)
    order = [p.initial] + [s for s in range(len(names)) if s != p.initial]
    result = []
    for s in order:
        if names[s] == ModelKeywords.STOP:
            continue
        branches = []
        for action, target in p.outgoing(s):
            branches.append(f"{p.action_name(action)} -> {names[target]}")
        body = " | ".join(branches) if branches else "STOP"
        result.append((names[s], f"process {names[s]} = {body};"))
    return result


def format_process(p: Process, prefix: str = "M") -> str:
    """
    Equational form, initial state first, e.g. `process M = a0 -> M;`.

    States with no outgoing transition print as STOP targets; state names that
    are not identifiers are replaced by `prefix`, `prefix1`, ...
    """
    return "\n".join(line for _, line in _equations(p, prefix))


def format_model(network: Network, spec: SpecPair) -> str:
    """Full model text: declarations, equations, system, specification."""
    table = network.actions
    public = sorted({a.id for agent in network.agents for a in agent.public})
    private = sorted({a.id for agent in network.agents for a in agent.private} - set(public))
    lines = []
    if public:
        lines.append(f"public {', '.join(table.name_of(a) for a in public)};")
    if private:
        lines.append(f"private {', '.join(table.name_of(a) for a in private)};")
    emitted: dict[str, str] = {}
    for agent in network.agents:
        for name, line in _equations(agent, agent.name):
            if name not in emitted:
                emitted[name] = line
                lines.append(line)
            elif emitted[name] != line:
                raise ModelError(f"process {name} has different equations in two agents")

    system = network.agents[0].name
    for agent, sync in zip(network.agents[1:], network.sync_sets):
        if sync is None:
            system += f" || {agent.name}"
        else:
            system += " ||{" + ",".join(table.name_of(a) for a in sorted(sync)) + "} " + agent.name
    lines.append(f"system {system};")

    lines.append(_format_safety(spec, table.name_of))
    lines.append(f'liveness "{format_formula(spec.liveness, table.name_of)}";')
    return "\n".join(lines) + "\n"


def _format_safety(spec: SpecPair, name_of) -> str:
    if spec.safety_source in ("universal", "empty"):
        return f"safety_complement {spec.safety_source};"
    nfa = spec.safety_complement
    names = list(nfa.state_names) if nfa.state_names else [f"r{i}" for i in range(nfa.n_states)]
    body = [f"  states {', '.join(names)};"]
    if nfa.initial:
        body.append(f"  initial {', '.join(names[s] for s in nfa.initial)};")
    if nfa.green:
        body.append(f"  accepting {', '.join(names[s] for s in sorted(nfa.green))};")
    for source, letter, target in sorted(nfa.transitions):
        body.append(f"  trans {names[source]} {name_of(letter)} {names[target]};")
    return "safety_complement nfa {\n" + "\n".join(body) + "\n}"
