"""
The six illustrative environments and the fulltree running example.

Examples 0-5 share the specification "finitely many b actions" with no
finite maximal computation allowed: φ_L = F G !b, φ_S = ∅.
"""

from coordsynth.csp.parser import parse_model
from coordsynth.entity.Network import Network
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.utils.errors import CoordSynthError


class BenchmarkError(CoordSynthError):
    """Generator parameters out of range, or an input automaton of the wrong shape."""
    pass


_EXAMPLE_EQUATIONS = {
    0: ["E  = a0 -> E0 | a1 -> STOP", "E0 = a0 -> E0"],
    1: ["E  = a0 -> E0 | a1 -> E1", "E0 = a0 -> E0", "E1 = b -> E1"],
    2: ["E  = a0 -> E0 | a0 -> E1", "E0 = a0 -> E0", "E1 = b -> E1"],
    3: ["E  = a0 -> E0 | a0 -> E1", "E0 = a0 -> E0", "E1 = b -> E1 | a0 -> E0"],
    4: ["E  = a0 -> E0 | a0 -> E1", "E0 = a0 -> E0", "E1 = a1 -> E1"],
    5: ["E  = a0 -> E0", "E0 = b -> E"],
}


def example_text(k: int) -> str:
    if k not in _EXAMPLE_EQUATIONS:
        raise BenchmarkError(f"example index must be 0..5, got {k}")
    lines = [f"# example {k}", "public a0, a1;", "private b;"]
    lines += [f"process {equation};" for equation in _EXAMPLE_EQUATIONS[k]]
    lines += ["system E;", "safety_complement universal;", 'liveness "F G !b";']
    return "\n".join(lines) + "\n"


def running_example_text() -> str:
    return "\n".join([
        "# fulltree running example",
        "public a0, a1;",
        "private b0, b1;",
        "process E  = a0 -> STOP | a0 -> E0 | b0 -> E1;",
        "process E0 = b1 -> E0;",
        "process E1 = a1 -> E1;",
        "system E;",
        "safety_complement universal;",
        'liveness "G F a1";',
    ]) + "\n"


def example(k: int) -> tuple[Network, SpecPair]:
    return parse_model(example_text(k))


def running_example() -> tuple[Network, SpecPair]:
    return parse_model(running_example_text())


def running_example_coordinator(network: Network) -> Process:
    """The valid tree of the running example read as a process: M = a1 -> M."""
    a1 = network.actions.lookup("a1")
    sigma = tuple(sorted((a for agent in network.agents for a in agent.public), key=lambda a: a.id))
    return Process(name="M", states=("M",), initial=0, public=sigma, private=(),
                   transitions=((0, a1.id, 0),))
