from coordsynth.csp.compose import flatten_network
from coordsynth.csp.parser import parse_coordinator
from coordsynth.entity.Process import Process


def sigma_of(env: Process):
    """Σ of an environment as Action objects ordered by id."""
    return tuple(sorted(env.public, key=lambda a: a.id))


def machine(network, equations: str) -> Process:
    """A coordinator over the network's Σ from `process ...;` equations."""
    env = flatten_network(network)
    return parse_coordinator(equations, network.actions, tuple(sorted(env.public_ids)))
