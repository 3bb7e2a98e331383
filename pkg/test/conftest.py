"""
Shared fixtures: parsed illustrative examples and parsed model text.

Heavy case-study runs carry the `slow` marker; deselect them with
`pytest -m "not slow"`.
"""
import pytest

from coordsynth.benchgen.examples import example, running_example
from coordsynth.csp.compose import flatten_network
from coordsynth.csp.parser import parse_model


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: case-study runs on the SAT back-end")


@pytest.fixture
def load_example():
    """k -> (network, spec, env) for the illustrative examples 0..5."""
    def load(k: int):
        network, spec = example(k)
        return network, spec, flatten_network(network)
    return load


@pytest.fixture
def running():
    network, spec = running_example()
    return network, spec, flatten_network(network)


@pytest.fixture
def load_text():
    """Model text -> (network, spec, env)."""
    def load(text: str):
        network, spec = parse_model(text)
        return network, spec, flatten_network(network)
    return load
