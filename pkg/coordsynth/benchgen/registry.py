"""
Name -> generator table for the `gen` command.

Each entry takes the integer parameters of the command line and returns model
text; parsing the text back gives the (Network, SpecPair) of the benchmark.
"""

import logging
import random
from typing import Callable

from coordsynth.benchgen.case_studies import arbiter_text, pr_async_text, pr_sync_text, thermostat_text
from coordsynth.benchgen.examples import BenchmarkError, example_text, running_example_text
from coordsynth.benchgen.reduction import pspace_instance_text, random_complete_nfa
from coordsynth.csp.parser import parse_model
from coordsynth.entity.Network import Network
from coordsynth.entity.SpecPair import SpecPair

logger = logging.getLogger(__name__)


def _pspace(n: int = 3, seed: int = 0, **_) -> str:
    return pspace_instance_text(random_complete_nfa(n, 2, random.Random(seed)))


BENCHMARKS: dict[str, Callable[..., str]] = {
    "example": lambda n=1, **_: example_text(n),
    "running": lambda **_: running_example_text(),
    "thermostat": lambda n=1, **_: thermostat_text(n),
    "arbiter": lambda n=2, **_: arbiter_text(n),
    "pr-sync": lambda **_: pr_sync_text(),
    "pr-async": lambda **_: pr_async_text(),
    "pspace": _pspace,
}


def generate_text(name: str, **params) -> str:
    """
    Model text of benchmark `name`.

    `n` is the example index, thermostat level, arbiter size or NFA state
    count; `seed` picks the random NFA.

    Raises:
        BenchmarkError: Unknown name or parameter out of range
    """
    if name not in BENCHMARKS:
        raise BenchmarkError(f"unknown benchmark '{name}'; choose from {', '.join(BENCHMARKS)}")
    params = {key: value for key, value in params.items() if value is not None}
    text = BENCHMARKS[name](**params)
    logger.debug(f"[MODEL] generated {name} with {params}")
    return text


def generate(name: str, **params) -> tuple[Network, SpecPair]:
    return parse_model(generate_text(name, **params))
