import functools
import logging
import time
from typing import Callable

from coordsynth.synth_flow.flow_config.SynthFlowState import SynthFlowState
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


def phase(name: str) -> Callable:
    """
    Wrap a pipeline node: log the invocation, time it, and tag failures with the phase.

    The node returns a partial state update; its wall time is merged into
    `timings` under `name`.
    """
    def decorate(node: Callable[[SynthFlowState], dict]) -> Callable[[SynthFlowState], dict]:
        @functools.wraps(node)
        def run(state: SynthFlowState) -> dict:
            logger.info(f"[INVOKE][{node.__name__}]")
            started = time.perf_counter()
            try:
                update = node(state)
            except CoordSynthError as e:
                e.phase = name
                logger.error(f"[ERROR][{name}] {e}")
                raise
            update["timings"] = {**state.timings, name: time.perf_counter() - started}
            return update
        return run
    return decorate
