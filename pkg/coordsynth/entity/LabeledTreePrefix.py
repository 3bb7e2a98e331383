from typing import Optional

from pydantic import BaseModel, model_validator


class LabeledTreePrefix(BaseModel):
    """
    The first `depth` levels of a full Σ-tree labeled with subsets of Σ.

    Nodes are tuples of Σ action ids. `machine_states`, when present, records
    the state of the generating coordinator at each reachable node so that
    oracles can close lassos.
    """
    alphabet: tuple[int, ...]
    depth: int
    labels: dict[tuple[int, ...], frozenset[int]]
    machine_states: Optional[dict[tuple[int, ...], int]] = None

    @model_validator(mode="after")
    def _check_full(self):
        expected = 0
        for length in range(self.depth + 1):
            expected += len(self.alphabet) ** length
        if len(self.labels) != expected:
            raise ValueError(f"tree prefix has {len(self.labels)} nodes, a full tree needs {expected}")
        for node in self.labels:
            if node and node[:-1] not in self.labels:
                raise ValueError(f"node {node} has no parent")
        return self

    def label(self, node: tuple[int, ...]) -> frozenset[int]:
        return self.labels[node]
