from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from coordsynth.utils.constants import BuildMode, ScaleCaps, SynthesisDefaults


class SynthesisConfig(BaseModel):
    """
    Settings of one pipeline invocation.

    Built from command-line flags only; nothing is read from the environment.
    """
    mode: BuildMode = BuildMode.SYMBOLIC
    bounds: tuple[int, ...] = SynthesisDefaults.BOUNDS
    solver: Optional[str] = None
    large_instance_solver: Optional[str] = None
    builtin_solver: str = SynthesisDefaults.BUILTIN_SOLVER
    timeout: Optional[float] = Field(default=SynthesisDefaults.TIMEOUT_SECONDS, gt=0)
    jobs: int = Field(default=SynthesisDefaults.JOBS, ge=1)
    minimize: bool = True
    artifacts_dir: Optional[Path] = None
    node_cap: int = Field(default=ScaleCaps.BDD_MAX_NODES, ge=1)

    @field_validator("bounds")
    @classmethod
    def _ascending(cls, value):
        if not value:
            raise ValueError("bound schedule must be non-empty")
        if any(n < 1 for n in value):
            raise ValueError("bounds must be positive")
        if list(value) != sorted(set(value)):
            raise ValueError("bounds must be strictly ascending")
        return tuple(value)

    @field_validator("mode", mode="before")
    @classmethod
    def _normalize_mode(cls, value):
        return BuildMode.normalize(value) if isinstance(value, str) else value
