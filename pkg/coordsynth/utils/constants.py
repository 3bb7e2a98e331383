"""
Shared constants for coordsynth.

Caps, defaults and enum vocabularies live here so the pipeline phases,
the CLI and the tests agree on them.
"""

from enum import Enum


# ============================================================================
# Model Constants
# ============================================================================

class ModelKeywords:
    """Reserved words of the model grammar."""
    STOP = "STOP"
    ANY_ACTION = "*"


# ============================================================================
# Scale Caps
# ============================================================================

class ScaleCaps:
    """Desk-scale limits; exceeding one raises ScaleCapError."""
    BDD_MAX_NODES = 50_000_000
    EXPLICIT_MAX_PUBLIC = 12
    EXPLICIT_MAX_CLASSES = 16
    SPEC_MAX_STATES = 1_000_000
    ORACLE_MAX_DEPTH = 6
    ORACLE_MAX_PUBLIC = 3
    ENUMERATE_MAX_STATES = 3
    ENUMERATE_MAX_PUBLIC = 3
    ENUMERATE_LINEAR_MAX_STATES = 6
    ENUMERATE_LINEAR_MAX_PUBLIC = 5
    COUNTER_BIT_BUDGET = 24


# ============================================================================
# Synthesis Defaults
# ============================================================================

class SynthesisDefaults:
    """Defaults for bounded synthesis runs."""
    BOUNDS = (1, 2, 3, 4, 6, 8, 12, 16)
    BUILTIN_SOLVER = "m22"
    EXTERNAL_CLAUSE_THRESHOLD = 2_000_000
    TIMEOUT_SECONDS = None
    JOBS = 1


# ============================================================================
# Enums
# ============================================================================

class _NormalizingEnum(str, Enum):

    @classmethod
    def normalize(cls, value: str) -> str:
        """
        Normalize user input to an enum value.

        Args:
            value: Input string in any case (e.g., "Symbolic", "BOTH")

        Returns:
            The matching enum value

        Raises:
            ValueError: If the value is not recognized
        """
        if not value:
            raise ValueError(f"{cls.__name__} cannot be empty")
        value_lower = value.strip().lower()
        for member in cls:
            if member.value == value_lower:
                return member.value
        raise ValueError(
            f"Invalid {cls.__name__}: '{value}'. "
            f"Must be one of: {', '.join([m.value for m in cls])}"
        )


class BuildMode(_NormalizingEnum):
    """How the specification automaton is constructed."""
    EXPLICIT = "explicit"
    SYMBOLIC = "symbolic"
    BOTH = "both"


class VerdictKind(_NormalizingEnum):
    """Outcome of the independent checker."""
    PASS = "pass"
    DEADLOCK_SAFETY = "deadlock-safety"
    FAIR_LIVENESS = "fair-liveness"


class WitnessKind(_NormalizingEnum):
    """Violation conditions searched by the brute-force tree oracle."""
    MAXIMAL = "A"
    UNFAIR_SUFFIX = "B"
    INFINITE_PATH = "C"


class StateKind(_NormalizingEnum):
    """Shape of a specification automaton state."""
    FAIL = "fail"
    SINK = "sink"
    NORMAL = "normal"


class AutomatonKind(_NormalizingEnum):
    """Acceptance reading of an automaton structure."""
    NBA = "nba"
    UCW = "ucw"
    NFA = "nfa"


class SynthesisStatus(_NormalizingEnum):
    """Outcome of a bounded synthesis run."""
    REALIZABLE = "realizable"
    BOUNDED_UNREALIZABLE = "bounded-unrealizable"


# ============================================================================
# Exit Codes
# ============================================================================

class ExitCode:
    """CLI exit codes."""
    OK = 0
    UNREALIZABLE = 1
    ERROR = 2
