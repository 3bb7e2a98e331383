"""Base exception for coordsynth."""


class CoordSynthError(Exception):
    """Root of every error raised by coordsynth."""
    pass


class ScaleCapError(CoordSynthError):
    """Raised when an input exceeds a configured desk-scale cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} = {value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap
