from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, field_validator


class Trace(BaseModel):
    """
    A finite trace, or a lasso when `loop` is set.

    Actions are global action ids; the lasso reads prefix then loop forever.
    """
    model_config = ConfigDict(frozen=True)

    prefix: tuple[int, ...] = ()
    loop: Optional[tuple[int, ...]] = None

    @field_validator("loop")
    @classmethod
    def _loop_not_empty(cls, value):
        if value is not None and len(value) == 0:
            raise ValueError("lasso loop must be non-empty")
        return value

    @property
    def is_lasso(self) -> bool:
        return self.loop is not None

    def letter(self, position: int) -> int:
        """Action at `position` of the infinite word (lassos only)."""
        if position < len(self.prefix):
            return self.prefix[position]
        return self.loop[(position - len(self.prefix)) % len(self.loop)]

    def render(self, name_of: Callable[[int], str]) -> str:
        head = ", ".join(name_of(a) for a in self.prefix)
        if self.loop is None:
            return f"({head})"
        body = ", ".join(name_of(a) for a in self.loop)
        return f"{head} ; ( {body} )^w"
