from pydantic import BaseModel, ConfigDict, Field


class Action(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    name: str = Field(pattern=r"^[A-Za-z_][A-Za-z0-9_.]*$")


class ActionTable(BaseModel):
    """Global, append-only action table of one model; ids are list positions."""
    names: list[str] = Field(default_factory=list)

    def intern(self, name: str) -> Action:
        if name not in self.names:
            self.names.append(name)
        return Action(id=self.names.index(name), name=name)

    def lookup(self, name: str) -> Action:
        """Return the action named `name`; raises KeyError when undeclared."""
        if name not in self.names:
            raise KeyError(name)
        return Action(id=self.names.index(name), name=name)

    def __getitem__(self, action_id: int) -> Action:
        return Action(id=action_id, name=self.names[action_id])

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def name_of(self, action_id: int) -> str:
        return self.names[action_id]
