"""
Model file parser.

A model declares the action alphabets, the process equations, the system
composition and the specification pair:

    public  a0, a1;
    private b;
    process E  = a0 -> E0 | a1 -> E1;
    process E0 = a0 -> E0;
    process E1 = b  -> E1;
    system  E;
    safety_complement universal;
    liveness "F G !b";
"""

import logging
from collections import deque
from typing import Optional

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from coordsynth.automata.automaton import Automaton
from coordsynth.automata.operations import empty_nfa, universal_nfa
from coordsynth.entity.Action import ActionTable
from coordsynth.entity.Network import Network
from coordsynth.entity.Process import Process
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.ltl.parser import LtlSyntaxError, UnknownActionError, parse_ltl
from coordsynth.utils.constants import AutomatonKind, ModelKeywords
from coordsynth.utils.errors import CoordSynthError

logger = logging.getLogger(__name__)


class ModelSyntaxError(CoordSynthError):
    """Model text does not conform to the grammar."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ModelError(ModelSyntaxError):
    """Well-formed text with a semantic problem (undeclared action, duplicate process, bad sync set)."""
    pass


MODEL_GRAMMAR = r"""
    start: statement*

    ?statement: "public" name_list ";"                         -> public_decl
              | "private" name_list ";"                        -> private_decl
              | "process" NAME "=" alternatives ";"            -> process_decl
              | "system" NAME (composition NAME)* ";"          -> system_decl
              | "safety_complement" safety                     -> safety_decl
              | "liveness" ESCAPED_STRING ";"                  -> liveness_decl

    name_list: NAME ("," NAME)*

    alternatives: alternative ("|" alternative)*
    ?alternative: NAME "->" target                             -> prefix
                | "STOP"                                       -> stop
    ?target: NAME
           | "STOP"                                            -> stop_target

    composition: "||" sync?
    sync: "{" [name_list] "}"

    safety: "universal" ";"                                    -> safety_universal
          | "empty" ";"                                        -> safety_empty
          | "nfa" "{" nfa_item* "}" ";"?                       -> safety_nfa

    ?nfa_item: "states" name_list ";"                          -> nfa_states
             | "initial" name_list ";"                         -> nfa_initial
             | "accepting" name_list ";"                       -> nfa_accepting
             | "trans" NAME letter NAME ";"                    -> nfa_trans

    ?letter: NAME
           | "*"                                               -> any_letter

    NAME: /[A-Za-z_][A-Za-z0-9_.]*/

    COMMENT: /#[^\n]*/
    %import common.ESCAPED_STRING
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_MODEL_PARSER = Lark(MODEL_GRAMMAR, parser="lalr", start="start", propagate_positions=True)


def _error(message: str, token) -> ModelError:
    return ModelError(message, getattr(token, "line", None), getattr(token, "column", None))


class _ModelBuilder:
    """Walks the parse tree in statement order and assembles the model."""

    def __init__(self):
        self.actions = ActionTable()
        self.public: list[int] = []
        self.private: list[int] = []
        self.equations: dict[str, tuple[Token, list[tuple[Optional[Token], Optional[str]]]]] = {}
        self.system: Optional[Tree] = None
        self.safety: Optional[Tree] = None
        self.liveness: Optional[Token] = None

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def build(self, tree: Tree) -> tuple[Network, SpecPair]:
        for statement in tree.children:
            getattr(self, f"_on_{statement.data}")(statement)
        network = self._network()
        spec = self._spec()
        return network, spec

    def _declare(self, names: Tree, bucket: list[int]) -> None:
        for token in names.children:
            if str(token) in self.actions:
                raise _error(f"action '{token}' declared twice", token)
            bucket.append(self.actions.intern(str(token)).id)

    def _on_public_decl(self, statement: Tree) -> None:
        self._declare(statement.children[0], self.public)

    def _on_private_decl(self, statement: Tree) -> None:
        self._declare(statement.children[0], self.private)

    def _on_process_decl(self, statement: Tree) -> None:
        name, alternatives = statement.children
        if str(name) in self.equations or str(name) == ModelKeywords.STOP:
            raise _error(f"duplicate process name '{name}'", name)
        branches = []
        for alternative in alternatives.children:
            if alternative.data == "stop":
                continue
            action, target = alternative.children
            if str(action) not in self.actions:
                raise _error(f"undeclared action '{action}'", action)
            target_name = ModelKeywords.STOP if isinstance(target, Tree) else str(target)
            branches.append((action, target_name))
        self.equations[str(name)] = (name, branches)

    def _on_system_decl(self, statement: Tree) -> None:
        self.system = statement

    def _on_safety_decl(self, statement: Tree) -> None:
        self.safety = statement.children[0]

    def _on_liveness_decl(self, statement: Tree) -> None:
        self.liveness = statement.children[0]

    # ------------------------------------------------------------------
    # Network
    # ------------------------------------------------------------------

    def _agent(self, root: Token) -> Process:
        if str(root) not in self.equations:
            raise _error(f"undefined process '{root}'", root)
        order = [str(root)]
        seen = {str(root)}
        queue = deque(order)
        while queue:
            name = queue.popleft()
            if name == ModelKeywords.STOP:
                continue
            for action, target in self.equations[name][1]:
                if target != ModelKeywords.STOP and target not in self.equations:
                    raise _error(f"undefined process '{target}'", action)
                if target not in seen:
                    seen.add(target)
                    order.append(target)
                    queue.append(target)
        index = {name: i for i, name in enumerate(order)}
        transitions = []
        used = set()
        for name in order:
            if name == ModelKeywords.STOP:
                continue
            for action, target in self.equations[name][1]:
                action_id = self.actions.lookup(str(action)).id
                used.add(action_id)
                transitions.append((index[name], action_id, index[target]))
        return Process(
            name=str(root),
            states=tuple(order),
            initial=0,
            public=tuple(self.actions[a] for a in self.public if a in used),
            private=tuple(self.actions[a] for a in self.private if a in used),
            transitions=tuple(transitions),
        )

    def _network(self) -> Network:
        if self.system is None:
            if not self.equations:
                raise ModelError("model declares no process")
            first = next(iter(self.equations.values()))[0]
            return Network(actions=self.actions, agents=(self._agent(first),), sync_sets=())
        children = self.system.children
        agents = [self._agent(children[0])]
        sync_sets: list[Optional[frozenset[int]]] = []
        accumulated = agents[0].public_ids
        for composition, root in zip(children[1::2], children[2::2]):
            agent = self._agent(root)
            sync = self._sync_set(composition)
            common = accumulated & agent.public_ids
            if sync is not None and not sync <= common:
                bad = sorted(self.actions.name_of(a) for a in sync - common)
                raise _error(f"sync actions {bad} are not public in both operands", root)
            accumulated = (accumulated | agent.public_ids) - (common if sync is None else sync)
            agents.append(agent)
            sync_sets.append(sync)
        return Network(actions=self.actions, agents=tuple(agents), sync_sets=tuple(sync_sets))

    def _sync_set(self, composition: Tree) -> Optional[frozenset[int]]:
        if not composition.children:
            return None
        names = composition.children[0].children[0]
        if names is None:
            return frozenset()
        result = set()
        for token in names.children:
            if str(token) not in self.actions:
                raise _error(f"undeclared action '{token}'", token)
            result.add(self.actions.lookup(str(token)).id)
        return frozenset(result)

    # ------------------------------------------------------------------
    # Specification
    # ------------------------------------------------------------------

    def _spec(self) -> SpecPair:
        letters = tuple(range(len(self.actions)))
        safety_source = "universal"
        if self.safety is None or self.safety.data == "safety_universal":
            safety = universal_nfa(letters)
        elif self.safety.data == "safety_empty":
            safety = empty_nfa(letters)
            safety_source = "empty"
        else:
            safety = self._nfa(self.safety, letters)
            safety_source = "nfa"

        source = "true"
        line, column = 1, 1
        if self.liveness is not None:
            source = str(self.liveness)[1:-1]
            line, column = self.liveness.line, self.liveness.column
        try:
            formula = parse_ltl(source, self.actions)
        except LtlSyntaxError as e:
            raise ModelSyntaxError(f"liveness formula: {e}", line, column) from e
        except UnknownActionError as e:
            raise ModelError(f"liveness formula: {e}", line, column) from e
        return SpecPair(
            safety_complement=safety,
            liveness=formula,
            safety_source=safety_source,
            liveness_source=source,
        )

    def _nfa(self, block: Tree, letters: tuple[int, ...]) -> Automaton:
        states: list[str] = []
        initial: list[str] = []
        accepting: list[str] = []
        raw_transitions = []
        for item in block.children:
            if item.data == "nfa_trans":
                raw_transitions.append(item.children)
                continue
            names = [str(t) for t in item.children[0].children]
            {"nfa_states": states, "nfa_initial": initial, "nfa_accepting": accepting}[item.data].extend(names)
        index = {name: i for i, name in enumerate(states)}
        for name in initial + accepting:
            if name not in index:
                raise ModelError(f"safety automaton state '{name}' not declared")
        transitions = []
        for source, letter, target in raw_transitions:
            for endpoint in (source, target):
                if str(endpoint) not in index:
                    raise _error(f"safety automaton state '{endpoint}' not declared", endpoint)
            if isinstance(letter, Tree):
                chosen = letters
            else:
                if str(letter) not in self.actions:
                    raise _error(f"undeclared action '{letter}'", letter)
                chosen = (self.actions.lookup(str(letter)).id,)
            transitions.extend((index[str(source)], a, index[str(target)]) for a in chosen)
        return Automaton(
            kind=AutomatonKind.NFA,
            n_states=len(states),
            initial=tuple(index[name] for name in initial),
            green=frozenset(index[name] for name in accepting),
            transitions=tuple(transitions),
            alphabet=letters,
            state_names=tuple(states),
        )


def parse_model(text: str) -> tuple[Network, SpecPair]:
    """
    Parse a model file into its agent network and specification pair.

    Args:
        text: Model source in the grammar above

    Returns:
        (network, spec) sharing one global action table

    Raises:
        ModelSyntaxError: On grammar violations (with line and column)
        ModelError: On undeclared actions, duplicate processes or invalid sync sets
    """
    try:
        tree = _MODEL_PARSER.parse(text)
    except UnexpectedInput as e:
        logger.debug(f"[MODEL] syntax error: {e}")
        raise ModelSyntaxError("invalid model", e.line, e.column) from e
    network, spec = _ModelBuilder().build(tree)
    logger.debug(f"[MODEL] parsed {len(network.agents)} agents over {len(network.actions)} actions")
    return network, spec


def parse_coordinator(text: str, actions: ActionTable, sigma: tuple[int, ...]) -> Process:
    """
    Parse a coordinator given as process equations over an existing model's Σ.

    The first equation is the initial state; the result's public alphabet is
    all of Σ, whether or not every action occurs.

    Raises:
        ModelSyntaxError: On grammar violations
        ModelError: On declarations other than processes, or actions outside Σ
    """
    try:
        tree = _MODEL_PARSER.parse(text)
    except UnexpectedInput as e:
        raise ModelSyntaxError("invalid coordinator", e.line, e.column) from e
    builder = _ModelBuilder()
    builder.actions = actions.model_copy(deep=True)
    builder.public = list(sigma)
    allowed = set(sigma)
    for statement in tree.children:
        if statement.data != "process_decl":
            raise ModelError(f"coordinator files contain process equations only, found {statement.data}")
        builder._on_process_decl(statement)
        for alternative in statement.children[1].children:
            if alternative.data == "prefix":
                action = alternative.children[0]
                if builder.actions.lookup(str(action)).id not in allowed:
                    raise _error(f"coordinator action '{action}' is not public in the environment", action)
    if not builder.equations:
        raise ModelError("coordinator file declares no process")
    root = next(iter(builder.equations.values()))[0]
    agent = builder._agent(root)
    return agent.model_copy(update={"public": tuple(actions[a] for a in sigma)})
