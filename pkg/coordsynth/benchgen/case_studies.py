"""
Case-study models: the smart thermostat, the n-process arbiter and the
read/write encodings of synchronous and asynchronous shared-variable synthesis.
"""

from coordsynth.automata.automaton import Automaton
from coordsynth.benchgen.examples import BenchmarkError
from coordsynth.csp.parser import parse_model
from coordsynth.entity.Action import ActionTable
from coordsynth.entity.Network import Network
from coordsynth.entity.SpecPair import SpecPair
from coordsynth.utils.constants import AutomatonKind


# ============================================================================
# Thermostat
# ============================================================================

THERMOSTAT_LIVENESS = {
    "AmbientTemp": "G F JustRight",
    "Interact": "G F switchACOn & G F switchHeatOn",
    "EnergyEfficient": (
        "!F(switchACOn & (!switchACOff U switchHeatOn))"
        " & !F(switchHeatOn & (!switchHeatOff U switchACOn))"
    ),
}


def thermostat_text(level: int) -> str:
    """Heater ||{HeatisOn} Sensor ||{ACisOn} AC; `drift` is the sensor's internal fluctuation."""
    if level not in (1, 2, 3):
        raise BenchmarkError(f"thermostat level must be 1, 2 or 3, got {level}")
    conjuncts = list(THERMOSTAT_LIVENESS.values())[:level]
    liveness = " & ".join(f"({c})" for c in conjuncts)
    return "\n".join([
        f"# smart thermostat, level {level}",
        "public JustRight, Cold, Warm, switchACOff, switchACOn, switchHeatOff, switchHeatOn, HeatisOn, ACisOn;",
        "private drift;",
        "process HeatOff = switchHeatOn -> HeatOn;",
        "process HeatOn  = HeatisOn -> HeatOn | switchHeatOff -> HeatOff;",
        "process JR = JustRight -> JR | HeatisOn -> TW | drift -> TW | ACisOn -> TC | drift -> TC;",
        "process TC = HeatisOn -> JR | drift -> JR | ACisOn -> TC | Cold -> TC;",
        "process TW = ACisOn -> JR | drift -> JR | HeatisOn -> TW | Warm -> TW;",
        "process ACOff = switchACOn -> ACOn;",
        "process ACOn  = ACisOn -> ACOn | switchACOff -> ACOff;",
        "system HeatOff ||{HeatisOn} JR ||{ACisOn} ACOff;",
        "safety_complement universal;",
        f'liveness "{liveness}";',
    ]) + "\n"


def thermostat(level: int) -> tuple[Network, SpecPair]:
    return parse_model(thermostat_text(level))


# ============================================================================
# Arbiter
# ============================================================================

def arbiter_liveness(n: int) -> str:
    mutex = []
    for i in range(n):
        others = " | ".join(f"grant.{j}" for j in range(n) if j != i)
        mutex.append(f"!F(grant.{i} & (!release.{i} U ({others})))")
    starve = [f"G(request.{i} -> F grant.{i})" for i in range(n)]
    fairness = [f"G F request.{i}" for i in range(n)]
    return " & ".join(mutex + starve + fairness)


def arbiter_text(n: int) -> str:
    """n independent request/grant/release agents, interleaved with no synchronization."""
    if n < 2:
        raise BenchmarkError(f"arbiter needs n >= 2, got {n}")
    names = [f"{kind}.{i}" for i in range(n) for kind in ("request", "grant", "release")]
    lines = [f"# arbiter, n = {n}", f"public {', '.join(names)};"]
    for i in range(n):
        lines += [
            f"process P{i} = request.{i} -> P{i}_req;",
            f"process P{i}_req = grant.{i} -> P{i}_use;",
            f"process P{i}_use = release.{i} -> P{i};",
        ]
    lines.append("system " + " ||{} ".join(f"P{i}" for i in range(n)) + ";")
    lines.append("safety_complement universal;")
    lines.append(f'liveness "{arbiter_liveness(n)}";')
    return "\n".join(lines) + "\n"


def arbiter(n: int) -> tuple[Network, SpecPair]:
    return parse_model(arbiter_text(n))


# ============================================================================
# Shared-variable read/write encodings
# ============================================================================

def pr_liveness(asynchronous: bool) -> str:
    """
    Copy property over the alternating write/observe form.

    Every observation of x (a read, or a hidden sample in the asynchronous
    model) is followed at once by the write of the same value, every write is
    followed by an observation, and reads happen infinitely often.
    """
    zero = "(r0 | h0)" if asynchronous else "r0"
    one = "(r1 | h1)" if asynchronous else "r1"
    observe = "(r0 | r1 | h0 | h1)" if asynchronous else "(r0 | r1)"
    return (
        f"G({zero} -> X w0) & G({one} -> X w1)"
        f" & G((w0 | w1) -> X {observe})"
        " & G F (r0 | r1)"
    )


def _pr_text(asynchronous: bool) -> str:
    if asynchronous:
        x0 = "r0 -> X0 | r0 -> X1 | h0 -> X0 | h0 -> X1"
        x1 = "r1 -> X1 | r1 -> X0 | h1 -> X1 | h1 -> X0"
        private = "tau, h0, h1"
    else:
        x0 = "r0 -> X0 | r0 -> X1"
        x1 = "r1 -> X1 | r1 -> X0"
        private = "tau"
    return "\n".join([
        f"# shared-variable copy, {'asynchronous' if asynchronous else 'synchronous'} reads",
        "public r0, r1, w0, w1;",
        f"private {private};",
        "process Xinit = tau -> X0 | tau -> X1;",
        f"process X0 = {x0};",
        f"process X1 = {x1};",
        "process Yinit = w0 -> Y0 | w1 -> Y1;",
        "process Y0 = w0 -> Y0 | w1 -> Y1;",
        "process Y1 = w1 -> Y1 | w0 -> Y0;",
        "system Xinit ||{} Yinit;",
        "safety_complement universal;",
        f'liveness "{pr_liveness(asynchronous)}";',
    ]) + "\n"


def pr_sync_text() -> str:
    return _pr_text(asynchronous=False)


def pr_async_text() -> str:
    return _pr_text(asynchronous=True)


def pr_sync() -> tuple[Network, SpecPair]:
    return parse_model(pr_sync_text())


def pr_async() -> tuple[Network, SpecPair]:
    return parse_model(pr_async_text())


def pr_write_change_monitor(actions: ActionTable) -> Automaton:
    """
    Finite-word automaton accepting words with two write changes between consecutive reads.

    States track the last written value and whether it already changed since
    the latest read; `bad` is absorbing and accepting.
    """
    letters = tuple(range(len(actions)))
    w0, w1 = actions.lookup("w0").id, actions.lookup("w1").id
    reads = {actions.lookup(name).id for name in ("r0", "r1")}
    names = ("fresh", "last0", "last1", "changed0", "changed1", "bad")
    index = {name: i for i, name in enumerate(names)}
    transitions = []
    for name in names:
        for letter in letters:
            if name == "bad":
                target = "bad"
            elif letter in reads:
                target = {"changed0": "last0", "changed1": "last1"}.get(name, name)
            elif letter in (w0, w1):
                value = "0" if letter == w0 else "1"
                if name == "fresh" or name.endswith(value):
                    target = name if name != "fresh" else f"last{value}"
                elif name.startswith("last"):
                    target = f"changed{value}"
                else:
                    target = "bad"
            else:
                target = name
            transitions.append((index[name], letter, index[target]))
    return Automaton(
        kind=AutomatonKind.NFA,
        n_states=len(names),
        initial=(index["fresh"],),
        green=frozenset({index["bad"]}),
        transitions=tuple(transitions),
        alphabet=letters,
        state_names=names,
    )
