"""Unit-delay event-driven simulation of a 4-phase return-to-zero transaction.

Every gate has delay 1.  Input rails switch together at ``t = 0``; a net that
changes at step ``t`` makes its fanout gates re-evaluate, and any resulting
output change lands at ``t + 1``.  All branches of a fork see the change at
the same step.  Events within one step are ordered by net id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .logic import Codeword, CodewordOrSpacer, RailLiteral, Spacer
from .netlist import Netlist, initial_values

SET, RESET = "set", "reset"
RISE, FALL = "rise", "fall"


class SimulationError(RuntimeError):
    pass


class HazardError(SimulationError):
    def __init__(self, net: str, time: int, phase: str):
        self.net, self.time, self.phase = net, time, phase
        wrong = FALL if phase == SET else RISE
        super().__init__(f"hazard: {net} {wrong}s at t={time} during the {phase} phase")


class OscillationError(SimulationError):
    pass


@dataclass(frozen=True)
class SimEvent:
    time: int
    net: str
    direction: str
    phase: str

    def __str__(self) -> str:
        return f"t={self.time} {self.net} {self.direction} {self.phase}"

    def to_dict(self) -> dict:
        return {"time": self.time, "net": self.net, "direction": self.direction, "phase": self.phase}


@dataclass(frozen=True)
class PhaseTrace:
    codeword: CodewordOrSpacer
    phase: str
    events: tuple[SimEvent, ...]
    final: Mapping[str, int] = field(compare=False)
    quiescent: bool = True

    def rises(self) -> list[SimEvent]:
        return [e for e in self.events if e.direction == RISE]

    def event_for(self, net: str) -> SimEvent | None:
        return next((e for e in self.events if e.net == net), None)

    def nets(self) -> list[str]:
        return [e.net for e in self.events]

    def dump(self) -> str:
        return "".join(f"{e}\n" for e in self.events)


def propagate(
    nl: Netlist,
    values: dict[str, int],
    stimulus: Mapping[str, int],
    phase: str,
    codeword: CodewordOrSpacer = Spacer,
) -> PhaseTrace:
    """Apply ``stimulus`` to input rails at t=0 and run to quiescence.

    ``values`` is updated in place and also returned as the trace's final state.
    """
    events: list[SimEvent] = []
    expected = RISE if phase == SET else FALL

    def record(t: int, changes: dict[str, int]) -> set[str]:
        for net in sorted(changes):
            direction = RISE if changes[net] else FALL
            if direction != expected:
                raise HazardError(net, t, phase)
            events.append(SimEvent(t, net, direction, phase))
            values[net] = changes[net]
        return set(changes)

    changed = record(0, {k: v for k, v in stimulus.items() if values[k] != v})
    limit = 4 * max(len(nl.gates), 1)
    t = 0
    while changed:
        if t >= limit:
            raise OscillationError(f"no quiescence after {limit} steps in the {phase} phase")
        t += 1
        todo = {g.id: g for net in changed for g in nl.fanout.get(net, ())}
        changes = {}
        for g in todo.values():
            new = g.next_value([values[x] for x in g.inputs], values[g.output])
            if new != values[g.output]:
                changes[g.output] = new
        changed = record(t, changes)
    return PhaseTrace(codeword, phase, tuple(events), dict(values), True)


def _stimulus(cw: CodewordOrSpacer, subset: Iterable[int] | None, value: int) -> dict[str, int]:
    return {str(lit): value for lit in cw.active_rails(subset)}


def _check_width(nl: Netlist, cw: CodewordOrSpacer) -> None:
    if isinstance(cw, Codeword) and cw.n != nl.n:
        raise ValueError(f"codeword has {cw.n} variables, netlist has {nl.n}")


def simulate_transaction(nl: Netlist, cw: CodewordOrSpacer) -> tuple[PhaseTrace, PhaseTrace]:
    """Spacer -> ``cw`` (set phase) -> spacer (reset phase).

    Raises :class:`SimulationError` if a net moves against the phase
    direction or if the reset leaves any net high.
    """
    _check_width(nl, cw)
    values = initial_values(nl)
    set_trace = propagate(nl, values, _stimulus(cw, None, 1), SET, cw)
    reset_trace = propagate(nl, values, _stimulus(cw, None, 0), RESET, cw)
    stuck = sorted(net for net, v in values.items() if v)
    if stuck:
        raise SimulationError(f"return-to-zero incomplete: {', '.join(stuck)} still high")
    return set_trace, reset_trace


def apply_partial(nl: Netlist, cw: Codeword, subset: Iterable[int]) -> PhaseTrace:
    """Set phase with only the rails of variables in ``subset`` asserted."""
    _check_width(nl, cw)
    subset = set(subset)
    if not subset <= set(range(1, nl.n + 1)):
        raise ValueError(f"subset {sorted(subset)} not within 1..{nl.n}")
    return propagate(nl, initial_values(nl), _stimulus(cw, subset, 1), SET, cw)


def retract_partial(nl: Netlist, cw: Codeword, subset: Iterable[int]) -> PhaseTrace:
    """Settle on ``cw``, then return only the variables in ``subset`` to spacer."""
    _check_width(nl, cw)
    values = initial_values(nl)
    propagate(nl, values, _stimulus(cw, None, 1), SET, cw)
    return propagate(nl, values, _stimulus(cw, set(subset), 0), RESET, cw)


def parse_rails(nl: Netlist, text: str) -> frozenset[RailLiteral]:
    """Rail-level stimulus such as ``X30,X20,X11``."""
    names = [x for x in text.replace(" ", ",").split(",") if x]
    rails = frozenset(RailLiteral.parse(x) for x in names)
    bad = [str(x) for x in rails if x.var > nl.n]
    if bad:
        raise ValueError(f"rails {bad} exceed n={nl.n}")
    return rails


def simulate_rails(nl: Netlist, rails: frozenset[RailLiteral]) -> tuple[PhaseTrace, PhaseTrace]:
    """Transaction driven by an explicit rail set (may be invalid or partial)."""
    values = initial_values(nl)
    set_trace = propagate(nl, values, {str(r): 1 for r in rails}, SET)
    reset_trace = propagate(nl, values, {str(r): 0 for r in rails}, RESET)
    return set_trace, reset_trace
