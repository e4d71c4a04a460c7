"""Gate-level dual-rail netlists: data model, checks, evaluation, fixtures, JSON."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .logic import Codeword, CodewordOrSpacer, RailLiteral


class GateKind(str, Enum):
    C = "C"
    OR = "OR"


@dataclass(frozen=True)
class Gate:
    id: str
    kind: GateKind
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def next_value(self, inputs: Sequence[int], current: int) -> int:
        """Output after the gate settles; a C-element holds on mixed inputs."""
        if self.kind is GateKind.OR:
            return int(any(inputs))
        if all(inputs):
            return 1
        if not any(inputs):
            return 0
        return current


@dataclass(frozen=True)
class OutputPair:
    name: str
    rail1: str
    rail0: str


@dataclass(frozen=True)
class Net:
    id: str
    driver: str | None  # gate id, "input", or None when undriven
    fanout: tuple[str, ...]
    isochronic: bool


def input_rail_names(n: int) -> tuple[str, ...]:
    return tuple(str(RailLiteral(v, r)) for v in range(n, 0, -1) for r in (1, 0))


def natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


@dataclass(frozen=True)
class Netlist:
    """Immutable circuit over ``n`` dual-rail input variables.

    Nets are implicit: the input rails ``X<v><r>`` plus every gate output.
    ``isochronic`` names the fork nets that deliver a transition to all their
    branches at once.
    """

    n: int
    gates: tuple[Gate, ...]
    outputs: tuple[OutputPair, ...]
    isochronic: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "isochronic", frozenset(self.isochronic))

    @cached_property
    def inputs(self) -> tuple[str, ...]:
        return input_rail_names(self.n)

    @cached_property
    def gate_by_id(self) -> dict[str, Gate]:
        return {g.id: g for g in self.gates}

    @cached_property
    def driver(self) -> dict[str, Gate]:
        return {g.output: g for g in self.gates}

    @cached_property
    def fanout(self) -> dict[str, tuple[Gate, ...]]:
        out: dict[str, list[Gate]] = {}
        for g in self.gates:
            for net in dict.fromkeys(g.inputs):
                out.setdefault(net, []).append(g)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def output_rails(self) -> frozenset[str]:
        return frozenset(r for p in self.outputs for r in (p.rail1, p.rail0))

    @cached_property
    def nets(self) -> dict[str, Net]:
        ids = list(self.inputs) + [g.output for g in self.gates]
        ids += [net for g in self.gates for net in g.inputs]
        ids += [r for p in self.outputs for r in (p.rail1, p.rail0)]
        inputs = set(self.inputs)
        nets = {}
        for net in dict.fromkeys(ids):
            drv = "input" if net in inputs else (self.driver[net].id if net in self.driver else None)
            nets[net] = Net(
                net, drv, tuple(g.id for g in self.fanout.get(net, ())), net in self.isochronic
            )
        return nets

    @cached_property
    def topo_order(self) -> tuple[Gate, ...]:
        """Gates in dependency order; raises ``ValueError`` on a cycle."""
        order, state = [], {}

        def visit(g: Gate, stack: list[str]):
            st = state.get(g.id)
            if st == 2:
                return
            if st == 1:
                raise ValueError("cycle through " + " -> ".join(stack + [g.id]))
            state[g.id] = 1
            for net in g.inputs:
                if net in self.driver:
                    visit(self.driver[net], stack + [g.id])
            state[g.id] = 2
            order.append(g)

        for g in self.gates:
            visit(g, [])
        return tuple(order)

    def count(self, kind: GateKind, arity: int | None = None) -> int:
        return sum(1 for g in self.gates if g.kind is kind and (arity is None or g.arity == arity))


@dataclass(frozen=True)
class Diagnostic:
    code: str  # cycle | undriven | multiple-drivers | arity | duplicate-id | dangling | ...
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.subject}: {self.message}"


def validate(nl: Netlist) -> list[Diagnostic]:
    """Structural checks; an empty list means the netlist is well formed."""
    diags: list[Diagnostic] = []
    inputs = set(nl.inputs)
    seen_ids: set[str] = set()
    drivers: dict[str, str] = {}
    for g in nl.gates:
        if g.id in seen_ids:
            diags.append(Diagnostic("duplicate-id", g.id, "gate id used more than once"))
        seen_ids.add(g.id)
        if g.arity < 2:
            diags.append(Diagnostic("arity", g.id, f"{g.kind.value} gate has arity {g.arity} < 2"))
        if len(set(g.inputs)) != g.arity:
            diags.append(Diagnostic("repeated-input", g.id, "same net connected twice"))
        if g.output in inputs:
            diags.append(Diagnostic("multiple-drivers", g.output, f"primary input driven by {g.id}"))
        elif g.output in drivers:
            diags.append(
                Diagnostic("multiple-drivers", g.output, f"driven by {drivers[g.output]} and {g.id}")
            )
        drivers.setdefault(g.output, g.id)
    for g in nl.gates:
        for net in g.inputs:
            if net not in inputs and net not in drivers:
                diags.append(Diagnostic("undriven", net, f"input of {g.id} has no driver"))
    for p in nl.outputs:
        for net in (p.rail1, p.rail0):
            if net not in inputs and net not in drivers:
                diags.append(Diagnostic("undriven", net, f"output rail of {p.name} has no driver"))
    try:
        nl.topo_order
    except ValueError as exc:
        diags.append(Diagnostic("cycle", str(exc).split()[-1], str(exc)))
    for g in nl.gates:
        if g.output not in nl.fanout and g.output not in nl.output_rails:
            diags.append(Diagnostic("dangling", g.output, f"output of {g.id} drives nothing"))
    for net in sorted(nl.isochronic):
        if net not in inputs and net not in drivers:
            diags.append(Diagnostic("unknown-net", net, "isochronic flag on an undeclared net"))
    return diags


class NetlistError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(map(str, diagnostics)))


def check(nl: Netlist) -> Netlist:
    diags = validate(nl)
    if diags:
        raise NetlistError(diags)
    return nl


def initial_values(nl: Netlist) -> dict[str, int]:
    return dict.fromkeys(nl.nets, 0)


def eval_netlist(nl: Netlist, cw: CodewordOrSpacer) -> tuple[tuple[int, int], ...]:
    """Zero-delay settle from the all-zero (spacer) state.

    Returns ``(rail1, rail0)`` for every output pair, in declaration order.
    """
    if isinstance(cw, Codeword) and cw.n != nl.n:
        raise ValueError(f"codeword has {cw.n} variables, netlist has {nl.n}")
    values = initial_values(nl)
    for lit in cw.active_rails():
        values[str(lit)] = 1
    order = nl.topo_order
    for _ in range(2 * max(len(order), 1)):
        changed = False
        for g in order:
            new = g.next_value([values[x] for x in g.inputs], values[g.output])
            if new != values[g.output]:
                values[g.output] = new
                changed = True
        if not changed:
            break
    else:
        raise RuntimeError("netlist evaluation did not converge")
    return tuple((values[p.rail1], values[p.rail0]) for p in nl.outputs)


# --- construction helpers ---------------------------------------------------


class NetlistBuilder:
    """Allocates gate ids ``C<k>`` / ``OR<k>`` in creation order."""

    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = []
        self._counters = {GateKind.C: 0, GateKind.OR: 0}

    def add(self, kind: GateKind, inputs: Sequence[str], output: str | None = None) -> str:
        self._counters[kind] += 1
        gid = f"{kind.value}{self._counters[kind]}"
        self.gates.append(Gate(gid, kind, tuple(inputs), output or gid))
        return output or gid

    def or_merge(self, inputs: Sequence[str], output: str, fanin: int | None = None) -> str:
        """OR together ``inputs`` onto ``output``; a fan-in cap builds a tree."""
        inputs = list(inputs)
        if len(inputs) == 1:
            raise ValueError("or_merge needs at least two inputs")
        if fanin is not None and fanin < 2:
            raise ValueError("OR fan-in cap must be at least 2")
        while fanin is not None and len(inputs) > fanin:
            level = []
            for i in range(0, len(inputs), fanin):
                chunk = inputs[i:i + fanin]
                level.append(chunk[0] if len(chunk) == 1 else self.add(GateKind.OR, chunk))
            inputs = level
        return self.add(GateKind.OR, inputs, output)

    def build(self, outputs: Iterable[OutputPair], extra_isochronic: Iterable[str] = ()) -> Netlist:
        fan: dict[str, int] = {}
        for g in self.gates:
            for net in set(g.inputs):
                fan[net] = fan.get(net, 0) + 1
        forks = {net for net, k in fan.items() if k > 1}
        return Netlist(self.n, tuple(self.gates), tuple(outputs), frozenset(forks) | set(extra_isochronic))


# --- golden circuits for the 3-input AND ------------------------------------


def _fig3(or_fanin: int | None) -> Netlist:
    b = NetlistBuilder(3)
    b.add(GateKind.C, ["X31", "X21", "X11"], "f1")
    merged = []
    for idx in range(7):
        lits = [f"X{v}{(idx >> (v - 1)) & 1}" for v in (3, 2, 1)]
        merged.append(b.add(GateKind.C, lits))
    b.or_merge(merged, "f0", or_fanin)
    return b.build([OutputPair("f", "f1", "f0")])


def _fig4(or_fanin: int | None) -> Netlist:
    gates = [
        Gate("C1", GateKind.C, ("X31", "X21", "X11"), "f1"),
        Gate("OR1", GateKind.OR, ("X20", "X21"), "OR1"),
        Gate("OR2", GateKind.OR, ("X30", "X31"), "isf"),
        Gate("C2", GateKind.C, ("isf", "OR1", "X10"), "C2"),
        Gate("C3", GateKind.C, ("isf", "X20", "X11"), "C3"),
        Gate("C4", GateKind.C, ("X30", "X21", "X11"), "C4"),
    ]
    if or_fanin is None or or_fanin >= 3:
        gates.append(Gate("OR3", GateKind.OR, ("C2", "C3", "C4"), "f0"))
    else:
        gates += [
            Gate("OR3", GateKind.OR, ("C2", "C3"), "OR3"),
            Gate("OR4", GateKind.OR, ("OR3", "C4"), "f0"),
        ]
    return _with_forks(3, gates)


def _fig5(or_fanin: int | None) -> Netlist:
    b = NetlistBuilder(3)
    b.add(GateKind.C, ["X31", "X21", "X11"], "f1")
    forks = [b.add(GateKind.C, pair, k) for pair, k in
             ((["X30", "X20"], "k1"), (["X30", "X21"], "k2"), (["X31", "X20"], "k3"))]
    leaves = [b.add(GateKind.C, ["X31", "X21", "X10"])]
    for k in forks:
        leaves += [b.add(GateKind.C, [k, "X10"]), b.add(GateKind.C, [k, "X11"])]
    b.or_merge(leaves, "f0", or_fanin)
    return b.build([OutputPair("f", "f1", "f0")])


def _with_forks(n: int, gates: list[Gate]) -> Netlist:
    b = NetlistBuilder(n)
    b.gates = gates
    return b.build([OutputPair("f", "f1", "f0")])


FIXTURES = {"fig3": _fig3, "fig4": _fig4, "fig5": _fig5}


def build_fixture(name: str, or_fanin: int | None = None) -> Netlist:
    """Hand-entered 3-input AND circuits: DIMS (fig3), factorized (fig4), safe (fig5)."""
    try:
        return FIXTURES[name](or_fanin)
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


# --- serialization ----------------------------------------------------------


def to_dict(nl: Netlist) -> dict:
    return {
        "n": nl.n,
        "inputs": list(nl.inputs),
        "outputs": [{"name": p.name, "rail1": p.rail1, "rail0": p.rail0} for p in nl.outputs],
        "gates": [
            {"id": g.id, "kind": g.kind.value, "arity": g.arity, "inputs": list(g.inputs), "output": g.output}
            for g in nl.gates
        ],
        "nets": [{"id": net.id, "isochronic": net.isochronic} for net in nl.nets.values()],
    }


def render_netlist(nl: Netlist) -> str:
    return json.dumps(to_dict(nl), indent=2) + "\n"


def from_dict(data: dict) -> Netlist:
    try:
        n = int(data["n"])
        gates = []
        for g in data["gates"]:
            gate = Gate(g["id"], GateKind(g["kind"]), tuple(g["inputs"]), g["output"])
            if "arity" in g and g["arity"] != gate.arity:
                raise ValueError(f"gate {gate.id}: arity {g['arity']} != {gate.arity} inputs")
            gates.append(gate)
        outputs = tuple(OutputPair(o["name"], o["rail1"], o["rail0"]) for o in data["outputs"])
        iso = frozenset(x["id"] for x in data.get("nets", ()) if x.get("isochronic"))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed netlist document: missing or bad field {exc}") from None
    nl = Netlist(n, tuple(gates), outputs, iso)
    if "inputs" in data and list(data["inputs"]) != list(nl.inputs):
        raise ValueError(f"inputs {data['inputs']} do not match n={n}")
    return nl


def parse_netlist(text: str) -> Netlist:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    return from_dict(data)


# --- structural comparison --------------------------------------------------


def canonical_structure(nl: Netlist):
    """Name-free description: each output rail expanded as a gate tree.

    Two netlists with equal canonical structure differ only in gate and net
    names.  Fork sharing is recorded as the multiset of gate signatures.
    """
    memo: dict[str, object] = {}

    def sig(net: str):
        if net in memo:
            return memo[net]
        g = nl.driver.get(net)
        s = ("in", net) if g is None else (g.kind.value, tuple(sorted(sig(x) for x in g.inputs)))
        memo[net] = s
        return s

    rails = tuple((p.name, sig(p.rail1), sig(p.rail0)) for p in nl.outputs)
    gate_sigs = tuple(sorted(sig(g.output) for g in nl.gates))
    return rails, gate_sigs
