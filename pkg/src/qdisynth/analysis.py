"""Gate-orphan detection, indication classification and cost accounting."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .logic import (
    Codeword,
    DsopCover,
    FactoredExpr,
    Literal,
    Or,
    all_codewords,
    top_level_terms,
)
from .netlist import GateKind, Netlist, build_fixture, eval_netlist, natural_key
from .sim import FALL, RESET, RISE, SET, PhaseTrace, apply_partial, retract_partial, simulate_transaction

DEFAULT_TABLE_MAX_N = 10
ARROW = {RISE: "↑", FALL: "↓"}


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    gate: str
    direction: str
    phase: str
    time: int

    def __str__(self) -> str:
        return f"{self.gate}{ARROW[self.direction]}"

    def to_dict(self) -> dict:
        return {"gate": self.gate, "direction": self.direction, "phase": self.phase, "time": self.time}


@dataclass(frozen=True)
class OrphanReport:
    codeword: Codeword
    acknowledged: tuple[Transition, ...]
    orphans: tuple[Transition, ...]
    first_gate: str | None

    def acknowledged_in(self, phase: str = SET) -> list[Transition]:
        return [t for t in self.acknowledged if t.phase == phase]

    def orphans_in(self, phase: str = SET) -> list[Transition]:
        return [t for t in self.orphans if t.phase == phase]

    def path(self, phase: str = SET) -> str:
        return "-".join(t.gate for t in self.acknowledged_in(phase))

    def orphan_gates(self, phase: str = SET) -> frozenset[str]:
        return frozenset(t.gate for t in self.orphans_in(phase))

    def to_dict(self) -> dict:
        return {
            "codeword": str(self.codeword),
            "rails": [f"X{v}{self.codeword.bit(v)}" for v in range(self.codeword.n, 0, -1)],
            "first_gate": self.first_gate,
            "acknowledged": [t.to_dict() for t in self.acknowledged],
            "orphans": [t.to_dict() for t in self.orphans],
        }


def _order(t: Transition):
    return (t.time, natural_key(t.gate))


def acknowledge(nl: Netlist, trace: PhaseTrace) -> tuple[list[Transition], list[Transition]]:
    """Split a phase's gate transitions into acknowledged and orphaned.

    A transition on a primary output rail is acknowledged by the environment.
    Any other gate transition needs a later, itself acknowledged, transition
    on a consumer gate in the same phase.  Across an isochronic fork one such
    branch covers the rest; a plain fork needs every branch.  Primary-input
    forks are assumed isochronic and never checked.
    """
    fired = {}
    for e in trace.events:
        g = nl.driver.get(e.net)
        if g is not None:
            fired[g.id] = Transition(g.id, e.direction, e.phase, e.time)
    ok: dict[str, bool] = {}
    for g in reversed(nl.topo_order):
        t = fired.get(g.id)
        if t is None:
            continue
        if g.output in nl.output_rails:
            ok[g.id] = True
            continue
        consumers = nl.fanout.get(g.output, ())
        branch = [c.id in fired and fired[c.id].time > t.time and ok[c.id] for c in consumers]
        needs_all = len(consumers) > 1 and g.output not in nl.isochronic
        ok[g.id] = all(branch) if needs_all else any(branch)
    acked = sorted((fired[k] for k, v in ok.items() if v), key=_order)
    orphans = sorted((fired[k] for k, v in ok.items() if not v), key=_order)
    return acked, orphans


def detect_orphans(nl: Netlist, cw: Codeword) -> OrphanReport:
    acked, orphans = [], []
    for trace in simulate_transaction(nl, cw):
        a, o = acknowledge(nl, trace)
        acked += a
        orphans += o
    first = next((t.gate for t in acked if t.phase == SET), None)
    return OrphanReport(cw, tuple(acked), tuple(orphans), first)


def table_row_order(n: int) -> list[Codeword]:
    """Rows as printed in the reference table: all-zero assignment first, X1 fastest."""
    return all_codewords(n)


@dataclass(frozen=True)
class OrphanTable:
    n: int
    rows: tuple[OrphanReport, ...]

    def orphan_rows(self, phase: str | None = None) -> list[OrphanReport]:
        if phase is None:
            return [r for r in self.rows if r.orphans]
        return [r for r in self.rows if r.orphans_in(phase)]

    @property
    def clean(self) -> bool:
        return not self.orphan_rows()


def orphan_summary(nl: Netlist, max_n: int = DEFAULT_TABLE_MAX_N) -> OrphanTable:
    if nl.n > max_n:
        raise EnumerationLimitError(
            f"n={nl.n} exceeds the enumeration cap {max_n}: the table needs all "
            f"2^n = {1 << nl.n} valid codewords"
        )
    return OrphanTable(nl.n, tuple(detect_orphans(nl, cw) for cw in table_row_order(nl.n)))


# --- indication -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    output: str
    rail: str
    codeword: str
    subset: tuple[int, ...]  # variables asserted (set side) or still valid (reset side)
    side: str

    def to_dict(self) -> dict:
        return {"output": self.output, "rail": self.rail, "codeword": self.codeword,
                "subset": list(self.subset), "side": self.side}


@dataclass(frozen=True)
class IndicationClass:
    io_class: str  # strong | weak | early
    early_set: bool
    early_reset: bool
    witnesses: tuple[Witness, ...]

    def to_dict(self) -> dict:
        return {"io_class": self.io_class, "early_set": self.early_set,
                "early_reset": self.early_reset, "witnesses": [w.to_dict() for w in self.witnesses]}


def _set_subsets(n: int, exhaustive: bool) -> list[tuple[int, ...]]:
    """Variables asserted early: every proper subset, or all-but-one."""
    vars_ = range(n, 0, -1)
    if exhaustive:
        return [s for k in range(n) for s in itertools.combinations(vars_, k)]
    return [tuple(v for v in vars_ if v != drop) for drop in vars_]


def _kept_subsets(n: int, exhaustive: bool) -> list[tuple[int, ...]]:
    """Variables still valid while the rest return to spacer."""
    vars_ = range(n, 0, -1)
    if exhaustive:
        return [s for k in range(1, n) for s in itertools.combinations(vars_, k)]
    return [(v,) for v in vars_] if n > 1 else []


def classify_indication(nl: Netlist, exhaustive: bool = False) -> IndicationClass:
    """Check whether any output can switch before the last input does.

    By default only the maximal proper subsets are tried (every input but
    one arrived, or only one still valid during the reset); since all gates
    are positive-unate this finds a witness whenever any other subset would.
    ``exhaustive=True`` tries every proper subset.
    """
    witnesses: list[Witness] = []
    early_set = early_reset = False
    set_subsets = _set_subsets(nl.n, exhaustive)
    kept_subsets = _kept_subsets(nl.n, exhaustive)
    for cw in all_codewords(nl.n):
        values = eval_netlist(nl, cw)
        active = [(p, p.rail1 if v1 else p.rail0) for p, (v1, _) in zip(nl.outputs, values)]
        set_hits: set[str] = set()
        reset_hits: set[str] = set()
        for pair, rail in active:
            for s in set_subsets:
                trace = apply_partial(nl, cw, s)
                if trace.final[rail]:
                    witnesses.append(Witness(pair.name, rail, str(cw), s, SET))
                    set_hits.add(pair.name)
                    break
            for kept in kept_subsets:
                retract = [v for v in range(1, nl.n + 1) if v not in kept]
                trace = retract_partial(nl, cw, retract)
                if not trace.final[rail]:
                    witnesses.append(Witness(pair.name, rail, str(cw), kept, RESET))
                    reset_hits.add(pair.name)
                    break
        names = {p.name for p in nl.outputs}
        early_set |= set_hits == names
        early_reset |= reset_hits == names
    if early_set or early_reset:
        io_class = "early"
    elif witnesses:
        io_class = "weak"
    else:
        io_class = "strong"
    return IndicationClass(io_class, early_set, early_reset, tuple(witnesses))


# --- cost -------------------------------------------------------------------


@dataclass(frozen=True)
class CostReport:
    minterm_count: int
    naive_top_level_terms: int
    underestimates: bool  # top-level terms hide products of sums
    gate_counts: tuple[tuple[str, int], ...]  # ("C3", 8), ("OR7", 1), ...
    literal_count: int
    logic_depth: int

    @property
    def c_elements(self) -> int:
        return sum(k for name, k in self.gate_counts if name.startswith("C"))

    @property
    def or_gates(self) -> int:
        return sum(k for name, k in self.gate_counts if name.startswith("OR"))

    def count(self, kind: str, arity: int) -> int:
        return dict(self.gate_counts).get(f"{kind}{arity}", 0)

    def to_dict(self) -> dict:
        return {
            "minterm_count": self.minterm_count,
            "naive_top_level_terms": self.naive_top_level_terms,
            "underestimates": self.underestimates,
            "gate_counts": dict(self.gate_counts),
            "literal_count": self.literal_count,
            "logic_depth": self.logic_depth,
        }

    def render(self) -> str:
        gates = ", ".join(f"{k} x {name}" for name, k in self.gate_counts)
        flag = "  (underestimates: contains product of sums)" if self.underestimates else ""
        return (
            f"minterms covered:        {self.minterm_count}\n"
            f"top-level product terms: {self.naive_top_level_terms}{flag}\n"
            f"gates:                   {gates or 'none'}\n"
            f"C-elements / OR gates:   {self.c_elements} / {self.or_gates}\n"
            f"literals:                {self.literal_count}\n"
            f"logic depth:             {self.logic_depth}\n"
        )


def _gate_counts(nl: Netlist) -> tuple[tuple[str, int], ...]:
    c = Counter(f"{g.kind.value}{g.arity}" for g in nl.gates)
    return tuple(sorted(c.items(), key=lambda kv: natural_key(kv[0])))


def _depth(nl: Netlist) -> int:
    level: dict[str, int] = {}
    for g in nl.topo_order:
        level[g.output] = 1 + max((level.get(x, 0) for x in g.inputs), default=0)
    return max((level.get(r, 0) for r in nl.output_rails), default=0)


def _merge_leaves(nl: Netlist, net: str) -> list[str]:
    """Inputs of the OR tree that drives ``net`` (the net itself if no OR)."""
    g = nl.driver.get(net)
    if g is None or g.kind is not GateKind.OR:
        return [net]
    out = []
    for x in g.inputs:
        h = nl.driver.get(x)
        nested = h is not None and h.kind is GateKind.OR and len(nl.fanout.get(x, ())) == 1
        out += _merge_leaves(nl, x) if nested else [x]
    return out


def _cone_has_or(nl: Netlist, net: str) -> bool:
    g = nl.driver.get(net)
    if g is None:
        return False
    return g.kind is GateKind.OR or any(_cone_has_or(nl, x) for x in g.inputs)


def _netlist_cost(nl: Netlist, minterms: int | None = None, naive: int | None = None,
                  under: bool | None = None, literals: int | None = None) -> CostReport:
    leaves = [leaf for r in sorted(nl.output_rails) for leaf in _merge_leaves(nl, r)]
    if minterms is None:
        minterms = sum(1 for cw in all_codewords(nl.n) if any(any(v) for v in eval_netlist(nl, cw)))
    if naive is None:
        naive = len(leaves)
    if under is None:
        under = any(_cone_has_or(nl, leaf) for leaf in leaves)
    if literals is None:
        inputs = set(nl.inputs)
        literals = sum(1 for g in nl.gates for x in g.inputs if x in inputs)
        literals += sum(1 for r in nl.output_rails if r in inputs)
    return CostReport(minterms, naive, under, _gate_counts(nl), literals, _depth(nl))


Artifact = Union[Netlist, Sequence[DsopCover], Sequence[FactoredExpr]]


def estimate_cost(artifact: Artifact, or_fanin: int | None = None) -> CostReport:
    """Cost of a cover pair, an expression pair or a netlist.

    ``naive_top_level_terms`` counts only the terms of the outermost sums,
    which is how a factorized cost looks cheap; the gate counts alongside it
    come from the netlist each artifact maps to.
    """
    from .synth import cover_to_netlist, factored_to_netlist

    if isinstance(artifact, Netlist):
        return _netlist_cost(artifact)
    f1, f0 = artifact
    if isinstance(f1, DsopCover):
        n = f1.n
        minterms = sum(1 << (n - len(t.literals)) for c in (f1, f0) for t in c.terms)
        return _netlist_cost(
            cover_to_netlist(f1, f0, or_fanin), minterms, len(f1) + len(f0), False,
            sum(len(t.literals) for c in (f1, f0) for t in c.terms),
        )
    n = max(x.var for e in (f1, f0) for x in e.literals())
    tops = [t for e in (f1, f0) for t in top_level_terms(e)]
    under = any(_contains_or(t) for t in tops)
    minterms = sum(1 for cw in all_codewords(n) if f1.evaluate(cw.active_rails()) or f0.evaluate(cw.active_rails()))
    literals = sum(1 for e in (f1, f0) for _ in e.literals())
    return _netlist_cost(factored_to_netlist(f1, f0, n, or_fanin), minterms, len(tops), under, literals)


def _contains_or(e: FactoredExpr) -> bool:
    if isinstance(e, Literal):
        return False
    return isinstance(e, Or) or any(_contains_or(c) for c in e.children)


# --- reports ----------------------------------------------------------------


def _annotation(report: OrphanReport, phase: str) -> str:
    orphans = report.orphans_in(phase)
    if not orphans:
        return ""
    word = "Orphan" if len(orphans) == 1 else "Orphans"
    return f" ({word} due to {', '.join(map(str, orphans))})"


def render_orphan_table(table: OrphanTable, phase: str = SET) -> str:
    n = table.n
    head = " ".join(f"X{v}{r}" for v in range(n, 0, -1) for r in (1, 0))
    lines = [f"{head}  path ({phase} phase)"]
    for row in table.rows:
        cw = row.codeword
        bits = " ".join(f"{int(cw.bit(v) == r):>3}" for v in range(n, 0, -1) for r in (1, 0))
        lines.append(f"{bits}  {row.path(phase) or '-'}{_annotation(row, phase)}")
    lines.append(f"{len(table.orphan_rows(phase))} of {len(table.rows)} rows with gate orphans")
    return "\n".join(lines) + "\n"


def orphan_table_dict(table: OrphanTable) -> dict:
    return {
        "n": table.n,
        "orphan_rows": [str(r.codeword) for r in table.orphan_rows()],
        "rows": [r.to_dict() for r in table.rows],
    }


TABLE1_CIRCUITS = ("fig3", "fig4", "fig5")


def table1_data(phase: str = SET) -> dict:
    """Per-row paths and orphans for the three built-in 3-input AND circuits."""
    summaries = {name: orphan_summary(build_fixture(name)) for name in TABLE1_CIRCUITS}
    rows = []
    for i, cw in enumerate(table_row_order(3)):
        row = {"rails": {f"X{v}{r}": int(cw.bit(v) == r) for v in (3, 2, 1) for r in (1, 0)}}
        for name, table in summaries.items():
            rep = table.rows[i]
            row[name] = {
                "path": rep.path(phase),
                "first_gate": rep.first_gate,
                "orphans": [t.to_dict() for t in rep.orphans_in(phase)],
            }
        rows.append(row)
    return {"function": "3-input AND", "phase": phase, "circuits": list(TABLE1_CIRCUITS), "rows": rows}


def render_table1(phase: str = SET, fmt: str = "text") -> str:
    data = table1_data(phase)
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    cells = []
    for row in data["rows"]:
        line = [" ".join(f"{row['rails'][k]:>3}" for k in row["rails"])]
        for name in TABLE1_CIRCUITS:
            c = row[name]
            orphans = [f"{t['gate']}{ARROW[t['direction']]}" for t in c["orphans"]]
            note = ""
            if orphans:
                word = "Orphan" if len(orphans) == 1 else "Orphans"
                note = f" ({word} due to {', '.join(orphans)})"
            line.append((c["path"] or "-") + note)
        cells.append(line)
    header = ["X31 X30 X21 X20 X11 X10", "Figure 3 (DIMS)", "Figure 4 (FDIMS)", "Figure 5 (safe)"]
    widths = [max(len(r[i]) for r in cells + [header]) for i in range(len(header))]
    fmt_row = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    out = [f"3-input AND, {phase} phase", fmt_row(header)] + [fmt_row(r) for r in cells]
    if phase == RESET:
        out.append("reset-phase rows are computed by this tool; the reference table covers the set phase only")
    return "\n".join(out) + "\n"
