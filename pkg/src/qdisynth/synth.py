"""Three ways to turn a Boolean function into a dual-rail netlist.

* :func:`synth_dims` - one C-element per minterm, OR-merged per rail.
* :func:`synth_fdims` - factorized DIMS.  The original method comes with a
  single worked example and no general algorithm; :func:`fdims_factorize` is a
  documented reconstruction that reproduces that example and is best effort
  elsewhere.  Its output is expected to contain gate orphans.
* :func:`synth_safe` - pairs minterms that differ in one variable, pulling the
  shared literals into a C-element that forks isochronically into one 2-input
  C-element per rail of the differing variable.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .logic import (
    MAX_INPUTS,
    And,
    BooleanFunction,
    DsopCover,
    FactoredExpr,
    Literal,
    RailLiteral,
    conj,
    disj,
    dual_rail_cover,
    top_level_terms,
)
from .netlist import GateKind, Netlist, NetlistBuilder, OutputPair

MAX_N_ENV = "QDISYNTH_MAX_N"
DEFAULT_MAX_N = 12


class SynthesisError(ValueError):
    pass


def max_inputs() -> int:
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise SynthesisError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from None
    return max(1, min(value, MAX_INPUTS))


def explosion_message(n: int, cap: int) -> str:
    return (
        f"n={n} exceeds the cap of {cap}: minterm-based synthesis enumerates "
        f"2^n = {1 << n} product terms, and the input space explodes with n"
    )


def _check_synthesizable(f: BooleanFunction, max_n: int | None) -> None:
    cap = max_inputs() if max_n is None else max_n
    if f.n > cap:
        raise SynthesisError(explosion_message(f.n, cap))
    if f.is_constant:
        raise SynthesisError(
            f"constant-{f.bits[0]} function: the rail with an empty cover never "
            "rises, so the return-to-zero handshake cannot complete"
        )


def _drive_rail(b: NetlistBuilder, leaves: list[str], rail: str, or_fanin: int | None) -> str:
    """Connect leaf nets to an output rail; returns the net that carries it."""
    if len(leaves) == 1:
        return leaves[0]
    return b.or_merge(leaves, rail, or_fanin)


def _rename_output(b: NetlistBuilder, net: str, rail: str) -> str:
    """Let the gate producing ``net`` drive ``rail`` directly."""
    if any(net in g.inputs for g in b.gates):
        raise AssertionError(f"{net} drives an output rail and internal gates")
    for i, g in enumerate(b.gates):
        if g.output == net:
            b.gates[i] = type(g)(g.id, g.kind, g.inputs, rail)
            return rail
    return net  # primary input: wire alias


# --- DIMS -------------------------------------------------------------------


def cover_to_netlist(f1: DsopCover, f0: DsopCover, or_fanin: int | None = None) -> Netlist:
    """One C-element per product term; single-literal terms stay wires."""
    b = NetlistBuilder(f1.n)
    rails = {}
    for cover, rail in ((f1, "f1"), (f0, "f0")):
        leaves = []
        for term in cover.terms:
            lits = [str(x) for x in term.sorted_literals()]
            leaves.append(lits[0] if len(lits) == 1 else b.add(GateKind.C, lits))
        if not leaves:
            raise SynthesisError(f"rail {rail} has an empty cover")
        if len(leaves) == 1:
            rails[rail] = _rename_output(b, leaves[0], rail)
        else:
            rails[rail] = _drive_rail(b, leaves, rail, or_fanin)
    return b.build([OutputPair("f", rails["f1"], rails["f0"])])


def synth_dims(f: BooleanFunction, or_fanin: int | None = None, max_n: int | None = None) -> Netlist:
    _check_synthesizable(f, max_n)
    return cover_to_netlist(*dual_rail_cover(f), or_fanin=or_fanin)


# --- FDIMS reconstruction ---------------------------------------------------


def _lit_key(lit: RailLiteral):
    return (lit.var, lit.rail)


def _cross_product(terms: Sequence[frozenset[RailLiteral]]) -> FactoredExpr | None:
    """``prod(Xv0 + Xv1) * common`` if ``terms`` enumerate every rail combination."""
    common = frozenset.intersection(*terms)
    varying = sorted({lit.var for t in terms for lit in t - common}, reverse=True)
    if not varying or len(terms) != 1 << len(varying) or len(set(terms)) != len(terms):
        return None
    if any({lit.var for lit in t - common} != set(varying) for t in terms):
        return None
    factors = [disj(Literal(RailLiteral(v, 0)), Literal(RailLiteral(v, 1))) for v in varying]
    return conj(*factors, *(Literal(x) for x in sorted(common, key=lambda x: -x.var)))


def _factor_terms(terms: list[frozenset[RailLiteral]]) -> list[FactoredExpr | None]:
    """Factor a sum of products; ``None`` stands for the empty (true) product."""
    if not terms:
        return []
    if len(terms) == 1:
        t = terms[0]
        return [conj(*(Literal(x) for x in sorted(t, key=lambda x: -x.var))) if t else None]
    whole = _cross_product(terms)
    if whole is not None:
        return [whole]
    freq = Counter(lit for t in terms for lit in t)
    best = [lit for lit, k in freq.items() if k >= 2]
    if not best:
        return [_factor_terms([t])[0] for t in terms]
    top = max(freq[x] for x in best)
    lit = min((x for x in best if freq[x] == top), key=_lit_key)
    group = [t for t in terms if lit in t]
    rest = [t for t in terms if lit not in t]
    inner = _factor_terms([t - {lit} for t in group])
    if any(x is None for x in inner):
        factored: FactoredExpr = Literal(lit)
    else:
        # inner sum first so the extracted literal prints after it: (X30 + X31)X20
        factored = conj(disj(*inner), Literal(lit))
    return [factored] + _factor_terms(rest)


def fdims_factorize(cover: DsopCover) -> FactoredExpr:
    """Factor a full-minterm DSOP cover the way factorized DIMS does.

    Terms are grouped by their ``X1`` literal.  Within a group the ``X1``
    literal is stripped; if the residues enumerate every rail combination of
    the remaining variables they collapse to a product of OR pairs, otherwise
    the most frequent literal (lowest variable on ties) is pulled out
    greedily.  Leftover terms stay as plain products.
    """
    if not cover.terms:
        raise SynthesisError("cannot factor an empty cover")
    groups: dict[RailLiteral | None, list[frozenset[RailLiteral]]] = {}
    for term in cover.terms:
        key = next((x for x in term.literals if x.var == 1), None)
        groups.setdefault(key, []).append(frozenset(term.literals) - {key})
    products = []
    for key, residues in groups.items():
        for part in _factor_terms(residues):
            items = [p for p in (part, Literal(key) if key else None) if p is not None]
            products.append(conj(*items))
    return disj(*products)


def factored_to_netlist(f1: FactoredExpr, f0: FactoredExpr, n: int, or_fanin: int | None = None) -> Netlist:
    """And nodes become C-elements, Or nodes OR gates; equal subexpressions share a gate."""
    b = NetlistBuilder(n)
    memo: dict[object, str] = {}

    def min_var(e: FactoredExpr) -> int:
        return min(x.var for x in e.literals())

    def emit(e: FactoredExpr) -> str:
        if isinstance(e, Literal):
            return str(e.lit)
        key = e.canonical()
        if key not in memo:
            gate_children = sorted((c for c in e.children if not isinstance(c, Literal)), key=min_var)
            nets = {id(c): emit(c) for c in gate_children}
            inputs = [nets[id(c)] if id(c) in nets else str(c.lit) for c in e.children]
            memo[key] = b.add(GateKind.C if isinstance(e, And) else GateKind.OR, inputs)
        return memo[key]

    rails = {}
    for expr, rail in ((f1, "f1"), (f0, "f0")):
        leaves = [emit(t) for t in top_level_terms(expr)]
        if len(leaves) == 1:
            rails[rail] = _rename_output(b, leaves[0], rail)
        else:
            rails[rail] = _drive_rail(b, leaves, rail, or_fanin)
    return b.build([OutputPair("f", rails["f1"], rails["f0"])])


def synth_fdims(f: BooleanFunction, or_fanin: int | None = None, max_n: int | None = None) -> Netlist:
    _check_synthesizable(f, max_n)
    f1, f0 = dual_rail_cover(f)
    return factored_to_netlist(fdims_factorize(f1), fdims_factorize(f0), f.n, or_fanin)


# --- safe decomposition -----------------------------------------------------


@dataclass(frozen=True)
class SafeNode:
    """A C-element over ``literals`` plus the output of the parent node.

    ``children`` split on both rails of one variable, so whenever this node
    fires exactly one child fires after it.  Leaves feed the output OR.
    """

    literals: frozenset[RailLiteral]
    children: tuple["SafeNode", ...] = ()

    def expr(self) -> FactoredExpr:
        lits = [Literal(x) for x in sorted(self.literals, key=lambda x: -x.var)]
        if self.children:
            lits.append(disj(*(c.expr() for c in self.children)))
        return conj(*lits)

    def leaf_count(self) -> int:
        return sum(c.leaf_count() for c in self.children) if self.children else 1


@dataclass(frozen=True)
class SafeCover:
    n: int
    roots: tuple[SafeNode, ...]

    def expr(self) -> FactoredExpr:
        return disj(*(r.expr() for r in self.roots))


def _pair_nodes(nodes: list[SafeNode]) -> list[SafeNode]:
    def partner_var(a: SafeNode, b: SafeNode) -> int | None:
        diff = a.literals ^ b.literals
        if len(diff) != 2 or len(a.literals) != len(b.literals):
            return None
        x, y = diff
        if x.var != y.var or len(a.literals & b.literals) < 2:
            return None
        return x.var

    candidates: dict[int, list[tuple[int, int]]] = {}
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            v = partner_var(nodes[i], nodes[j])
            if v is not None:
                candidates.setdefault(v, []).append((i, j))
    if not candidates:
        return nodes

    def greedy(pairs):
        used, chosen = set(), []
        for i, j in pairs:
            if i not in used and j not in used:
                used |= {i, j}
                chosen.append((i, j))
        return chosen

    chosen_by_var = {v: greedy(p) for v, p in candidates.items()}
    # most pairs wins; ties go to the lowest variable, i.e. X1 is extracted first
    var = min(chosen_by_var, key=lambda v: (-len(chosen_by_var[v]), v))
    chosen = chosen_by_var[var]

    paired, used = [], set()
    for i, j in chosen:
        a, b = nodes[i], nodes[j]
        if next(x for x in a.literals if x.var == var).rail == 1:
            a, b = b, a
        shared = a.literals & b.literals
        paired.append(SafeNode(shared, (
            SafeNode(a.literals - shared, a.children),
            SafeNode(b.literals - shared, b.children),
        )))
        used |= {i, j}
    return _pair_nodes(paired) + [x for k, x in enumerate(nodes) if k not in used]


def safe_decompose(cover: DsopCover) -> SafeCover:
    """Decompose a full-minterm cover without introducing gate orphans.

    Two terms equal except for one variable's rail share every other literal;
    that shared set becomes one C-element whose output forks to a 2-input
    C-element per rail.  The variable yielding the most pairs is used (lowest
    index on ties, earliest terms first) and the shared-literal sets are paired
    again while they keep at least two literals.  Unpaired terms are left as
    full C-elements.
    """
    nodes = [SafeNode(frozenset(t.literals)) for t in cover.terms]
    return SafeCover(cover.n, tuple(_pair_nodes(nodes)))


def safe_to_netlist(f1: SafeCover, f0: SafeCover, or_fanin: int | None = None) -> Netlist:
    """Gate ids are assigned level by level: all roots of a rail, then their children."""
    b = NetlistBuilder(f1.n)
    rails = {}
    for cover, rail in ((f1, "f1"), (f0, "f0")):
        if not cover.roots:
            raise SynthesisError(f"rail {rail} has an empty cover")
        leaves: list[str] = []
        level = [(node, None) for node in cover.roots]
        while level:
            nxt = []
            for node, parent in level:
                inputs = ([parent] if parent else []) + [
                    str(x) for x in sorted(node.literals, key=lambda x: -x.var)
                ]
                net = inputs[0] if len(inputs) == 1 else b.add(GateKind.C, inputs)
                if node.children:
                    nxt += [(c, net) for c in node.children]
                else:
                    leaves.append(net)
            level = nxt
        if len(leaves) == 1:
            rails[rail] = _rename_output(b, leaves[0], rail)
        else:
            rails[rail] = _drive_rail(b, leaves, rail, or_fanin)
    return b.build([OutputPair("f", rails["f1"], rails["f0"])])


def synth_safe(f: BooleanFunction, or_fanin: int | None = None, max_n: int | None = None) -> Netlist:
    _check_synthesizable(f, max_n)
    f1, f0 = dual_rail_cover(f)
    return safe_to_netlist(safe_decompose(f1), safe_decompose(f0), or_fanin)


METHODS = {"dims": synth_dims, "fdims": synth_fdims, "safe": synth_safe}


def synthesize(f: BooleanFunction, method: str, or_fanin: int | None = None, max_n: int | None = None) -> Netlist:
    try:
        fn = METHODS[method]
    except KeyError:
        raise SynthesisError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(f, or_fanin=or_fanin, max_n=max_n)
