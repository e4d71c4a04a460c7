import json

import pytest

from qdisynth.logic import Spacer, all_codewords, dual_rail_cover, eval_cover_pair
from qdisynth.netlist import (
    Gate,
    GateKind,
    Netlist,
    OutputPair,
    build_fixture,
    canonical_structure,
    eval_netlist,
    parse_netlist,
    render_netlist,
    validate,
)
from qdisynth.synth import synthesize

from conftest import nonconstant_functions

FIGS = ("fig3", "fig4", "fig5")


def _codes(nl):
    return [d.code for d in validate(nl)]


@pytest.mark.parametrize("name", FIGS)
@pytest.mark.parametrize("fanin", [None, 2, 3])
def test_fixtures_validate_and_compute_and3(and3, name, fanin):
    nl = build_fixture(name, or_fanin=fanin)
    assert validate(nl) == []
    f1, f0 = dual_rail_cover(and3)
    for cw in all_codewords(3):
        assert eval_netlist(nl, cw) == (eval_cover_pair(f1, f0, cw),)
    assert eval_netlist(nl, Spacer) == ((0, 0),)


def test_fig3_inventory():
    nl = build_fixture("fig3")
    assert nl.count(GateKind.C, 3) == 8 and nl.count(GateKind.C) == 8
    assert [g.id for g in nl.gates if g.kind is GateKind.OR] == ["OR1"]
    c1 = nl.gate_by_id["C1"]
    assert c1.output == "f1" and set(c1.inputs) == {"X31", "X21", "X11"}
    tree = build_fixture("fig3", or_fanin=4)
    assert tree.count(GateKind.OR) == 3


def test_fig4_inventory():
    nl = build_fixture("fig4")
    assert {g.id for g in nl.gates} == {"C1", "C2", "C3", "C4", "OR1", "OR2", "OR3"}
    assert all(nl.gate_by_id[c].arity == 3 for c in ("C1", "C2", "C3", "C4"))
    assert nl.nets["isf"].isochronic
    assert set(nl.nets["isf"].fanout) == {"C2", "C3"}
    assert nl.nets["isf"].driver == "OR2"


def test_fig5_inventory():
    nl = build_fixture("fig5")
    assert nl.count(GateKind.C) == 11
    assert nl.count(GateKind.C, 2) == 9 and nl.count(GateKind.C, 3) == 2
    assert {g.id for g in nl.gates if g.kind is GateKind.C and g.arity == 3} == {"C1", "C5"}
    for k in ("k1", "k2", "k3"):
        assert nl.nets[k].isochronic and len(nl.nets[k].fanout) == 2
    # k1 feeds C6 (with X10) and C7 (with X11)
    assert set(nl.gate_by_id["C7"].inputs) == {"k1", "X11"}


def test_fixture_eval_cell_examples():
    assert eval_netlist(build_fixture("fig3"), all_codewords(3)[7]) == ((1, 0),)
    assert eval_netlist(build_fixture("fig4"), all_codewords(3)[6]) == ((0, 1),)


def test_unknown_fixture():
    with pytest.raises(ValueError, match="unknown fixture"):
        build_fixture("fig9")


def test_validate_cycle():
    nl = Netlist(1, (Gate("OR1", GateKind.OR, ("X11", "g"), "g"), Gate("C1", GateKind.C, ("g", "X10"), "f1")),
                 (OutputPair("f", "f1", "X10"),))
    assert "cycle" in _codes(nl)


def test_validate_undriven():
    nl = Netlist(1, (Gate("OR1", GateKind.OR, ("X11", "ghost"), "f1"),), (OutputPair("f", "f1", "X10"),))
    diags = validate(nl)
    assert [d.code for d in diags] == ["undriven"]
    assert diags[0].subject == "ghost"


def test_validate_multiple_drivers_and_arity():
    nl = Netlist(1, (
        Gate("OR1", GateKind.OR, ("X11", "X10"), "f1"),
        Gate("OR2", GateKind.OR, ("X11", "X10"), "f1"),
        Gate("C1", GateKind.C, ("X10",), "X11"),
    ), (OutputPair("f", "f1", "X10"),))
    codes = _codes(nl)
    assert codes.count("multiple-drivers") == 2
    assert "arity" in codes


def test_validate_dangling_gate():
    nl = Netlist(1, (Gate("OR1", GateKind.OR, ("X11", "X10"), "loose"),), (OutputPair("f", "X11", "X10"),))
    assert _codes(nl) == ["dangling"]


def test_c_element_holds_on_mixed_inputs():
    c = Gate("C1", GateKind.C, ("a", "b"), "y")
    assert c.next_value([1, 1], 0) == 1
    assert c.next_value([1, 0], 0) == 0
    assert c.next_value([1, 0], 1) == 1
    assert c.next_value([0, 0], 1) == 0


@pytest.mark.parametrize("name", FIGS)
def test_serialization_round_trip_fixtures(name):
    nl = build_fixture(name)
    text = render_netlist(nl)
    back = parse_netlist(text)
    assert back == nl
    assert render_netlist(back) == text
    doc = json.loads(text)
    assert {"gates", "nets", "inputs", "outputs"} <= set(doc)
    assert all({"id", "kind", "arity", "inputs", "output"} == set(g) for g in doc["gates"])


@pytest.mark.parametrize("method", ["dims", "fdims", "safe"])
def test_serialization_round_trip_synthesized(method):
    for f in nonconstant_functions(2)[::3]:
        nl = synthesize(f, method)
        assert parse_netlist(render_netlist(nl)) == nl


def test_parse_rejects_bad_documents():
    with pytest.raises(ValueError, match="line"):
        parse_netlist("{not json")
    doc = json.loads(render_netlist(build_fixture("fig4")))
    doc["gates"][0]["arity"] = 7
    with pytest.raises(ValueError, match="arity"):
        parse_netlist(json.dumps(doc))
    doc["gates"][0]["arity"] = 3
    del doc["outputs"]
    with pytest.raises(ValueError, match="malformed"):
        parse_netlist(json.dumps(doc))


def test_canonical_structure_ignores_names():
    a = build_fixture("fig4")
    renamed = Netlist(3, tuple(
        Gate("G" + g.id, g.kind, tuple("fork" if x == "isf" else x for x in g.inputs),
             "fork" if g.output == "isf" else g.output)
        for g in a.gates
    ), a.outputs, frozenset({"fork"}))
    assert canonical_structure(renamed) == canonical_structure(a)
    assert canonical_structure(a) != canonical_structure(build_fixture("fig5"))
