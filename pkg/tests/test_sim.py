import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdisynth.logic import BooleanFunction, Codeword, Spacer, all_codewords
from qdisynth.netlist import build_fixture, initial_values
from qdisynth.sim import (
    FALL,
    RISE,
    SET,
    HazardError,
    apply_partial,
    propagate,
    retract_partial,
    simulate_transaction,
)
from qdisynth.synth import synthesize

from conftest import nonconstant_functions

FIGS = ("fig3", "fig4", "fig5")


def _gate_rises(nl, trace):
    return [e.net for e in trace.events if e.net in nl.driver and e.direction == RISE]


def test_fig3_set_phase_minterm_then_or():
    nl = build_fixture("fig3")
    set_tr, _ = simulate_transaction(nl, Codeword.parse("001"))
    assert _gate_rises(nl, set_tr) == ["C3", "f0"]
    assert set_tr.event_for("C3").time == 1 and set_tr.event_for("f0").time == 2


def test_fig3_two_level_or_chain():
    nl = build_fixture("fig3", or_fanin=4)
    set_tr, _ = simulate_transaction(nl, Codeword.parse("001"))
    gates = [nl.driver[n].id for n in _gate_rises(nl, set_tr)]
    assert gates[0] == "C3" and gates[-1] == nl.driver["f0"].id and len(gates) == 3


def test_fig4_set_phase_rises():
    nl = build_fixture("fig4")
    set_tr, _ = simulate_transaction(nl, Codeword.parse("001"))
    assert {nl.driver[n].id for n in _gate_rises(nl, set_tr)} == {"OR1", "OR2", "C3", "OR3"}


def test_fig4_row1_trace_ends_with_f0():
    nl = build_fixture("fig4")
    set_tr, reset_tr = simulate_transaction(nl, Codeword.parse("110"))
    assert set_tr.events[-1].net == "f0" and set_tr.events[-1].direction == RISE
    assert reset_tr.events[-1].net == "f0" and reset_tr.events[-1].direction == FALL


def test_fig5_all_ones_only_c1():
    nl = build_fixture("fig5")
    set_tr, _ = simulate_transaction(nl, Codeword.parse("111"))
    assert [nl.driver[n].id for n in _gate_rises(nl, set_tr)] == ["C1"]
    assert _gate_rises(nl, set_tr) == ["f1"]


@pytest.mark.parametrize("name", FIGS)
def test_spacer_gives_no_events(name):
    set_tr, reset_tr = simulate_transaction(build_fixture(name), Spacer)
    assert set_tr.events == () and reset_tr.events == ()
    assert set_tr.quiescent


def test_trace_dump_format_and_tie_order():
    nl = build_fixture("fig4")
    set_tr, _ = simulate_transaction(nl, Codeword.parse("110"))
    lines = set_tr.dump().splitlines()
    assert lines[:3] == ["t=0 X10 rise set", "t=0 X21 rise set", "t=0 X31 rise set"]
    assert lines[3:5] == ["t=1 OR1 rise set", "t=1 isf rise set"]


def test_partial_fig3_no_output():
    nl = build_fixture("fig3")
    tr = apply_partial(nl, Codeword.parse("111"), {3, 2})
    assert not tr.final["f1"] and not tr.final["f0"]
    assert _gate_rises(nl, tr) == []


def test_partial_fig4_or_gates_only():
    nl = build_fixture("fig4")
    tr = apply_partial(nl, Codeword.parse("000"), {3, 2})
    assert {nl.driver[n].id for n in _gate_rises(nl, tr)} == {"OR1", "OR2"}
    assert not tr.final["C2"] and not tr.final["f0"]


@pytest.mark.parametrize("name", FIGS)
def test_partial_empty_subset(name):
    assert apply_partial(build_fixture(name), Codeword.parse("101"), set()).events == ()


def test_partial_rejects_bad_subset():
    with pytest.raises(ValueError):
        apply_partial(build_fixture("fig3"), Codeword.parse("101"), {4})


def test_width_mismatch():
    with pytest.raises(ValueError):
        simulate_transaction(build_fixture("fig3"), Codeword.parse("10"))


def test_hazard_detected():
    nl = build_fixture("fig3")
    values = initial_values(nl)
    values["X11"] = 1
    with pytest.raises(HazardError, match="X11 falls at t=0 during the set phase"):
        propagate(nl, values, {"X11": 0}, SET)


def test_retract_partial_holds_c_elements():
    nl = build_fixture("fig3")
    tr = retract_partial(nl, Codeword.parse("111"), {3, 2})
    assert tr.final["f1"] == 1  # C1 holds while X11 is still high


def _check_protocol(nl, cw):
    set_tr, reset_tr = simulate_transaction(nl, cw)
    assert all(e.direction == RISE for e in set_tr.events)
    assert all(e.direction == FALL for e in reset_tr.events)
    assert not any(reset_tr.final.values())
    assert simulate_transaction(nl, cw) == (set_tr, reset_tr)


@pytest.mark.parametrize("method", ["dims", "fdims", "safe"])
def test_protocol_properties_n3_exhaustive(method):
    for f in nonconstant_functions(3):
        nl = synthesize(f, method)
        for cw in all_codewords(3):
            _check_protocol(nl, cw)


@settings(max_examples=120, deadline=None)
@given(
    st.integers(1, 254),
    st.sampled_from(["dims", "fdims", "safe"]),
    st.integers(0, 7),
    st.sets(st.integers(1, 3)),
    st.sets(st.integers(1, 3)),
)
def test_monotone_subsets(table, method, value, small, extra):
    nl = synthesize(BooleanFunction.from_int(3, table), method)
    cw = Codeword(3, value)
    lo = apply_partial(nl, cw, small)
    hi = apply_partial(nl, cw, small | extra)
    for net, v in lo.final.items():
        assert v <= hi.final[net]
