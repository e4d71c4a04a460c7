"""
Tracing a 4-phase transaction
=============================

Drive a netlist with one valid codeword, then return it to the spacer,
and print every net transition with its unit-delay timestamp.
"""

from qdisynth import Codeword, build_fixture, simulate_transaction
from qdisynth.analysis import detect_orphans

nl = build_fixture("fig4")

# Codeword 001 means X3=0, X2=0, X1=1: rails X30, X20 and X11 rise.
cw = Codeword.parse("001")
set_trace, reset_trace = simulate_transaction(nl, cw)
print(set_trace.dump())
print(reset_trace.dump())

# OR1 rises at t=1 but C2 never fires, since X10 stays low.  The
# acknowledgment pass flags it.
report = detect_orphans(nl, cw)
print()
print("acknowledged:", report.path("set"))
print("orphans     :", sorted(report.orphan_gates("set")))

# After reset every net is back at 0.
assert not any(reset_trace.final.values())
