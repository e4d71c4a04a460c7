"""
Strong, weak and early indication
=================================

Check whether a netlist can produce its outputs before all inputs have
arrived (or before all of them have returned to the spacer).
"""

from qdisynth import Gate, GateKind, Netlist, build_fixture, classify_indication
from qdisynth.netlist import OutputPair

# All three AND3 netlists wait for every input, so they are strong,
# even fig4, which orphans.  Indication and orphan freedom are separate
# properties.
for name in ("fig3", "fig4", "fig5"):
    print(name, classify_indication(build_fixture(name)).io_class)

# A 2-input AND whose false rail is a plain OR of the two false rails.
# One low input is enough to decide the output.
early = Netlist(2, (
    Gate("C1", GateKind.C, ("X21", "X11"), "f1"),
    Gate("OR1", GateKind.OR, ("X20", "X10"), "f0"),
), (OutputPair("f", "f1", "f0"),))

result = classify_indication(early)
print("early AND2:", result.io_class, "early set:", result.early_set, "early reset:", result.early_reset)
for w in result.witnesses:
    print("  ", w.to_dict())
