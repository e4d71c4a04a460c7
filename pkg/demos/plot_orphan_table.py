"""
Gate orphans in three AND3 implementations
==========================================

Build the three reference netlists for a 3-input AND and list, codeword by
codeword, which gate transitions go unacknowledged during the set phase.
"""

from qdisynth import build_fixture, orphan_summary, render_table1
from qdisynth.analysis import render_orphan_table

# The combined table, as rendered by the library.
print(render_table1())

# The same data for one netlist at a time.  fig4 is the factorized form:
# the OR gates that merge both rails of a variable fire even when the
# C-element they feed stays low, so nobody downstream sees them switch.
for name in ("fig3", "fig4", "fig5"):
    table = orphan_summary(build_fixture(name))
    print()
    print(f"--- {name} ---")
    print(render_orphan_table(table))

# Reset-phase orphans are reported too.  fig4 mirrors its set-phase rows.
print()
print(render_table1(phase="reset"))
