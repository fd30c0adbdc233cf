"""A diagram outside the acyclic fragment, where diagram and net transitions part ways.

Firing the inner pair first (labels e1, e0) identifies a name with itself in the
diagram; in the net the same step leaves an area plugged into itself, which no
amount of reduction turns into the translated diagram reduct.

    python3 demos/counterexample.py
"""

from solace import diagrams as D
from solace.sd_to_din import bisim_check
from solace.syntax import parse_solos

term = parse_solos("new u x y z y' z' a b c a' b' c'.(u!<x y z> | u?<x y' z'> | x!<a b c> | x?<a' b' c'>)")
g = D.term_to_diagram(term, "auto")

m = D.is_ac_member(g)
print(f"acyclic membership: {m.status}, witness path {m.witness}")

report = bisim_check(g)
print(f"harness ok = {report.ok}, exhaustions = {report.exhaustions}")
for line in report.mismatches:
    print(" ", line)
print(report.table())
