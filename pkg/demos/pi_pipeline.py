"""Walk one pi-term through every layer: solos, typing, diagram, net, bisimulation.

    python3 demos/pi_pipeline.py
"""

from solace import diagrams as D
from solace import solos
from solace.din.fmt import format_net
from solace.sd_to_din import bisim_check, translate_diagram
from solace.syntax import format_solos, parse_pi
from solace.translate import pi_context, translate_pi
from solace.typecheck import check_acyclic, check_typed

p = parse_pi("(new x.(u!x.0 | x?y.0)) | u?z.(z!t.0)")
t = translate_pi(p)
print("solos translation:\n ", format_solos(t))

gamma = pi_context(p)
derivation = check_typed(gamma, t)
print("typed under", {x: ty.name for x, ty in sorted(gamma.items())}, "| acyclic:", bool(check_acyclic(derivation)))

step = solos.reduce_steps(t)
print(f"{len(step)} one-step reduct(s); the first:\n ", format_solos(step[0]))

g = D.term_to_diagram(t, "auto")
print(f"diagram: {len(g.nodes)} nodes, {len(g.edges)} multiedges, AC member: {D.is_ac_member(g).member}")

net = translate_diagram(g)
print(f"net: {len(net.cells)} cells; first lines of its text form:")
print("".join(format_net(net).splitlines(keepends=True)[:6]), end="")

report = bisim_check(g)
print(f"\nbisimulation harness: {report.states} states, ok = {report.ok}")
print(report.table())
