# A walk through the rank-3 rose example: a -> a, b -> ba, c -> cbc.
#
# The top stratum {c} is exponentially growing and <a, b> is invariant.
# Everything that never crosses c stays away from the lamination.

from weakattract import load_example, nonattracting_system, tile, iterate, member
from weakattract.attraction import all_circuits, attracted_circuit, theorem_f_audit, cert_summary
from weakattract.paths import format_word, parse_word, cyclic_reduce
from weakattract.toprep import pf_growth, tile_growth_report

rf = load_example("ex1")
t = rf.rep
g = t.graph

# growth of the top stratum: rational bounds on the PF eigenvalue
gb = pf_growth(t, t.r)
print("lambda in [%s, %s]" % (float(gb.lower), float(gb.upper)))

# tiles are iterates of the top edge; lengths roughly double each step
for row in tile_growth_report(t, 6):
    print("tile(%d) has length %d" % (row["m"], row["length"]))

# b picks up one more a per iterate
b = parse_word(g, "b")
for k in range(5):
    print("f^%d(b) =" % k, format_word(g, iterate(t, b, k)))

# the nonattracting system: Z, the Nielsen path (none here) and K
ns = nonattracting_system(t, rf.rho)
print("Z =", [g.name(e) for e in sorted(ns.Z.edges)])
print("rho is", ns.rho.kind.value)
for comp in ns.components:
    print("component of rank", comp.component.betti, "basis", [format_word(g, w) for w in comp.basis])

# verdicts: membership first, tile search second
for text in ["ab", "a b'", "c", "abc", "c b' a"]:
    c = cyclic_reduce(g, parse_word(g, text))
    v = attracted_circuit(t, ns, c, m=2)
    print("%-6s %-14s k=%s  %s" % (format_word(g, c), v.verdict.value, v.k, cert_summary(ns, v.cert)))

# the two procedures never agree on short circuits (lifts XOR attracted)
corpus = all_circuits(g, 5)
rep = theorem_f_audit(t, ns, corpus)
print("checked", rep.checked, "circuits,", len(rep.violations), "violations")

# the tile itself is far from <a, b>
print("tile(3) lifts to K?", bool(member(ns, tile(t, 3))))
