# Attraction seen from both sides: a map and a representative of its inverse.
#
# phi:  x -> x, y -> yx, a -> ab, b -> bc, c -> cab
# psi:  the inverse, written on a second copy of the rose with capital names.
# The edge dictionary is the identity on names, and <x, y> is invariant on
# both sides, so the two notions of "not attracted" should coincide.

from weakattract.attraction import (DualitySetup, all_circuits, duality_audit, attracted_circuit,
                                    tile_in_other_graph, uniform_m)
from weakattract.nonattracting import nonattracting_system
from weakattract.paths import format_word
from weakattract.repfile import load_example
from weakattract.toprep import pf_growth, iterate

phi, psi = load_example("dual_phi"), load_example("dual_psi")

def as_ids(src, dst, table):
    return {src.graph.edge_id(k): (dst.graph.edge_id(v),) for k, v in table.items()}

ns_phi = nonattracting_system(phi.rep)
ns_psi = nonattracting_system(psi.rep)
ds = DualitySetup(phi.rep, psi.rep, as_ids(phi, psi, phi.to_partner),
                  as_ids(psi, phi, phi.from_partner), ns_phi, ns_psi)

# psi really undoes phi on every edge
g = phi.graph
for k in range(1, g.n_edges + 1):
    img = iterate(phi.rep, (k,), 1)
    back = iterate(psi.rep, tuple(ds.to_psi[abs(e)][0] * (1 if e > 0 else -1) for e in img), 1)
    print(g.name(k), "->", format_word(g, img), "-> back to", format_word(psi.graph, back))

print("growth: phi %.4f, psi %.4f" % (float(pf_growth(phi.rep, 3).lower),
                                      float(pf_growth(psi.rep, 3).lower)))

corpus = all_circuits(g, 3)
rep = duality_audit(ds, corpus)
print("duality:", rep.checked, "classes,", len(rep.violations), "mismatches")
not_attracted = [format_word(g, c) for c in corpus
                 if not attracted_circuit(phi.rep, ns_phi, c).attracted]
print("not attracted (length <= 3):", " ".join(not_attracted))

# uniform attraction: one exponent that works for every class in the corpus
# that is neither carried by <x, y> nor already close to the dual lamination
tile_minus = tile_in_other_graph(ds, 2)
for m_plus in (1, 2, 3):
    res = uniform_m(phi.rep, ns_phi, all_circuits(g, 4), m_plus, tile_minus)
    print("tile order", m_plus, "-> uniform m =", res.m if res.found else "none (worst %s)" % res.worst)
