# A geometric top stratum: a -> ab, b -> bab on the rank-2 rose.
#
# This is the map induced by a pseudo-Anosov of the once-punctured torus.
# The commutator aba'b' is a closed Nielsen path, so the boundary curve is
# not attracted even though every edge is.

from weakattract import load_example, nonattracting_system, search_inp, member
from weakattract.attraction import all_circuits, attracted_circuit
from weakattract.nielsen import classify, split_at_illegal_turn
from weakattract.nonattracting import sigma_window_table, window_filter
from weakattract.paths import format_word, parse_word, cyclic_reduce
from weakattract.toprep import f_sharp, illegal_turns

rf = load_example("exg")
t = rf.rep
g = t.graph

print("illegal turns:", [sorted(g.name(d) for d in turn) for turn in illegal_turns(t, 1)])

# the bounded search finds the Nielsen path without being told
nd = search_inp(t, 1)
rho = nd.rho
print("rho =", format_word(g, rho), "(%s)" % nd.kind.value)
print("f_#(rho) =", format_word(g, f_sharp(t, rho)))
alpha, beta = split_at_illegal_turn(t, nd)
print("split at the illegal turn:", format_word(g, alpha), "|", format_word(g, beta))
print(classify(nd).reason)

ns = nonattracting_system(t, rf.rho)
print("Z is empty:", not ns.Z.edges)
print("K has", ns.K.n_edges, "edge: the loop E_rho")
print("subgroup system:", [[format_word(g, c) for c in comp.circuits] for comp in ns.components])

# only powers of the commutator survive
for c in all_circuits(g, 4):
    v = attracted_circuit(t, ns, c)
    if not v.attracted:
        print("not attracted:", format_word(g, c))

# the window filter is a cheap necessary test for membership
L, sigma = sigma_window_table(ns)
print("L =", L, "and", len(sigma), "allowed windows")
for text in ["aba'b'aba'b'", "aab", "ab"]:
    c = cyclic_reduce(g, parse_word(g, text))
    print(text, "windows ok:", bool(window_filter(ns, c)), " member:", bool(member(ns, c)))

# with a lower stratum: the linear edge e carries its own loop onto rho
rf2 = load_example("exl")
ns2 = nonattracting_system(rf2.rep, rf2.rho)
g2 = rf2.graph
print("\nexl: Z =", [g2.name(e) for e in sorted(ns2.Z.edges)])
for comp in ns2.components:
    print("rank", comp.component.betti, [format_word(g2, w) for w in comp.basis])
