import random

import pytest

from weakattract.attraction import all_circuits, all_paths
from weakattract.nonattracting import (FailingWindow, Lift, build_Z, check_z_invariants,
                                       components_pairwise_distinct, covered_top_edges, edge_attracted,
                                       is_member_subpath, member, member_circuits, random_member_circuit,
                                       random_member_path, sigma_window_table, window_filter)
from weakattract.nielsen import declared_nielsen, search_inp
from weakattract.paths import Circuit, cyclic_reduce, free_reduce, inverse
from weakattract.toprep import f_sharp
from conftest import EXAMPLES, circ, rep_file, system, word

SAMPLE_EXAMPLES = ["ex1", "exg", "exl", "ex2", "dual_phi", "dual_psi"]


def names(name, edges):
    g = rep_file(name).graph
    return sorted(g.name(e) for e in edges)


@pytest.mark.parametrize("name,z", [
    ("ex1", ["a", "b"]), ("exg", []), ("exl", ["c", "e"]), ("ex2", ["a", "b"]),
    ("trib", []), ("dual_phi", ["x", "y"]), ("dual_psi", ["X", "Y"]),
])
def test_Z(name, z):
    assert names(name, system(name).Z.edges) == z


def test_ex1_system():
    ns = system("ex1")
    assert ns.rho.trivial and not ns.geometric and ns.free_factor_system
    (comp,) = ns.components
    assert comp.component.betti == 2
    assert sorted(comp.basis) == [word("ex1", "a"), word("ex1", "b")]


def test_exg_gains_exactly_the_rho_component():
    ns = system("exg")
    assert ns.geometric and not ns.free_factor_system
    (comp,) = ns.components
    assert comp.component.betti == 1
    assert comp.circuits == [circ("exg", "aba'b'")]
    assert member(ns, circ("exg", "aba'b'")) == Lift((ns.rho_k_edge,), 0, 0)


def test_exl_joins_rho_to_the_lower_loop():
    ns = system("exl")
    (comp,) = ns.components
    assert comp.component.betti == 2
    assert {c.unoriented_key for c in comp.circuits} == {
        circ("exl", "e'ce").unoriented_key, circ("exl", "aba'b'").unoriented_key}


def test_empty_system():
    ns = system("trib")
    assert ns.components == [] and ns.K.n_edges == 0
    assert not member(ns, circ("trib", "a"))
    assert member(ns, ())  # the trivial path is vacuously a member


def test_ex2_lower_geometric_stratum_is_in_Z():
    ns = system("ex2")
    assert check_z_invariants(ns, inp_strata=[1]) == []


@pytest.mark.parametrize("name", EXAMPLES)
def test_structural_invariants(name):
    ns = system(name)
    assert check_z_invariants(ns) == []
    assert components_pairwise_distinct(ns) == []
    assert ns._auto.conflicts == []


@pytest.mark.parametrize("name", EXAMPLES)
def test_immersion_has_no_folds(name):
    auto = system(name)._auto
    for node, out in auto.trans.items():
        assert len(out) == len(set(out)), node


def ex1_oracle(c):
    return all(abs(e) in (1, 2) for e in c.word)


def exg_oracle(c):
    rho = word("exg", "aba'b'")
    n = len(c.word)
    if n % 4:
        return False
    for r in (rho, inverse(rho)):
        if c == cyclic_reduce(None, r * (n // 4)):
            return True
    return False


@pytest.mark.parametrize("name,oracle,max_len", [("ex1", ex1_oracle, 5), ("exg", exg_oracle, 8)])
def test_membership_matches_oracle(name, oracle, max_len):
    ns = system(name)
    for c in all_circuits(rep_file(name).graph, max_len):
        assert bool(member(ns, c)) == oracle(c), c


def test_member_paths_on_ex1():
    ns = system("ex1")
    for p in all_paths(rep_file("ex1").graph, 4):
        assert bool(member(ns, p)) == all(abs(e) in (1, 2) for e in p)


def test_obstruction_position():
    ns = system("ex1")
    assert member(ns, word("ex1", "abca")).position == 2


@pytest.mark.parametrize("name", SAMPLE_EXAMPLES)
def test_random_members_are_invariant_closed_and_pass_windows(name):
    ns = system(name)
    t = ns.rep
    g = t.graph
    rng = random.Random(7)
    paths = [random_member_path(ns, rng) for _ in range(200)]
    for p in paths:
        assert member(ns, p), p
        assert member(ns, f_sharp(t, p)), p
        assert window_filter(ns, p), p
    for p, q in zip(paths, paths[1:]):
        if p and q and g.terminal[p[-1]] == g.initial[q[0]]:
            assert member(ns, free_reduce(p + q))
    for _ in range(200):
        c = random_member_circuit(ns, rng)
        assert member(ns, c) and member(ns, f_sharp(t, c)) and window_filter(ns, c)


@pytest.mark.parametrize("name", SAMPLE_EXAMPLES)
def test_member_circuits_are_members(name):
    ns = system(name)
    for c in member_circuits(ns, 3):
        assert isinstance(c, Circuit) and member(ns, c)


def test_window_table_and_filter():
    ns = system("ex1")
    L, sigma = sigma_window_table(ns)
    assert L == 1 and len(sigma) == 4 + 12  # reduced words of length <= 2 in a, b
    assert window_filter(ns, circ("ex1", "c")) == FailingWindow(word("ex1", "c"), 0)
    ns = system("exg")
    assert sigma_window_table(ns)[0] == 2


def test_window_filter_is_necessary_on_exhaustive_corpus():
    for name in ("ex1", "exg", "exl"):
        ns = system(name)
        for c in all_circuits(rep_file(name).graph, 5):
            if member(ns, c):
                assert window_filter(ns, c)


def test_member_subpaths():
    ns = system("exg")
    assert is_member_subpath(ns, word("exg", "ba'b'a"))
    assert not is_member_subpath(ns, word("exg", "aa"))


def test_edge_attraction_witness():
    t = rep_file("ex1").rep
    nd = search_inp(t, 3)
    assert edge_attracted(t, nd, word("ex1", "c")[0]).attracted
    assert not edge_attracted(t, nd, word("ex1", "b")[0]).attracted


def test_rho_occurrences_cover_top_edges():
    t = rep_file("exg").rep
    rho = word("exg", "aba'b'")
    assert covered_top_edges(t, rho, rho * 3) == (12, 12)
    assert covered_top_edges(t, rho, word("exg", "aab")) == (3, 0)
    # overlapping occurrences: only disjoint ones count
    assert covered_top_edges(t, rho, word("exg", "aba'b'aba'b'a")) == (9, 8)


def test_Z_respects_declared_rho():
    t = rep_file("exl").rep
    nd = declared_nielsen(t, word("exl", "aba'b'"))
    zr = build_Z(t, nd)
    assert names("exl", zr.Z.edges) == ["c", "e"]
