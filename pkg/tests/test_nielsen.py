import itertools

import pytest

from weakattract.nielsen import (NielsenKind, NielsenUniquenessError, classify, declared_nielsen,
                                 fixed_directions, fixed_paths, is_indivisible, search_inp,
                                 split_at_illegal_turn, verify_nielsen)
from weakattract.paths import free_reduce, inverse
from weakattract.repfile import loads
from weakattract.toprep import f_sharp
from conftest import rep_file, word


def brute_force_fixed(t, height, max_len):
    """Every reduced path in G_height crossing H_height with f_#(p) = p."""
    g = t.graph
    letters = [e for k in sorted(g.filtration_edges(height)) for e in (k, -k)]
    out = set()
    for n in range(1, max_len + 1):
        for p in itertools.product(letters, repeat=n):
            if free_reduce(p) != p:
                continue
            if any(g.terminal[x] != g.initial[y] for x, y in zip(p, p[1:])):
                continue
            if not any(g.stratum_of(e) == height for e in p):
                continue
            if f_sharp(t, p) == p:
                out.add(p)
    return out


def test_ex1_has_no_top_nielsen_path_by_brute_force():
    t = rep_file("ex1").rep
    assert brute_force_fixed(t, 3, 7) == set()
    nd = search_inp(t, 3)
    assert nd.kind is NielsenKind.TRIVIAL and nd.bounded_search


def test_exg_search_matches_brute_force():
    t = rep_file("exg").rep
    brute = brute_force_fixed(t, 1, 6)
    indivisible = {p for p in brute if is_indivisible(t, p)}
    assert indivisible == {word("exg", "aba'b'"), word("exg", "bab'a'")}
    nd = search_inp(t, 1)
    assert nd.rho in indivisible and nd.kind is NielsenKind.CLOSED
    # the ray method and the pruned walk agree
    fixed, _ = fixed_paths(t, 1, 6)
    assert set(fixed) == indivisible


def test_declared_rho_is_verified():
    t = rep_file("exg").rep
    nd = declared_nielsen(t, word("exg", "bab'a'"))
    assert nd.declared and nd.rho == word("exg", "aba'b'")  # canonical orientation
    with pytest.raises(ValueError):
        declared_nielsen(t, word("exg", "ab"))
    rho = word("exg", "aba'b'")
    with pytest.raises(ValueError):
        declared_nielsen(t, rho + rho)  # divisible


def test_geometricity_classification():
    t = rep_file("exg").rep
    rep = classify(declared_nielsen(t, word("exg", "aba'b'")))
    assert rep.geometric and not rep.free_factor_system
    rep = classify(search_inp(rep_file("ex1").rep, 3))
    assert not rep.geometric and rep.free_factor_system


def test_split_at_illegal_turn():
    t = rep_file("exg").rep
    nd = declared_nielsen(t, word("exg", "aba'b'"))
    alpha, beta = split_at_illegal_turn(t, nd)
    assert alpha + beta == nd.rho
    assert alpha == word("exg", "ab") and beta == word("exg", "a'b'")


def test_fixed_directions():
    t = rep_file("exg").rep
    # f(a') = b'a' starts with b', so a' is not fixed
    assert set(fixed_directions(t, 1)) == set(word("exg", "a b b'"))


def test_two_inequivalent_nielsen_paths_raise():
    # two disjoint copies of the geometric map in one stratum give two
    # unrelated fixed commutators (the search does not check irreducibility)
    doc = """
[graph]
vertices = ["v"]
edges = [{ name = "a", from = "v", to = "v" }, { name = "b", from = "v", to = "v" },
         { name = "c", from = "v", to = "v" }, { name = "d", from = "v", to = "v" }]
[[strata]]
edges = ["a", "b", "c", "d"]
class = "EG"
[map]
a = "ab"
b = "bab"
c = "cd"
d = "dcd"
[lamination]
r = 1
"""
    t = loads(doc).rep
    with pytest.raises(NielsenUniquenessError):
        search_inp(t, 1, max_len=6)


def test_verify_nielsen_on_inverse():
    t = rep_file("exg").rep
    rho = word("exg", "aba'b'")
    assert verify_nielsen(t, rho) and verify_nielsen(t, inverse(rho))
