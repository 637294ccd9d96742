import math

import numpy as np
import pytest

from weakattract.graph_core import MarkedGraph
from weakattract.paths import Circuit
from weakattract.repfile import loads
from weakattract.toprep import (BudgetExceeded, TopRep, f_sharp, illegal_turns, is_homotopy_equivalence,
                                iterate, pf_growth, tile, tile_growth_report, transition_matrix,
                                validate_rep)
from conftest import EXAMPLES, circ, rep_file, word


def rose(images, classes, r=None):
    names = sorted(images)
    g = MarkedGraph.build(["v"], [(n, "v", "v") for n in names],
                          [([n], cls, None) for n, cls in zip(names, classes)])
    from weakattract.paths import parse_word
    return TopRep.build(g, {g.edge_id(n): parse_word(g, w) for n, w in images.items()},
                        r or len(names))


FIB = """
[graph]
vertices = ["v"]
edges = [{ name = "a", from = "v", to = "v" }, { name = "b", from = "v", to = "v" }]
[[strata]]
edges = ["a", "b"]
class = "EG"
[map]
a = "ab"
b = "a"
[lamination]
r = 1
"""


@pytest.mark.parametrize("name", EXAMPLES)
def test_bundled_examples_are_valid(name):
    assert validate_rep(rep_file(name).rep) == []


@pytest.mark.parametrize("name", [n for n in EXAMPLES if n != "ex1"])
def test_bundled_examples_are_homotopy_equivalences(name):
    assert is_homotopy_equivalence(rep_file(name).rep)


def test_ex1_is_not_invertible():
    # modulo the invariant factor <a, b>, c -> cbc acts on H_1 as c -> 2c
    assert not is_homotopy_equivalence(rep_file("ex1").rep)


def test_letter_counts_follow_the_transition_matrix():
    # positive substitution: no cancellation, so letter counts of f^k(e) are
    # the columns of M^k
    t = rep_file("trib").rep
    M = transition_matrix(t, 1)
    for k in range(8):
        Mk = np.linalg.matrix_power(M, k)
        for col, e in enumerate((1, 2, 3)):
            w = iterate(t, (e,), k)
            counts = [sum(1 for x in w if abs(x) == j) for j in (1, 2, 3)]
            assert counts == list(Mk[:, col])


def test_pf_bounds_bracket_numpy_eigenvalue():
    for name, i in [("trib", 1), ("ex1", 3), ("ex2", 2), ("dual_phi", 3), ("dual_psi", 3)]:
        t = rep_file(name).rep
        lam = max(abs(np.linalg.eigvals(transition_matrix(t, i).astype(float))))
        gb = pf_growth(t, i)
        assert float(gb.lower) - 1e-9 <= lam <= float(gb.upper) + 1e-9
        assert gb.exponential


def test_fibonacci_growth_within_a_hundredth():
    t = loads(FIB).rep
    gb = pf_growth(t, 1, n=16)
    phi = (1 + math.sqrt(5)) / 2
    assert float(gb.upper - gb.lower) < 0.01
    assert float(gb.lower) <= phi <= float(gb.upper)


def test_ex1_closed_form_images():
    t = rep_file("ex1").rep
    b, a, c = word("ex1", "b"), word("ex1", "a"), word("ex1", "c")
    for k in range(12):
        assert iterate(t, b, k) == b + a * k
    assert iterate(t, c, 1) == word("ex1", "cbc")
    assert iterate(t, c, 2) == word("ex1", "cbcbacbc")
    assert f_sharp(t, circ("ex1", "ab")) == circ("ex1", "aba")


def test_tightening_cancels():
    t = rep_file("ex1").rep
    # f(b a') = b a a' = b
    assert f_sharp(t, word("ex1", "b a'")) == word("ex1", "b")


def test_budget_exceeded_reports_step():
    t = rep_file("ex1").rep
    with pytest.raises(BudgetExceeded) as exc:
        iterate(t, word("ex1", "c"), 30, budget=1000)
    assert exc.value.k >= 1 and exc.value.length > 1000


def test_tile_lengths_grow_without_flags():
    t = rep_file("ex1").rep
    assert tile(t, 0) == word("ex1", "c")
    rows = tile_growth_report(t, 8)
    assert [r["length"] for r in rows][:3] == [1, 3, 8]
    assert not any(r["flagged"] for r in rows)


def test_illegal_turns():
    assert illegal_turns(rep_file("ex1").rep, 3) == set()
    t = rep_file("exg").rep
    a, b = word("exg", "a")[0], word("exg", "b")[0]
    assert illegal_turns(t, 1) == {frozenset((-a, -b))}


@pytest.mark.parametrize("images,classes,fragment", [
    ({"a": "a", "b": "bc", "c": "cbc"}, ["NEG-fixed", "NEG-linear", "EG"], "G_2"),
    ({"a": "a", "b": "ba", "c": "c"}, ["NEG-fixed", "NEG-linear", "EG"], "EG"),
    ({"a": "a", "b": "ba", "c": "cbc"}, ["ZERO", "NEG-linear", "EG"], "ZERO"),
    ({"a": "a", "b": "b", "c": "cbc"}, ["NEG-fixed", "NEG-linear", "EG"], "linear"),
])
def test_validate_rep_negatives(images, classes, fragment):
    t = rose(images, classes)
    bad = validate_rep(t)
    assert bad and any(fragment in v for v in bad), bad


def test_non_surjective_map_is_not_a_homotopy_equivalence():
    t = rose({"a": "aa", "b": "ba"}, ["EG", "EG"], r=2)
    assert not is_homotopy_equivalence(t)


def test_circuit_images_stay_circuits():
    t = rep_file("dual_psi").rep
    c = f_sharp(t, circ("dual_psi", "AB"))
    assert isinstance(c, Circuit) and c == iterate(t, circ("dual_psi", "BA"), 1)
