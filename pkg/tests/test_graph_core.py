import pytest

from weakattract.graph_core import (ContractibleComponentError, MarkedGraph, Subgraph, components,
                                    free_basis, validate_graph)
from weakattract.paths import free_reduce

ROSE3 = MarkedGraph.build(["v"], [("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v")],
                          [(["a"], "NEG-fixed", None), (["b"], "NEG-linear", None), (["c"], "EG", None)])

THETA = MarkedGraph.build(["p", "q"], [("x", "p", "q"), ("y", "p", "q"), ("z", "p", "q")],
                          [(["x", "y", "z"], "EG", None)])


def test_rose_is_valid_and_has_betti_three():
    assert validate_graph(ROSE3) == []
    (comp,) = components(Subgraph.whole(ROSE3))
    assert comp.betti == 3 and comp.vertices == ("v",)


def test_theta_basis_is_two_loops_through_the_tree():
    (comp,) = components(Subgraph.whole(THETA))
    assert comp.betti == 2
    basis = free_basis(THETA, comp)
    assert len(basis) == 2
    for w in basis:
        assert w == free_reduce(w) and w
        assert THETA.initial[w[0]] == THETA.terminal[w[-1]] == comp.basepoint


def test_tree_component_is_contractible():
    sub = Subgraph(THETA, frozenset({1}))
    (comp,) = components(sub)
    assert comp.betti == 0 and not comp.noncontractible
    with pytest.raises(ContractibleComponentError):
        free_basis(THETA, comp)


def test_empty_subgraph_has_no_components():
    assert components(Subgraph(ROSE3, frozenset())) == []


def test_filtration_and_strata_lookup():
    assert ROSE3.n_strata == 3
    assert ROSE3.stratum_of(-3) == 3
    assert ROSE3.filtration_edges(2) == frozenset({1, 2})


@pytest.mark.parametrize("edges,strata,fragment", [
    ([("a", "v", "w")], [(["a"], "EG", None)], "not a vertex"),
    ([("a", "v", "v"), ("b", "v", "v")], [(["a"], "EG", None)], "no stratum"),
    ([("a", "v", "v"), ("b", "v", "v")], [(["a", "b"], "NEG-fixed", None)], "single edge"),
    ([("a", "v", "v"), ("b", "v", "v")], [(["a"], "ZERO", None), (["b"], "EG", None)], "no enveloping"),
    ([("a", "v", "v"), ("b", "v", "v")], [(["a"], "EG", None), (["b"], "ZERO", 1)], "envelope"),
])
def test_validate_graph_reports(edges, strata, fragment):
    g = MarkedGraph.build(["v"], edges, strata)
    assert any(fragment in v for v in validate_graph(g))
