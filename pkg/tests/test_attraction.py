import pytest
from hypothesis import given, settings, strategies as st

from weakattract.attraction import (ComplementarityError, DictionaryError, DualitySetup,
                                    InconclusiveError, Method, Verdict, all_circuits, attracted_circuit,
                                    attracted_path, cert_summary, check_dictionary,
                                    concat_closure_audit, duality_audit, member_pairs,
                                    theorem_f_audit, tile_in_other_graph, translate, uniform_m, with_Z)
from weakattract.nonattracting import nonattracting_system
from weakattract.paths import cyclic_reduce, cyclically_tighten, free_reduce, inverse
from weakattract.toprep import BudgetExceeded
from conftest import circ, rep_file, system, word


def ex1():
    return rep_file("ex1").rep, system("ex1")


def dual_setup(to_psi=None, to_phi=None):
    a, b = rep_file("dual_phi"), rep_file("dual_psi")
    if to_psi is None:
        to_psi = {a.graph.edge_id(k): (b.graph.edge_id(v),) for k, v in a.to_partner.items()}
    if to_phi is None:
        to_phi = {b.graph.edge_id(k): (a.graph.edge_id(v),) for k, v in a.from_partner.items()}
    return DualitySetup(a.rep, b.rep, to_psi, to_phi, system("dual_phi"), system("dual_psi"))


def test_verdict_examples():
    t, ns = ex1()
    v = attracted_circuit(t, ns, circ("ex1", "ab"))
    assert (v.verdict, v.method, v.k) == (Verdict.NOT_ATTRACTED, Method.MEMBERSHIP, None)
    assert cert_summary(ns, v.cert) == "lift:a.b"
    v = attracted_circuit(t, ns, circ("ex1", "c"), m=2)
    assert (v.verdict, v.method, v.k) == (Verdict.ATTRACTED, Method.ITERATION, 2)
    assert attracted_circuit(t, ns, circ("ex1", "c")).k == 3
    assert attracted_circuit(t, ns, circ("ex1", "cab"), m=1).k == 1


def test_path_examples():
    t, ns = ex1()
    assert not attracted_path(t, ns, word("ex1", "ab")).attracted
    v = attracted_path(t, ns, word("ex1", "ca"))
    assert v.attracted and v.k == 3
    v = attracted_path(t, ns, ())
    assert v.verdict is Verdict.NOT_ATTRACTED and cert_summary(ns, v.cert) == "lift:1"


def test_attraction_matches_letter_oracle_on_ex1():
    # f fixes <a, b> and c -> cbc: a circuit is attracted iff it crosses c
    t, ns = ex1()
    for c in all_circuits(t.graph, 5):
        assert attracted_circuit(t, ns, c).attracted == any(abs(e) == 3 for e in c.word)


def test_attraction_on_exg_is_everything_but_rho_powers():
    t, ns = rep_file("exg").rep, system("exg")
    rho = circ("exg", "aba'b'")
    for c in all_circuits(t.graph, 4):
        expect = c not in (rho, rho.inverse())
        assert attracted_circuit(t, ns, c).attracted == expect


letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=8).map(tuple)


@settings(max_examples=60, deadline=None)
@given(letters, st.integers(0, 7))
def test_rotation_and_inversion_invariance(w, k):
    t, ns = ex1()
    w = cyclically_tighten(free_reduce(w))
    if not w:
        return
    k %= len(w)
    base = attracted_circuit(t, ns, cyclic_reduce(None, w))
    rot = attracted_circuit(t, ns, cyclic_reduce(None, w[k:] + w[:k]))
    inv = attracted_circuit(t, ns, cyclic_reduce(None, inverse(w)))
    assert base.verdict == rot.verdict == inv.verdict
    assert base.k == rot.k == inv.k


def test_tile_order_guard():
    t, ns = rep_file("exg").rep, system("exg")
    with pytest.raises(ValueError, match="too small"):
        attracted_circuit(t, ns, circ("exg", "aab"), m=0)


def test_inconclusive_and_budget():
    t, ns = ex1()
    with pytest.raises(InconclusiveError) as exc:
        attracted_circuit(t, ns, circ("ex1", "c"), m=3, k_max=1)
    assert exc.value.word == "c"
    with pytest.raises(BudgetExceeded):
        attracted_circuit(t, ns, circ("ex1", "c"), m=3, budget=5)


def test_complementarity_error_on_corrupted_Z():
    t, ns = ex1()
    # with Z = {a, c} the tile still crosses b, so it is not a member subpath,
    # yet the member "c" grows into it
    bad = with_Z(ns, [1, 3])
    with pytest.raises(ComplementarityError):
        attracted_circuit(t, bad, circ("ex1", "c"), both=True)
    v = attracted_circuit(t, ns, circ("ex1", "ab"), both=True)
    assert v.method is Method.BOTH and not v.attracted


def test_theorem_f_small_corpus_and_negative_control():
    t, ns = ex1()
    corpus = [circ("ex1", "ab"), circ("ex1", "c")]
    assert theorem_f_audit(t, ns, corpus).ok
    rep = theorem_f_audit(t, with_Z(ns, [1]), corpus)
    assert [v.split(":")[0] for v in rep.violations] == ["ab"]


def test_dictionary_round_trip():
    ds = dual_setup()
    assert check_dictionary(ds) == []
    g = ds.rep_phi.graph
    for k in range(1, g.n_edges + 1):
        c = cyclic_reduce(None, (k,)) if g.initial[k] == g.terminal[k] else None
        if c is not None:
            assert translate(ds.swapped(), translate(ds, c)) == c


def test_duality_audit_and_symmetry():
    ds = dual_setup()
    fwd = duality_audit(ds, all_circuits(ds.rep_phi.graph, 3))
    back = duality_audit(ds.swapped(), all_circuits(ds.rep_psi.graph, 3))
    assert fwd.ok and back.ok and fwd.checked == back.checked


def test_one_sided_dictionary_corruption_is_rejected():
    ds = dual_setup()
    to_psi = dict(ds.to_psi)
    to_psi[1], to_psi[3] = to_psi[3], to_psi[1]
    bad = DualitySetup(ds.rep_phi, ds.rep_psi, to_psi, ds.to_phi, ds.ns_phi, ds.ns_psi)
    assert check_dictionary(bad)
    with pytest.raises(DictionaryError):
        duality_audit(bad, all_circuits(ds.rep_phi.graph, 2))


def test_consistent_dictionary_corruption_gives_mismatches():
    ds = dual_setup()
    x, a = ds.rep_phi.graph.edge_id("x"), ds.rep_phi.graph.edge_id("a")
    X, A = ds.rep_psi.graph.edge_id("X"), ds.rep_psi.graph.edge_id("A")
    to_psi = dict(ds.to_psi)
    to_psi[x], to_psi[a] = (A,), (X,)
    to_phi = dict(ds.to_phi)
    to_phi[X], to_phi[A] = (a,), (x,)
    bad = DualitySetup(ds.rep_phi, ds.rep_psi, to_psi, to_phi, ds.ns_phi, ds.ns_psi)
    assert check_dictionary(bad) == []
    fwd = duality_audit(bad, all_circuits(ds.rep_phi.graph, 2))
    back = duality_audit(bad.swapped(), all_circuits(ds.rep_psi.graph, 2))
    assert fwd.violations and back.violations
    assert len(fwd.violations) == len(back.violations)


def test_uniform_m_examples():
    t, ns = ex1()
    assert uniform_m(t, ns, [circ("ex1", "c")], m_plus=1).m == 1
    assert uniform_m(t, ns, [circ("ex1", "ab"), circ("ex1", "a")], m_plus=1).m == 1
    res = uniform_m(t, ns, [circ("ex1", "c")], m_plus=3, m_max=2)
    assert not res.found and res.worst == "c"


def test_uniform_m_with_dual_tile():
    ds = dual_setup()
    tile_minus = tile_in_other_graph(ds, 1)
    res = uniform_m(ds.rep_phi, ds.ns_phi, all_circuits(ds.rep_phi.graph, 3), 2, tile_minus)
    assert res.found


def test_concat_examples_and_random_pairs():
    t, ns = ex1()
    ab, ba = word("ex1", "ab"), word("ex1", "ba")
    rep = concat_closure_audit(t, ns, [(ab, ba), (ab, inverse(ab))])
    assert rep.ok and rep.checked == 2
    ns_g = system("exg")
    rep = concat_closure_audit(ns_g.rep, ns_g, member_pairs(ns_g, 100, seed=3))
    assert rep.ok and rep.checked == 100


def test_exl_attraction():
    rf = rep_file("exl")
    ns = nonattracting_system(rf.rep, rf.rho)
    assert not attracted_circuit(rf.rep, ns, circ("exl", "e'ceaba'b'")).attracted
    assert attracted_circuit(rf.rep, ns, circ("exl", "e'cea")).attracted
