"""Weak attraction of circuits and finite paths to the top lamination.

Two independent procedures: membership in the nonattracting groupoid (a
lift through K), and iteration of f_# until a tile f^m_#(E) of H_r shows up.
The audits below compare them with each other and across an inverse pair.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph_core import MarkedGraph, Subgraph
from .nonattracting import (Lift, NonattractingSystem, Obstruction, build_K, default_k_max,
                            is_member_subpath, member, random_member_path)
from .paths import Circuit, TrivialClassError, Word, contains, cyclic_reduce, format_word, free_reduce
from .toprep import DEFAULT_BUDGET, BudgetExceeded, TopRep, iterate, iterates, tile

DEFAULT_TILE_M = 3


class Verdict(str, enum.Enum):
    ATTRACTED = "ATTRACTED"
    NOT_ATTRACTED = "NOT_ATTRACTED"


class Method(str, enum.Enum):
    MEMBERSHIP = "MEMBERSHIP"
    ITERATION = "ITERATION"
    BOTH = "BOTH"


class InconclusiveError(RuntimeError):
    """Neither a lift nor a tile occurrence within k_max: the input is suspect."""

    def __init__(self, word: str, k_max: int, obstruction: int, final_length: int):
        self.word, self.k_max = word, k_max
        super().__init__(
            f"{word}: no lift (stuck at position {obstruction}) and no tile occurrence in "
            f"f^k_# for k <= {k_max} (final length {final_length}); the representative may "
            "not satisfy the required train track properties, or k_max is too small")


class ComplementarityError(RuntimeError):
    """A member of the nonattracting groupoid whose iterates contain a tile."""


class DictionaryError(ValueError):
    pass


@dataclass(frozen=True)
class AttractionVerdict:
    verdict: Verdict
    method: Method
    k: int | None = None
    m: int | None = None
    cert: Lift | Obstruction | None = None

    @property
    def attracted(self) -> bool:
        return self.verdict is Verdict.ATTRACTED


def _tile_word(t: TopRep, ns: NonattractingSystem, m: int, budget: int) -> Word:
    w = tile(t, m, budget)
    if is_member_subpath(ns, w):
        raise ValueError(f"tile order m = {m} is too small: tile({m}) occurs inside a member "
                         "of the nonattracting groupoid; use a larger m")
    return w


def first_tile_occurrence(t: TopRep, p: Sequence[int] | Circuit, tile_w: Word, k_max: int,
                          budget: int = DEFAULT_BUDGET) -> tuple[int | None, int]:
    """Least k <= k_max with tile_w (or its inverse) in f^k_#(p), and the
    length of the last iterate computed."""
    n = 0
    for k, w in iterates(t, p, k_max, budget):
        n = len(w)
        if w and contains(w, tile_w):
            return k, n
    return None, n


def _decide(t, ns, p, m, k_max, budget, both):
    k_max = default_k_max(t) if k_max is None else k_max
    cert = member(ns, p)
    if cert and not both:
        return AttractionVerdict(Verdict.NOT_ATTRACTED, Method.MEMBERSHIP, cert=cert)
    tile_w = _tile_word(t, ns, m, budget)
    k, n = first_tile_occurrence(t, p, tile_w, k_max, budget)
    if cert:
        if k is not None:
            raise ComplementarityError(f"{format_word(t.graph, p)} lifts to K but f^{k}_# of it "
                                       f"contains tile({m})")
        return AttractionVerdict(Verdict.NOT_ATTRACTED, Method.BOTH, cert=cert)
    if k is None:
        raise InconclusiveError(format_word(t.graph, p), k_max, cert.position, n)
    return AttractionVerdict(Verdict.ATTRACTED, Method.BOTH if both else Method.ITERATION,
                             k=k, m=m, cert=cert)


def attracted_circuit(t: TopRep, ns: NonattractingSystem, c: Circuit, m: int = DEFAULT_TILE_M,
                      k_max: int | None = None, budget: int = DEFAULT_BUDGET,
                      both: bool = False) -> AttractionVerdict:
    """Membership first; if there is no lift, iterate until tile(m) appears.

    With ``both=True`` members are iterated too, and a tile occurrence in a
    member raises :class:`ComplementarityError`.  :class:`InconclusiveError`
    means neither procedure resolved the circuit within ``k_max``.
    """
    return _decide(t, ns, c, m, k_max, budget, both)


def attracted_path(t: TopRep, ns: NonattractingSystem, p: Sequence[int], m: int = DEFAULT_TILE_M,
                   k_max: int | None = None, budget: int = DEFAULT_BUDGET,
                   both: bool = False) -> AttractionVerdict:
    """As :func:`attracted_circuit` for a finite path (endpoints at vertices)."""
    p = tuple(p)
    if not p:
        return AttractionVerdict(Verdict.NOT_ATTRACTED, Method.MEMBERSHIP, cert=Lift(()))
    return _decide(t, ns, p, m, k_max, budget, both)


def cert_summary(ns: NonattractingSystem, cert) -> str:
    if cert is None:
        return ""
    if isinstance(cert, Obstruction):
        return f"stuck@{cert.position}"
    names = [ns.K.name(e) for e in cert.k_edges]
    return "lift:" + (".".join(names) if names else "1")


# -- corpora -----------------------------------------------------------------

def all_circuits(g: MarkedGraph, max_len: int) -> list[Circuit]:
    """Every oriented circuit of length <= max_len, each once, ordered by
    length then letter order."""
    out: set[Circuit] = set()
    for v in g.vertices:
        stack = [(v, ())]
        while stack:
            cur, w = stack.pop()
            if w and cur == v and w[-1] != -w[0]:
                out.add(cyclic_reduce(None, w))
            if len(w) == max_len:
                continue
            for e in g.out_edges(cur):
                if w and e == -w[-1]:
                    continue
                stack.append((g.terminal[e], w + (e,)))
    return sorted(out, key=Circuit.sort_key)


def all_paths(g: MarkedGraph, max_len: int) -> list[Word]:
    """Every nontrivial reduced path of length <= max_len."""
    out = []
    for v in sorted(g.vertices):
        stack = [(v, ())]
        while stack:
            cur, w = stack.pop()
            if w:
                out.append(w)
            if len(w) == max_len:
                continue
            for e in g.out_edges(cur):
                if not w or e != -w[-1]:
                    stack.append((g.terminal[e], w + (e,)))
    return sorted(set(out), key=lambda w: (len(w), [2 * abs(x) + (x < 0) for x in w]))


# -- audits ------------------------------------------------------------------

@dataclass
class AuditReport:
    mode: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def theorem_f_audit(t: TopRep, ns: NonattractingSystem, corpus: Iterable[Circuit],
                    m: int = DEFAULT_TILE_M, k_max: int | None = None,
                    budget: int = DEFAULT_BUDGET, monotone_steps: int = 2) -> AuditReport:
    """Membership and iteration must disagree on every circuit: exactly one of
    "lifts to K" and "some f^k_# contains tile(m)" holds.

    Iteration runs for every circuit, members included, and continues
    ``monotone_steps`` past the first tile occurrence; a tile that then
    disappears is a diagnostic, not a violation."""
    k_max = default_k_max(t) if k_max is None else k_max
    tile_w = _tile_word(t, ns, m, budget)
    g = t.graph
    rep = AuditReport("theorem-f")
    for c in corpus:
        rep.checked += 1
        word = format_word(g, c)
        cert = member(ns, c)
        hits = []
        try:
            for k, w in iterates(t, c, k_max, budget):
                hits.append(contains(w, tile_w))
                if True in hits and k >= hits.index(True) + monotone_steps:
                    break
        except BudgetExceeded as exc:
            rep.violations.append(f"{word}: budget exceeded at k = {exc.k}")
            continue
        found = any(hits)
        k_first = hits.index(True) if found else None
        if bool(cert) == found:
            what = "lifts to K and is attracted" if found else "neither lifts nor is attracted"
            rep.violations.append(f"{word}: {what} (k_max = {k_max}, m = {m})")
        if found and not all(hits[k_first:]):
            rep.diagnostics.append(f"{word}: tile present at k = {k_first} but absent at k = "
                                   f"{k_first + hits[k_first:].index(False)}")
        rep.records.append({"word": word, "verdict": (Verdict.ATTRACTED if found else
                                                      Verdict.NOT_ATTRACTED).value,
                            "method": Method.BOTH.value, "k": k_first,
                            "cert": cert_summary(ns, cert)})
    return rep


def with_Z(ns: NonattractingSystem, z_edges: Iterable[int]) -> NonattractingSystem:
    """Same representative and rho-hat, different Z (used for negative controls)."""
    t = ns.rep
    return build_K(t, ns.rho, Subgraph(t.graph, frozenset(z_edges)), ("Z overridden",))


# -- duality -----------------------------------------------------------------

def _translate_word(dictionary: Mapping[int, Word], w: Sequence[int]) -> Word:
    out = []
    for e in w:
        img = dictionary[abs(e)]
        out.extend(img if e > 0 else tuple(-x for x in reversed(img)))
    return free_reduce(out)


@dataclass
class DualitySetup:
    """A representative of phi, one of phi^-1, and edge dictionaries between
    the two graphs (each edge goes to a path in the other graph)."""

    rep_phi: TopRep
    rep_psi: TopRep
    to_psi: dict[int, Word]
    to_phi: dict[int, Word]
    ns_phi: NonattractingSystem | None = None
    ns_psi: NonattractingSystem | None = None

    def swapped(self) -> "DualitySetup":
        return DualitySetup(self.rep_psi, self.rep_phi, self.to_phi, self.to_psi,
                            self.ns_psi, self.ns_phi)


def check_dictionary(ds: DualitySetup) -> list[str]:
    """Each edge must translate there and back to itself after tightening,
    and the two dictionaries must cover every edge."""
    out = []
    for here, there, fwd, back in ((ds.rep_phi.graph, ds.rep_psi.graph, ds.to_psi, ds.to_phi),
                                   (ds.rep_psi.graph, ds.rep_phi.graph, ds.to_phi, ds.to_psi)):
        for k in range(1, here.n_edges + 1):
            if k not in fwd:
                out.append(f"edge {here.name(k)} has no translation")
                continue
            if any(abs(x) > there.n_edges for x in fwd[k]) or any(abs(x) not in back for x in fwd[k]):
                out.append(f"edge {here.name(k)}: translation uses an untranslatable edge")
                continue
            rt = _translate_word(back, fwd[k])
            if rt != (k,):
                out.append(f"edge {here.name(k)} -> {format_word(there, fwd[k])} -> "
                           f"{format_word(here, rt)}")
    return out


def translate(ds: DualitySetup, c: Circuit) -> Circuit:
    return cyclic_reduce(None, _translate_word(ds.to_psi, c.word))


def duality_audit(ds: DualitySetup, corpus: Iterable[Circuit], m: int = DEFAULT_TILE_M,
                  k_max: int | None = None, budget: int = DEFAULT_BUDGET) -> AuditReport:
    """For each class, "not attracted to the phi lamination" must agree with
    "not attracted to the dual lamination under phi^-1" after translation."""
    bad = check_dictionary(ds)
    if bad:
        raise DictionaryError("dictionaries are not mutually inverse: " + "; ".join(bad))
    rep = AuditReport("duality")
    g, h = ds.rep_phi.graph, ds.rep_psi.graph
    for c in corpus:
        rep.checked += 1
        try:
            c2 = translate(ds, c)
        except TrivialClassError:
            rep.violations.append(f"{format_word(g, c)}: translates to the trivial class")
            continue
        v1 = attracted_circuit(ds.rep_phi, ds.ns_phi, c, m, k_max, budget)
        v2 = attracted_circuit(ds.rep_psi, ds.ns_psi, c2, m, k_max, budget)
        if v1.attracted != v2.attracted:
            rep.violations.append(f"{format_word(g, c)} ~ {format_word(h, c2)}: "
                                  f"{v1.verdict.value} vs {v2.verdict.value}")
        rep.records.append({"word": format_word(g, c), "verdict": v1.verdict.value,
                            "method": v1.method.value, "k": v1.k,
                            "cert": f"{format_word(h, c2)}:{v2.verdict.value}"})
    return rep


def tile_in_other_graph(ds: DualitySetup, m: int, budget: int = DEFAULT_BUDGET) -> Word:
    """The dual tile f'^m_#(E') carried over to the phi graph and tightened."""
    return _translate_word(ds.to_phi, tile(ds.rep_psi, m, budget))


# -- uniform m ---------------------------------------------------------------

@dataclass
class UniformM:
    m: int | None
    table: list[dict]
    worst: str | None = None

    @property
    def found(self) -> bool:
        return self.m is not None


def uniform_m(t: TopRep, ns: NonattractingSystem, corpus: Iterable[Circuit], m_plus: int,
              tile_minus: Word | None = None, m_max: int = 10,
              budget: int = DEFAULT_BUDGET) -> UniformM:
    """Least m in 1..m_max such that every circuit is carried by the
    nonattracting system, contains ``tile_minus``, or has f^m_#-image
    containing tile(m_plus).

    Exponents are tried in increasing order and the search stops at the first
    that works, so ``table`` lists, per circuit, the reason and the good
    exponents among those tried."""
    tile_w = _tile_word(t, ns, m_plus, budget)
    g = t.graph
    table, pending = [], []
    for c in corpus:
        word = format_word(g, c)
        if member(ns, c):
            table.append({"word": word, "reason": "carried", "ks": None})
        elif tile_minus and contains(c, tile_minus):
            table.append({"word": word, "reason": "dual-tile", "ks": None})
        else:
            row = {"word": word, "reason": "iterate", "ks": []}
            table.append(row)
            pending.append([row, c])
    for m in range(1, m_max + 1):
        for item in pending:
            row, cur = item
            item[1] = cur = iterate(t, cur, 1, budget)
            if contains(cur, tile_w):
                row["ks"].append(m)
        if all(row["ks"] and row["ks"][-1] == m for row, _ in pending):
            return UniformM(m, table)
    rows = [row for row, _ in pending]
    worst = max(rows, key=lambda r: r["ks"][0] if r["ks"] else m_max + 1)["word"] if rows else None
    return UniformM(None, table, worst)


# -- concatenation closure ---------------------------------------------------

def concat_closure_audit(t: TopRep, ns: NonattractingSystem, samples: Iterable[tuple[Word, Word]],
                         m: int = DEFAULT_TILE_M, k_max: int | None = None,
                         budget: int = DEFAULT_BUDGET) -> AuditReport:
    """Tightened concatenations of non-attracted paths must be non-attracted.
    Pairs that are not composable or not both non-attracted are skipped."""
    g = t.graph
    rep = AuditReport("concat")
    for p, q in samples:
        if p and q and g.terminal[p[-1]] != g.initial[q[0]]:
            rep.diagnostics.append(f"{format_word(g, p)} * {format_word(g, q)}: not composable")
            continue
        if any(attracted_path(t, ns, x, m, k_max, budget).attracted for x in (p, q)):
            rep.diagnostics.append(f"{format_word(g, p)} * {format_word(g, q)}: skipped, "
                                   "a factor is attracted")
            continue
        rep.checked += 1
        pq = free_reduce(tuple(p) + tuple(q))
        v = attracted_path(t, ns, pq, m, k_max, budget)
        if v.attracted:
            rep.violations.append(f"{format_word(g, p)} * {format_word(g, q)} = "
                                  f"{format_word(g, pq)} is attracted at k = {v.k}")
        rep.records.append({"word": format_word(g, pq), "verdict": v.verdict.value,
                            "method": v.method.value, "k": v.k, "cert": cert_summary(ns, v.cert)})
    return rep


def member_pairs(ns: NonattractingSystem, n: int, seed: int = 0) -> list[tuple[Word, Word]]:
    """``n`` composable pairs of random members."""
    rng = random.Random(seed)
    g = ns.rep.graph
    out = []
    if ns.K.n_edges == 0:
        return out
    for _ in range(1000 * n):
        if len(out) == n:
            break
        p, q = random_member_path(ns, rng), random_member_path(ns, rng)
        if p and q and g.terminal[p[-1]] == g.initial[q[0]]:
            out.append((p, q))
    return out
