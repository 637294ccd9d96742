"""The nonattracting subgraph Z, the graph K with its immersion h: K -> G,
the subgroup system read off from K, and membership in the path groupoid
generated by Z-edges and rho-hat.

Membership is decided by lifting through h.  K is subdivided along the
rho-hat edge so that h becomes a labelled graph whose labels are G-edges;
an immersion is then a deterministic automaton and lifting is a walk.
"""
from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph_core import Component, MarkedGraph, StratumKind, Subgraph, components, free_basis
from .nielsen import NielsenData, classify, declared_nielsen, search_inp, split_at_illegal_turn
from .paths import Circuit, Word, cyclic_reduce, free_reduce, inverse, occurrences
from .toprep import DEFAULT_BUDGET, BudgetExceeded, TopRep, f_sharp, iterates

RHO_EDGE = "E_rho"


class ImmersionError(ValueError):
    pass


def default_k_max(t: TopRep) -> int:
    return 8 + t.graph.n_strata


# -- membership certificates ---------------------------------------------------

@dataclass(frozen=True)
class Lift:
    """A lift to K: ``k_edges`` are oriented K-edge ids.  For a circuit the
    lift reads the circuit from offset ``offset`` of its stored rotation."""

    k_edges: tuple[int, ...]
    component: int | None = None
    offset: int = 0

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Obstruction:
    """Lifting fails after reading ``position`` letters."""

    position: int

    def __bool__(self):
        return False


# -- the labelled graph --------------------------------------------------------

class _Automaton:
    """K subdivided along E_rho.  Nodes are K-vertex names (strings) and
    ``(j,)`` for the interior subdivision points of E_rho.  Each transition
    carries a tag: a signed K-edge id for Z-edges, ``(+-k_rho, j)`` for the
    j-th step along E_rho in either direction."""

    def __init__(self, g: MarkedGraph, z_edges: Iterable[int], rho: Word,
                 rho_ends: tuple[str, str] | None):
        self.trans: dict[object, dict[int, tuple[object, object]]] = {}
        self.node_vertex: dict[object, str] = {}
        self.conflicts: list[str] = []
        z_edges = sorted(z_edges)
        for k, e in enumerate(z_edges, start=1):
            self._add(g.initial[e], e, g.terminal[e], k, -k, g)
        if rho:
            kr = len(z_edges) + 1
            x0, x1 = rho_ends
            n = len(rho)
            nodes = [x0] + [(j,) for j in range(1, n)] + [x1]
            for j, lab in enumerate(rho):
                if j + 1 < n:
                    self.node_vertex[nodes[j + 1]] = g.terminal[lab]
                self._add(nodes[j], lab, nodes[j + 1], (kr, j), (-kr, n - 1 - j), g)

    def _add(self, u, lab, v, tag, back_tag, g):
        for a, x, b, t in ((u, lab, v, tag), (v, -lab, u, back_tag)):
            if isinstance(a, str):
                self.node_vertex[a] = a
            row = self.trans.setdefault(a, {})
            if x in row:
                self.conflicts.append(f"two K-directions at {a} map to {g.name(x)}")
            row[x] = (b, t)

    def walk(self, start, word: Sequence[int]) -> tuple[list, list, int]:
        """Nodes visited, tags used and the number of letters read."""
        nodes, tags = [start], []
        cur = start
        trans = self.trans
        for i, x in enumerate(word):
            step = trans.get(cur, {}).get(x)
            if step is None:
                return nodes, tags, i
            cur, t = step
            nodes.append(cur)
            tags.append(t)
        return nodes, tags, len(word)

    def nodes_over(self, v: str, original_only: bool = False) -> list:
        out = [n for n, w in self.node_vertex.items() if w == v and
               (isinstance(n, str) or not original_only)]
        return sorted(out, key=lambda n: (not isinstance(n, str), str(n)))


def _k_edges(tags: Sequence) -> tuple[int, ...]:
    """Collapse the tags of a walk between K-vertices into K-edges."""
    out = []
    for t in tags:
        if isinstance(t, int):
            out.append(t)
        elif t[1] == 0:
            out.append(t[0])
    return tuple(out)


def _rho_ends(t: TopRep, nd: NielsenData) -> tuple[str, str] | None:
    if nd.trivial:
        return None
    g = t.graph
    return g.initial[nd.rho[0]], g.terminal[nd.rho[-1]]


def _make_automaton(t: TopRep, z_edges, nd: NielsenData) -> _Automaton:
    return _Automaton(t.graph, z_edges, nd.rho, _rho_ends(t, nd))


def _lifts_as_path(auto: _Automaton, g: MarkedGraph, w: Word) -> bool:
    if not w:
        return True
    for s in auto.nodes_over(g.initial[w[0]], original_only=True):
        nodes, _, n = auto.walk(s, w)
        if n == len(w) and isinstance(nodes[-1], str):
            return True
    return False


# -- the system ----------------------------------------------------------------

@dataclass
class NAComponent:
    component: Component          # component of K
    basis_k: list[Word]           # free basis as K-loops at the basepoint
    basis: list[Word]             # the same loops pushed into G
    circuits: list[Circuit]       # conjugacy classes of the basis elements


@dataclass
class NonattractingSystem:
    rep: TopRep
    Z: Subgraph
    rho: NielsenData
    K: MarkedGraph
    h: dict[int, Word]
    components: list[NAComponent]
    geometric: bool
    free_factor_system: bool
    caveats: tuple[str, ...] = ()
    _auto: _Automaton = field(default=None, repr=False)
    _sigma: tuple = field(default=None, repr=False)

    @property
    def rho_hat(self) -> Word:
        return self.rho.rho

    @property
    def rho_k_edge(self) -> int | None:
        return self.K.n_edges if self.rho_hat else None

    def k_vertex_component(self) -> dict[str, int]:
        out = {}
        for i, c in enumerate(self.components):
            for v in c.component.vertices:
                out[v] = i
        return out

    def push(self, k_word: Sequence[int]) -> Word:
        """h applied to a K-path, tightened."""
        return free_reduce(x for e in k_word for x in self.h[e])


# -- attraction of single edges ------------------------------------------------

def covered_top_edges(t: TopRep, rho: Word, w: Sequence[int]) -> tuple[int, int]:
    """``(total, covered)``: H_r edges in ``w`` and the most of them that a
    family of pairwise disjoint occurrences of rho or its inverse can cover
    (weighted interval scheduling)."""
    g = t.graph
    top = [1 if g.stratum_of(e) == t.r else 0 for e in w]
    total = sum(top)
    if not rho or total == 0:
        return total, 0
    prefix = [0]
    for x in top:
        prefix.append(prefix[-1] + x)
    occ = sorted(occurrences(tuple(w), rho), key=lambda o: o.end)
    ends = [o.end for o in occ]
    best = [0] * (len(occ) + 1)
    for j, o in enumerate(occ):
        weight = prefix[o.end] - prefix[o.start]
        p = bisect.bisect_right(ends, o.start, 0, j)
        best[j + 1] = max(best[j], best[p] + weight)
    return total, best[-1]


@dataclass(frozen=True)
class EdgeAttraction:
    attracted: bool
    k: int | None
    inconclusive: bool = False
    k_reached: int = 0


def edge_attracted(t: TopRep, nd: NielsenData, e: int, k_max: int | None = None,
                   budget: int = DEFAULT_BUDGET) -> EdgeAttraction:
    """Least k <= k_max such that f^k_#(e) has an H_r edge outside every
    disjoint family of rho-hat occurrences."""
    if t.in_top(e):
        return EdgeAttraction(True, 0)
    k_max = default_k_max(t) if k_max is None else k_max
    k = 0
    try:
        for k, w in iterates(t, (e,), k_max, budget):
            total, covered = covered_top_edges(t, nd.rho, w)
            if total > covered:
                return EdgeAttraction(True, k, k_reached=k)
    except BudgetExceeded as exc:
        return EdgeAttraction(False, None, inconclusive=True, k_reached=exc.k - 1)
    return EdgeAttraction(False, None, k_reached=k)


# -- Z -------------------------------------------------------------------------

@dataclass
class ZResult:
    Z: Subgraph
    witnesses: dict[int, tuple[int, int]]     # stratum -> (edge, k)
    removed_by_closure: list[int]
    caveats: list[str]


def _with_zero_strata(t: TopRep, candidates: set[int]) -> set[int]:
    """Keep ZERO strata exactly when their envelope is kept."""
    g = t.graph
    out = {i for i in candidates if g.stratum(i).kind is not StratumKind.ZERO}
    for i, s in enumerate(g.strata, start=1):
        if s.kind is StratumKind.ZERO and s.envelope in out:
            out.add(i)
    return out


def build_Z(t: TopRep, nd: NielsenData, k_max: int | None = None,
            budget: int = DEFAULT_BUDGET) -> ZResult:
    """Greatest union of strata with no attraction witness and closed under f_#.

    Strata with an edge attracted within ``k_max`` steps are dropped first.
    The rest are pruned until every remaining edge E has f_#(E) in the
    groupoid generated by the remaining edges and rho-hat; that groupoid is
    then f_#-invariant, so none of its edges can ever be attracted.
    """
    g = t.graph
    k_max = default_k_max(t) if k_max is None else k_max
    witnesses: dict[int, tuple[int, int]] = {}
    caveats = [f"attraction witnesses searched up to k_max = {k_max}"]
    cand: set[int] = set()
    for i, s in enumerate(g.strata, start=1):
        if i == t.r or s.kind is StratumKind.ZERO:
            continue
        hit = None
        for e in sorted(abs(x) for x in s.edges):
            res = edge_attracted(t, nd, e, k_max, budget)
            if res.inconclusive:
                caveats.append(f"edge {g.name(e)}: budget exceeded after k = {res.k_reached}")
            if res.attracted:
                hit = (e, res.k)
                break
        if hit:
            witnesses[i] = hit
        else:
            cand.add(i)
    cand = _with_zero_strata(t, cand)
    removed: list[int] = []
    while True:
        z_edges = {abs(e) for i in cand for e in g.stratum(i).edges}
        auto = _make_automaton(t, z_edges, nd)
        bad = set()
        for i in sorted(cand):
            for e in g.stratum(i).edges:
                if not _lifts_as_path(auto, g, f_sharp(t, (abs(e),))):
                    bad.add(i)
                    break
        if not bad:
            break
        removed.extend(sorted(bad))
        cand = _with_zero_strata(t, cand - bad)
    z_edges = frozenset(abs(e) for i in cand for e in g.stratum(i).edges)
    return ZResult(Subgraph(g, z_edges), witnesses, removed, caveats)


# -- K -------------------------------------------------------------------------

def build_K(t: TopRep, nd: NielsenData, Z: Subgraph, caveats: Iterable[str] = ()) -> NonattractingSystem:
    """Glue Z and the domain of rho-hat into K and read off the subgroup system.

    When rho-hat is nontrivial, an endpoint of E_rho is glued to its image
    when that image lies in Z, and the two endpoints are glued to each other
    when they have the same image; K-vertices are therefore named by their
    images in G.  Raises :class:`ImmersionError` if h folds.
    """
    g = t.graph
    z_edges = sorted(Z.edges)
    edges = [(g.edge_names[e - 1], g.initial[e], g.terminal[e]) for e in z_edges]
    h: dict[int, Word] = {}
    for k, e in enumerate(z_edges, start=1):
        h[k], h[-k] = (e,), (-e,)
    if not nd.trivial:
        x0, x1 = _rho_ends(t, nd)
        name = RHO_EDGE
        while name in g.edge_names:
            name += "_"
        edges.append((name, x0, x1))
        k = len(edges)
        h[k], h[-k] = nd.rho, inverse(nd.rho)
    verts = {v for _, a, b in edges for v in (a, b)}
    K = MarkedGraph.build(verts, edges)

    auto = _make_automaton(t, Z.edges, nd)
    if auto.conflicts:
        raise ImmersionError("h is not an immersion: " + "; ".join(auto.conflicts))

    comps = []
    for c in components(Subgraph.whole(K)):
        if not c.noncontractible:
            continue
        bk = free_basis(K, c)
        bg = [free_reduce(x for e in w for x in h[e]) for w in bk]
        comps.append(NAComponent(c, bk, bg, [cyclic_reduce(None, w) for w in bg]))
    rep = classify(nd)
    return NonattractingSystem(t, Z, nd, K, h, comps, rep.geometric, rep.free_factor_system,
                               tuple(caveats), _auto=auto)


def nonattracting_system(t: TopRep, rho: Sequence[int] | None = None, *, max_len: int = 10,
                         k_max: int | None = None, budget: int = DEFAULT_BUDGET) -> NonattractingSystem:
    """rho-hat (declared and verified, or searched for), then Z, then K."""
    nd = declared_nielsen(t, rho) if rho is not None else search_inp(t, t.r, max_len)
    zr = build_Z(t, nd, k_max, budget)
    return build_K(t, nd, zr.Z, list(nd.caveats) + zr.caveats)


# -- membership ----------------------------------------------------------------

def member(ns: NonattractingSystem, p: Sequence[int] | Circuit) -> Lift | Obstruction:
    """Decide whether a path or circuit lies in the groupoid by lifting it
    through h.  The trivial path is a member."""
    auto = ns._auto
    g = ns.rep.graph
    comp_of = ns.k_vertex_component()
    if isinstance(p, Circuit):
        w = p.word
        best = 0
        for s in auto.nodes_over(g.initial[w[0]]):
            nodes, tags, n = auto.walk(s, w)
            if n == len(w) and nodes[-1] == s:
                # read the loop from a K-vertex so E_rho is crossed whole
                j = next(i for i, x in enumerate(nodes[:-1]) if isinstance(x, str))
                return Lift(_k_edges(tags[j:] + tags[:j]), comp_of.get(nodes[j]), j)
            best = max(best, n)
        return Obstruction(best)
    w = tuple(p)
    if not w:
        return Lift(())
    best = 0
    for s in auto.nodes_over(g.initial[w[0]], original_only=True):
        nodes, tags, n = auto.walk(s, w)
        if n == len(w) and isinstance(nodes[-1], str):
            return Lift(_k_edges(tags), comp_of.get(s))
        best = max(best, n)
    return Obstruction(best)


def is_member_subpath(ns: NonattractingSystem, w: Sequence[int]) -> bool:
    """Whether ``w`` occurs as a subpath of some element of the groupoid."""
    w = tuple(w)
    if not w:
        return True
    auto = ns._auto
    return any(auto.walk(s, w)[2] == len(w)
               for s in auto.nodes_over(ns.rep.graph.initial[w[0]]))


# -- windows -------------------------------------------------------------------

def window_half_width(ns: NonattractingSystem) -> int:
    """L = max(|alpha|, |beta|) for rho = alpha * beta split at its illegal
    turn; |rho| if there is no unique such turn; 1 for trivial rho-hat."""
    if ns.rho.trivial:
        return 1
    ab = split_at_illegal_turn(ns.rep, ns.rho)
    if ab is None:
        return len(ns.rho_hat)
    return max(len(ab[0]), len(ab[1]))


def sigma_window_table(ns: NonattractingSystem) -> tuple[int, frozenset[Word]]:
    """``(L, Sigma)``: Sigma holds every path of length <= 2L that occurs in an
    element of the groupoid, enumerated as reduced walks in subdivided K."""
    if ns._sigma is not None:
        return ns._sigma
    L = window_half_width(ns)
    auto = ns._auto
    out: set[Word] = set()

    def grow(node, word):
        if word:
            out.add(tuple(word))
        if len(word) == 2 * L:
            return
        for x, (nxt, _) in auto.trans.get(node, {}).items():
            if word and x == -word[-1]:
                continue
            word.append(x)
            grow(nxt, word)
            word.pop()

    for node in list(auto.trans):
        grow(node, [])
    ns._sigma = (L, frozenset(out))
    return ns._sigma


@dataclass(frozen=True)
class AllWindowsPass:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class FailingWindow:
    window: Word
    position: int

    def __bool__(self):
        return False


def window_filter(ns: NonattractingSystem, p: Sequence[int] | Circuit) -> AllWindowsPass | FailingWindow:
    """Necessary condition for membership: every subpath of length <= 2L lies
    in Sigma.  Windows of a circuit are read from its periodic line."""
    L, sigma = sigma_window_table(ns)
    width = 2 * L
    if isinstance(p, Circuit):
        n = len(p.word)
        line = p.word * (-(-(n + width) // n))
        starts = range(n)
        lim = lambda i: width
    else:
        line = tuple(p)
        starts = range(len(line))
        lim = lambda i: min(width, len(line) - i)
    for i in starts:
        for m in range(1, lim(i) + 1):
            w = tuple(line[i:i + m])
            if w not in sigma:
                return FailingWindow(w, i)
    return AllWindowsPass()


# -- sampling members ----------------------------------------------------------

def random_member_path(ns: NonattractingSystem, rng: random.Random, max_k_edges: int = 6) -> Word:
    """h-image of a random reduced K-path between K-vertices (may be trivial)."""
    K = ns.K
    if K.n_edges == 0:
        return ()
    v = rng.choice(sorted(K.vertices))
    word: list[int] = []
    for _ in range(rng.randint(1, max_k_edges)):
        opts = [e for e in K.out_edges(v) if not word or e != -word[-1]]
        if not opts:
            break
        e = rng.choice(opts)
        word.append(e)
        v = K.terminal[e]
    return ns.push(word)


def random_member_circuit(ns: NonattractingSystem, rng: random.Random, max_gens: int = 4) -> Circuit | None:
    """A random nontrivial element of one of the subgroups, as a circuit."""
    if not ns.components:
        return None
    comp = rng.choice(ns.components)
    while True:
        word = []
        for _ in range(rng.randint(1, max_gens)):
            gen = rng.choice(comp.basis)
            if rng.random() < 0.5:
                gen = inverse(gen)
            word.extend(gen)
        w = free_reduce(word)
        try:
            return cyclic_reduce(None, w)
        except ValueError:
            continue


def member_circuits(ns: NonattractingSystem, max_k_len: int) -> list[Circuit]:
    """Member circuits that are images of cyclically reduced K-loops with at
    most ``max_k_len`` K-edges."""
    K = ns.K
    found: set[Circuit] = set()
    for v in sorted(K.vertices):
        stack = [(v, ())]
        while stack:
            cur, word = stack.pop()
            if word and cur == v and word[0] != -word[-1]:
                found.add(cyclic_reduce(None, ns.push(word)))
            if len(word) == max_k_len:
                continue
            for e in K.out_edges(cur):
                if word and e == -word[-1]:
                    continue
                stack.append((K.terminal[e], word + (e,)))
    return sorted(found, key=Circuit.sort_key)


# -- structural checks ---------------------------------------------------------

def check_z_invariants(ns: NonattractingSystem, inp_strata: Iterable[int] = ()) -> list[str]:
    """Z avoids H_r and contains every fixed and linear edge and every EG
    stratum listed in ``inp_strata`` (strata known to carry a Nielsen path of
    their own height)."""
    t = ns.rep
    g = t.graph
    out = []
    if any(t.in_top(e) for e in ns.Z.edges):
        out.append("Z contains an edge of H_r")
    for i, s in enumerate(g.strata, start=1):
        inside = all(ns.Z.contains(e) for e in s.edges)
        if s.kind in (StratumKind.NEG_FIXED, StratumKind.NEG_LINEAR) and i != t.r and not inside:
            out.append(f"stratum {i} ({s.kind.value}) is not in Z")
    for i in inp_strata:
        if i != t.r and not all(ns.Z.contains(e) for e in g.stratum(i).edges):
            out.append(f"EG stratum {i} carries a Nielsen path of its height but is not in Z")
    return out


def components_pairwise_distinct(ns: NonattractingSystem) -> list[str]:
    """Towards malnormality: every basis circuit of a component lifts into
    that component and no other."""
    out = []
    for i, c in enumerate(ns.components):
        for circ in c.circuits:
            cert = member(ns, circ)
            if not cert or cert.component != i:
                out.append(f"basis circuit of component {i} lifts to component "
                           f"{getattr(cert, 'component', None)}")
    return out
