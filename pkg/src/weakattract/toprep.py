"""Topological representatives ``f: G -> G`` and their tightened action.

``TopRep.edge_map`` holds the image path of every oriented edge (both
signs).  Every vertex is required to be fixed; a map that permutes vertices
should be replaced by a suitable power before it is used here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph_core import MarkedGraph, StratumKind, Subgraph, components, free_basis
from .paths import Circuit, Word, cyclic_reduce, free_reduce, inverse, is_reduced

DEFAULT_BUDGET = 1_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, k: int, length: int, budget: int):
        self.k, self.length, self.budget = k, length, budget
        super().__init__(f"length {length} exceeds budget {budget} while computing iterate {k}")


class ReducibleMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class TopRep:
    graph: MarkedGraph
    edge_map: Mapping[int, Word]
    r: int
    vertex_map: Mapping[str, str] = field(default=None)

    def __post_init__(self):
        if self.vertex_map is None:
            object.__setattr__(self, "vertex_map", {v: v for v in self.graph.vertices})

    @classmethod
    def build(cls, graph: MarkedGraph, images: Mapping[int, Sequence[int]], r: int,
              vertex_map: Mapping[str, str] | None = None) -> "TopRep":
        """``images`` gives f(e) for positive edge ids; inverses are filled in."""
        em = {}
        for k, w in images.items():
            em[k] = tuple(w)
            em[-k] = inverse(w)
        return cls(graph, em, r, dict(vertex_map) if vertex_map else None)

    @property
    def top_edges(self) -> tuple[int, ...]:
        return tuple(sorted(abs(e) for e in self.graph.stratum(self.r).edges))

    def in_top(self, e: int) -> bool:
        return self.graph.stratum_of(e) == self.r


# -- transition matrices ------------------------------------------------------

def transition_matrix(t: TopRep, i: int) -> np.ndarray:
    """Entry (j, k) counts crossings of the j-th edge of H_i, in either
    direction, by the image of the k-th edge of H_i (edges in id order)."""
    edges = sorted(abs(e) for e in t.graph.stratum(i).edges)
    pos = {e: n for n, e in enumerate(edges)}
    M = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for col, e in enumerate(edges):
        for x in t.edge_map[e]:
            if abs(x) in pos:
                M[pos[abs(x)], col] += 1
    return M


def is_irreducible(M: np.ndarray) -> bool:
    if M.shape[0] == 0:
        return False
    n, labels = connected_components(M.astype(bool).astype(np.int8), directed=True,
                                     connection="strong")
    return n == 1 and (M.shape[0] > 1 or M[0, 0] > 0)


def _is_permutation(M: np.ndarray) -> bool:
    return bool(np.all((M == 0) | (M == 1)) and np.all(M.sum(axis=0) == 1)
                and np.all(M.sum(axis=1) == 1))


@dataclass(frozen=True)
class GrowthBounds:
    lower: Fraction
    upper: Fraction

    @property
    def exponential(self) -> bool:
        return self.lower > 1


def pf_growth(t: TopRep, i: int, n: int = 16) -> GrowthBounds:
    """Rational bounds on the Perron-Frobenius eigenvalue of M_i.

    With x the row sums of M^n (a positive vector when M is irreducible),
    min_j (Mx)_j / x_j <= lambda <= max_j (Mx)_j / x_j.
    """
    M = transition_matrix(t, i)
    if not is_irreducible(M):
        raise ReducibleMatrixError(f"transition matrix of stratum {i} is reducible")
    rows = [[int(v) for v in row] for row in M]
    x = [1] * len(rows)
    for _ in range(n):
        x = [sum(a * b for a, b in zip(row, x)) for row in rows]
    y = [sum(a * b for a, b in zip(row, x)) for row in rows]
    ratios = [Fraction(a, b) for a, b in zip(y, x)]
    return GrowthBounds(min(ratios), max(ratios))


# -- validation ----------------------------------------------------------------

def validate_rep(t: TopRep) -> list[str]:
    """Check the representative's invariants and a subset of stratum axioms.

    Checks run: images are nonempty reduced paths with endpoints matching the
    vertex map; every vertex is fixed; ``f(e')`` is the inverse of ``f(e)``;
    images of H_i edges lie in G_i; H_r is declared EG; ZERO iff M_i = 0;
    EG strata are irreducible with Perron-Frobenius eigenvalue > 1; NEG
    edges satisfy f(E) = E u with u in G_(i-1) (u trivial for fixed edges,
    a nontrivial closed Nielsen path for linear edges).  Complete splittings
    and the remaining CT axioms are not checked.
    """
    g = t.graph
    out = []
    for v in g.vertices:
        if t.vertex_map.get(v) != v:
            out.append(f"vertex {v} is not fixed (maps to {t.vertex_map.get(v)}); "
                       "pass a power of the map that fixes every vertex")
    for k in range(1, g.n_edges + 1):
        name = g.edge_names[k - 1]
        img = t.edge_map.get(k)
        if img is None:
            out.append(f"edge {name}: no image")
            continue
        if tuple(t.edge_map.get(-k, ())) != inverse(img):
            out.append(f"edge {name}: image of {name}' is not the inverse of the image of {name}")
        if not img:
            out.append(f"edge {name}: image is the trivial path")
            continue
        if any(g.terminal[img[j]] != g.initial[img[j + 1]] for j in range(len(img) - 1)):
            out.append(f"edge {name}: image is not a path")
        elif not is_reduced(img):
            out.append(f"edge {name}: image is not reduced")
        if (g.initial[img[0]] != t.vertex_map.get(g.initial[k])
                or g.terminal[img[-1]] != t.vertex_map.get(g.terminal[k])):
            out.append(f"edge {name}: image endpoints do not match the vertex map")
    if out:
        return out

    if not 1 <= t.r <= g.n_strata:
        return out + [f"lamination stratum {t.r} does not exist"]
    if g.stratum(t.r).kind is not StratumKind.EG:
        out.append(f"stratum {t.r} carrying the lamination is not declared EG")

    for i, s in enumerate(g.strata, start=1):
        allowed = g.filtration_edges(i)
        for e in s.edges:
            bad = sorted({g.name(abs(x)) for x in t.edge_map[e] if abs(x) not in allowed})
            if bad:
                out.append(f"filtration: image of {g.name(e)} in stratum {i} crosses "
                           f"{', '.join(bad)} outside G_{i}")
        M = transition_matrix(t, i)
        zero = not M.any()
        if s.kind is StratumKind.ZERO and not zero:
            out.append(f"stratum {i}: declared ZERO but M_{i} != 0 (M_{i} = {M.tolist()})")
        if s.kind is not StratumKind.ZERO and zero:
            out.append(f"stratum {i}: M_{i} = 0 but stratum declared {s.kind.value}")
        if s.kind is StratumKind.EG and not zero:
            if not is_irreducible(M):
                out.append(f"stratum {i}: declared EG but M_{i} is reducible")
            elif _is_permutation(M):
                out.append(f"stratum {i}: declared EG but M_{i} is a permutation matrix (no growth)")
        if s.kind.is_neg and len(s.edges) == 1:
            out.extend(_check_neg(t, i))
    return out


def _check_neg(t: TopRep, i: int) -> list[str]:
    g = t.graph
    s = g.stratum(i)
    E = abs(s.edges[0])
    img = t.edge_map[E]
    name = g.name(E)
    if img[0] != E:
        return [f"stratum {i}: NEG edge {name} image does not begin with {name}"]
    u = img[1:]
    lower = g.filtration_edges(i - 1)
    if any(abs(x) not in lower for x in u):
        return [f"stratum {i}: NEG edge {name} image is not {name} followed by a path in G_{i - 1}"]
    if s.kind is StratumKind.NEG_FIXED and u:
        return [f"stratum {i}: declared fixed but f({name}) != {name}"]
    if s.kind is StratumKind.NEG_LINEAR:
        if not u:
            return [f"stratum {i}: declared linear but f({name}) = {name}"]
        if g.initial[u[0]] != g.terminal[u[-1]]:
            return [f"stratum {i}: linear edge suffix u is not closed"]
        if f_sharp(t, u) != u:
            return [f"stratum {i}: linear edge suffix u is not a Nielsen path"]
    return []


# -- the induced map on paths and circuits -------------------------------------

def f_sharp(t: TopRep, p: Sequence[int] | Circuit) -> Word | Circuit:
    """Tightened image of a path, or cyclically tightened image of a circuit."""
    em = t.edge_map
    if isinstance(p, Circuit):
        raw = [x for e in p.word for x in em[e]]
        return cyclic_reduce(None, raw)
    raw = [x for e in p for x in em[e]]
    return free_reduce(raw)


def image_length(t: TopRep, p: Sequence[int] | Circuit) -> int:
    em = t.edge_map
    return sum(len(em[e]) for e in p)


def iterate(t: TopRep, p: Sequence[int] | Circuit, k: int, budget: int = DEFAULT_BUDGET):
    """f^k_#(p).  Raises :class:`BudgetExceeded` as soon as the untightened
    image at some step would be longer than ``budget``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    cur = p if isinstance(p, Circuit) else tuple(p)
    for step in range(1, k + 1):
        n = image_length(t, cur)
        if n > budget:
            raise BudgetExceeded(step, n, budget)
        cur = f_sharp(t, cur)
    return cur


def iterates(t: TopRep, p, k_max: int, budget: int = DEFAULT_BUDGET):
    """Yield ``(k, f^k_#(p))`` for k = 0..k_max."""
    cur = p if isinstance(p, Circuit) else tuple(p)
    yield 0, cur
    for step in range(1, k_max + 1):
        n = image_length(t, cur)
        if n > budget:
            raise BudgetExceeded(step, n, budget)
        cur = f_sharp(t, cur)
        yield step, cur


def tile(t: TopRep, m: int, budget: int = DEFAULT_BUDGET) -> Word:
    """The m-tile f^m_#(E) of the least-id edge E of H_r."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return iterate(t, (t.top_edges[0],), m, budget)


def tile_growth_report(t: TopRep, m_max: int, budget: int = DEFAULT_BUDGET) -> list[dict]:
    """Tile lengths with a flag wherever |tile(m+1)| < lambda_lower |tile(m)| - C.

    C is twice the longest edge image, an allowance for cancellation at the
    junctions of edge images.
    """
    lam = pf_growth(t, t.r).lower
    C = 2 * max(len(w) for w in t.edge_map.values())
    rows, prev = [], None
    for m, w in iterates(t, (t.top_edges[0],), m_max, budget):
        flag = prev is not None and len(w) < lam * prev - C
        rows.append({"m": m, "length": len(w), "flagged": bool(flag)})
        prev = len(w)
    return rows


# -- turns ---------------------------------------------------------------------

def derivative(t: TopRep, d: int) -> int:
    """Df on directions: the first edge of f(d)."""
    return t.edge_map[d][0]


def is_illegal(t: TopRep, d1: int, d2: int) -> bool:
    """A turn (pair of directions at a vertex) is illegal if some iterate of
    Df identifies its two directions."""
    seen = set()
    while (d1, d2) not in seen:
        if d1 == d2:
            return True
        seen.add((d1, d2))
        d1, d2 = derivative(t, d1), derivative(t, d2)
    return False


def illegal_turns(t: TopRep, i: int) -> set[frozenset[int]]:
    """Illegal turns with both directions in H_i."""
    g = t.graph
    dirs = [e for k in g.stratum(i).edges for e in (abs(k), -abs(k))]
    out = set()
    for a in range(len(dirs)):
        for b in range(a + 1, len(dirs)):
            d1, d2 = dirs[a], dirs[b]
            if g.initial[d1] == g.initial[d2] and is_illegal(t, d1, d2):
                out.add(frozenset((d1, d2)))
    return out


def count_illegal_turns(t: TopRep, word: Sequence[int], i: int, turns=None) -> int:
    """Illegal turns of height i taken by ``word`` (between consecutive H_i edges)."""
    g = t.graph
    if turns is None:
        turns = illegal_turns(t, i)
    n = 0
    for a, b in zip(word, word[1:]):
        if g.stratum_of(a) == i and g.stratum_of(b) == i and frozenset((-a, b)) in turns:
            n += 1
    return n


# -- homotopy equivalence check (Stallings folding) ----------------------------

def is_homotopy_equivalence(t: TopRep) -> bool:
    """Whether f induces an isomorphism on pi_1 of the (connected, valence >= 2)
    graph G.

    Folds the petals of f_#(generators) into an immersed labelled graph; f_*
    is onto iff that graph is a degree-one cover of G, and onto implies
    injective because free groups of finite rank are Hopfian.
    """
    g = t.graph
    comps = components(Subgraph.whole(g))
    if len(comps) != 1:
        return False
    comp = comps[0]
    base = comp.basepoint
    gens = [f_sharp(t, w) for w in free_basis(g, comp)] if comp.betti else []
    # labelled graph: node ids, node -> G-vertex, edges (u, label, v)
    vert = {0: base}
    edges: list[tuple[int, int, int]] = []
    for w in gens:
        cur = 0
        for j, x in enumerate(w):
            if j == len(w) - 1:
                nxt = 0
            else:
                nxt = len(vert)
                vert[nxt] = g.terminal[x]
            edges.append((cur, x, nxt))
            cur = nxt
    parent = {n: n for n in vert}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    changed = True
    while changed:
        changed = False
        star: dict[tuple[int, int], int] = {}
        for u, x, v in edges:
            for a, lab, b in ((find(u), x, find(v)), (find(v), -x, find(u))):
                key = (a, lab)
                if key in star and star[key] != b:
                    parent[find(b)] = find(star[key])
                    changed = True
                    break
                star[key] = b
            if changed:
                break
        if changed:
            edges = list({(find(u), x, find(v)) for u, x, v in edges})
    nodes = {find(n) for n in vert}
    labels: dict[int, set[int]] = {n: set() for n in nodes}
    for u, x, v in edges:
        labels[find(u)].add(x)
        labels[find(v)].add(-x)
    if len(nodes) != len(g.vertices):
        return False
    return all(labels[n] == set(g.out_edges(vert[n])) for n in nodes)
