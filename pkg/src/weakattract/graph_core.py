"""Marked graphs with a filtration into strata.

Oriented edges are encoded as nonzero integers: ``k`` is the k-th edge
(1-based) in its stored orientation and ``-k`` is its inverse, so the
involution is ``e -> -e``.  Vertices are strings; "least vertex" always
means least in string order.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class StratumKind(str, enum.Enum):
    EG = "EG"
    NEG_FIXED = "NEG-fixed"
    NEG_LINEAR = "NEG-linear"
    NEG_OTHER = "NEG-other"
    ZERO = "ZERO"

    @property
    def irreducible(self) -> bool:
        return self is not StratumKind.ZERO

    @property
    def is_neg(self) -> bool:
        return self.value.startswith("NEG")


@dataclass(frozen=True)
class Stratum:
    edges: tuple[int, ...]
    kind: StratumKind
    envelope: int | None = None


class ContractibleComponentError(ValueError):
    pass


@dataclass(frozen=True)
class MarkedGraph:
    """A finite graph with oriented edges and an ordered list of strata.

    ``initial`` and ``terminal`` are keyed by every oriented edge (both
    signs).  Use :meth:`build` to get a graph whose involution data is
    consistent by construction; the raw constructor accepts anything so that
    malformed inputs can be represented and reported by :func:`validate_graph`.
    Strata are numbered from 1, bottom to top.
    """

    vertices: tuple[str, ...]
    edge_names: tuple[str, ...]
    initial: Mapping[int, str]
    terminal: Mapping[int, str]
    strata: tuple[Stratum, ...] = ()
    _by_name: dict = field(default=None, repr=False, compare=False, hash=False)
    _stratum_of: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {n: i + 1 for i, n in enumerate(self.edge_names)})
        where = {}
        for idx, s in enumerate(self.strata, start=1):
            for e in s.edges:
                where.setdefault(abs(e), idx)
        object.__setattr__(self, "_stratum_of", where)

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Sequence[tuple[str, str, str]],
              strata: Sequence[tuple[Sequence[str], str | StratumKind, int | None]] = ()):
        """``edges`` is a list of ``(name, initial, terminal)``; ``strata`` a list of
        ``(edge names, kind, envelope)`` ordered bottom to top."""
        names = tuple(e[0] for e in edges)
        initial, terminal = {}, {}
        for k, (_, a, b) in enumerate(edges, start=1):
            initial[k], terminal[k] = a, b
            initial[-k], terminal[-k] = b, a
        index = {n: i + 1 for i, n in enumerate(names)}
        st = tuple(
            Stratum(tuple(index[n] for n in s[0]), StratumKind(s[1]), s[2] if len(s) > 2 else None)
            for s in strata
        )
        return cls(tuple(sorted(set(vertices))), names, initial, terminal, st)

    # -- edges -------------------------------------------------------------
    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    def oriented_edges(self) -> list[int]:
        return [s * k for k in range(1, self.n_edges + 1) for s in (1, -1)]

    def edge_id(self, name: str) -> int:
        return self._by_name[name]

    def name(self, e: int) -> str:
        n = self.edge_names[abs(e) - 1]
        return n if e > 0 else n + "'"

    def out_edges(self, v: str, allowed: Iterable[int] | None = None) -> list[int]:
        """Oriented edges starting at ``v``, ordered by (id, orientation)."""
        pool = range(1, self.n_edges + 1) if allowed is None else sorted(set(abs(e) for e in allowed))
        out = []
        for k in pool:
            for e in (k, -k):
                if self.initial[e] == v:
                    out.append(e)
        return out

    # -- strata ------------------------------------------------------------
    @property
    def n_strata(self) -> int:
        return len(self.strata)

    def stratum_of(self, e: int) -> int:
        return self._stratum_of[abs(e)]

    def stratum(self, i: int) -> Stratum:
        return self.strata[i - 1]

    def filtration_edges(self, i: int) -> frozenset[int]:
        """Positive edge ids of G_i = H_1 u ... u H_i."""
        return frozenset(abs(e) for s in self.strata[:i] for e in s.edges)


@dataclass(frozen=True)
class Subgraph:
    parent: MarkedGraph
    edges: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(abs(e) for e in self.edges))

    @classmethod
    def whole(cls, g: MarkedGraph) -> "Subgraph":
        return cls(g, frozenset(range(1, g.n_edges + 1)))

    @property
    def vertices(self) -> frozenset[str]:
        g = self.parent
        return frozenset(v for e in self.edges for v in (g.initial[e], g.terminal[e]))

    def contains(self, e: int) -> bool:
        return abs(e) in self.edges


@dataclass(frozen=True)
class Component:
    vertices: tuple[str, ...]
    edges: tuple[int, ...]
    betti: int

    @property
    def basepoint(self) -> str:
        return self.vertices[0]

    @property
    def noncontractible(self) -> bool:
        return self.betti >= 1


def validate_graph(g: MarkedGraph) -> list[str]:
    """Return a list of human-readable violations; empty means well formed."""
    out = []
    vs = set(g.vertices)
    for k in range(1, g.n_edges + 1):
        name = g.edge_names[k - 1]
        for e in (k, -k):
            if e not in g.initial or e not in g.terminal:
                out.append(f"edge {g.name(e)}: missing endpoint data")
        if any(e not in g.initial or e not in g.terminal for e in (k, -k)):
            continue
        for v in (g.initial[k], g.terminal[k]):
            if v not in vs:
                out.append(f"edge {name}: endpoint {v!r} is not a vertex")
        if g.initial[-k] != g.terminal[k] or g.terminal[-k] != g.initial[k]:
            out.append(f"edge {name}: endpoints of {name}' do not match reversed endpoints of {name}")
    if len(set(g.edge_names)) != len(g.edge_names):
        out.append("duplicate edge names")

    seen: dict[int, int] = {}
    for i, s in enumerate(g.strata, start=1):
        if not s.edges:
            out.append(f"stratum {i}: empty")
        for e in s.edges:
            if not 1 <= abs(e) <= g.n_edges:
                out.append(f"stratum {i}: unknown edge id {e}")
            elif abs(e) in seen:
                out.append(f"edge {g.name(abs(e))}: in strata {seen[abs(e)]} and {i}")
            else:
                seen[abs(e)] = i
        if s.kind.is_neg and len(s.edges) != 1:
            out.append(f"stratum {i}: NEG stratum must be a single edge")
        if s.kind is StratumKind.ZERO:
            env = s.envelope
            if env is None:
                out.append(f"stratum {i}: ZERO stratum has no enveloping EG stratum")
            elif not (i < env <= g.n_strata) or g.strata[env - 1].kind is not StratumKind.EG:
                out.append(f"stratum {i}: envelope {env} is not an EG stratum of greater index")
        elif s.envelope is not None:
            out.append(f"stratum {i}: envelope declared on a non-ZERO stratum")
    missing = [g.edge_names[k - 1] for k in range(1, g.n_edges + 1) if k not in seen]
    if g.strata and missing:
        out.append(f"edges in no stratum: {', '.join(missing)}")
    return out


def components(s: Subgraph) -> list[Component]:
    """Connected components of ``s`` with their first Betti numbers.

    Isolated vertices are not part of a subgraph (it is given by edges), so the
    empty subgraph has no components.
    """
    g = s.parent
    adj: dict[str, list[int]] = {}
    for e in sorted(s.edges):
        adj.setdefault(g.initial[e], []).append(e)
        adj.setdefault(g.terminal[e], []).append(-e)
    seen: set[str] = set()
    out = []
    for v0 in sorted(adj):
        if v0 in seen:
            continue
        comp_v, comp_e = [], set()
        stack = [v0]
        seen.add(v0)
        while stack:
            v = stack.pop()
            comp_v.append(v)
            for e in adj[v]:
                comp_e.add(abs(e))
                w = g.terminal[e]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(Component(tuple(sorted(comp_v)), tuple(sorted(comp_e)),
                             len(comp_e) - len(comp_v) + 1))
    return out


def spanning_tree(g: MarkedGraph, comp: Component) -> dict[str, tuple[int, ...]]:
    """BFS tree from the basepoint; maps each vertex to the tree path reaching it."""
    allowed = set(comp.edges)
    base = comp.basepoint
    paths = {base: ()}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v, allowed):
            w = g.terminal[e]
            if w not in paths:
                paths[w] = paths[v] + (e,)
                queue.append(w)
    return paths


def free_basis(g: MarkedGraph, comp: Component) -> list[tuple[int, ...]]:
    """Closed reduced paths at the basepoint, one per non-tree edge, freely
    generating pi_1 of the component."""
    if not comp.noncontractible:
        raise ContractibleComponentError(f"component at {comp.basepoint} is contractible")
    paths = spanning_tree(g, comp)
    tree = {abs(e) for p in paths.values() for e in p}
    gens = []
    for k in comp.edges:
        if k in tree:
            continue
        to = paths[g.initial[k]]
        back = tuple(-e for e in reversed(paths[g.terminal[k]]))
        gens.append(_reduce(to + (k,) + back))
    return gens


def _reduce(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)
