"""Nielsen paths of exponentially growing height.

A Nielsen path is a path ``p`` with ``f_#(p) = p``.  The height-i indivisible
one, if it exists, is unique up to reversal; when there is none the
convention is a trivial path at a vertex of H_i.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .graph_core import StratumKind
from .paths import Word, inverse, word_key
from .toprep import TopRep, f_sharp, illegal_turns, iterate


class NielsenKind(str, enum.Enum):
    TRIVIAL = "trivial"
    NONCLOSED = "nonclosed"
    CLOSED = "closed"


class NielsenUniquenessError(ValueError):
    """Two fixed indivisible paths that are not reverses of each other."""


@dataclass(frozen=True)
class NielsenData:
    rho: Word
    kind: NielsenKind
    height: int
    vertex: str
    declared: bool = False
    bounded_search: bool = False
    caveats: tuple[str, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.kind is NielsenKind.TRIVIAL


@dataclass(frozen=True)
class GeometricityReport:
    geometric: bool
    free_factor_system: bool
    reason: str


def verify_nielsen(t: TopRep, p: Sequence[int]) -> bool:
    return f_sharp(t, tuple(p)) == tuple(p)


def is_indivisible(t: TopRep, p: Sequence[int]) -> bool:
    """False if ``p`` splits at an interior vertex into two nontrivial
    Nielsen paths.  (Every vertex is fixed, so every split point is a
    candidate.)"""
    p = tuple(p)
    return not any(verify_nielsen(t, p[:j]) and verify_nielsen(t, p[j:])
                   for j in range(1, len(p)))


def _orient(p: Word) -> Word:
    q = inverse(p)
    return p if word_key(p) <= word_key(q) else q


def _kind(t: TopRep, rho: Word) -> NielsenKind:
    g = t.graph
    return NielsenKind.CLOSED if g.initial[rho[0]] == g.terminal[rho[-1]] else NielsenKind.NONCLOSED


def least_vertex_of_stratum(t: TopRep, i: int) -> str:
    g = t.graph
    return min(v for e in g.stratum(i).edges for v in (g.initial[e], g.terminal[e]))


def trivial_nielsen(t: TopRep, height: int, caveats=()) -> NielsenData:
    return NielsenData((), NielsenKind.TRIVIAL, height, least_vertex_of_stratum(t, height),
                       caveats=tuple(caveats))


def declared_nielsen(t: TopRep, rho: Sequence[int], height: int | None = None) -> NielsenData:
    """Verify a user-declared rho and package it."""
    height = t.r if height is None else height
    rho = tuple(rho)
    g = t.graph
    if not rho:
        return trivial_nielsen(t, height, ["declared trivial"])
    if not verify_nielsen(t, rho):
        raise ValueError("declared rho is not a Nielsen path: f_#(rho) != rho")
    if not any(g.stratum_of(e) == height for e in rho):
        raise ValueError(f"declared rho does not cross stratum {height}")
    if any(g.stratum_of(e) > height for e in rho):
        raise ValueError(f"declared rho is not contained in G_{height}")
    if not is_indivisible(t, rho):
        raise ValueError("declared rho is a concatenation of two Nielsen paths")
    rho = _orient(rho)
    return NielsenData(rho, _kind(t, rho), height, g.initial[rho[0]], declared=True)


def fixed_paths(t: TopRep, height: int, max_len: int, max_seed_iters: int = 1,
                illegal_at_most: int | None = 1) -> tuple[list[Word], list[Word]]:
    """Enumerate reduced paths in G_height crossing H_height, of length at most
    ``max_len`` and with exactly one illegal turn of that height (or any
    number if ``illegal_at_most`` is None), that return to themselves after at
    most ``max_seed_iters`` applications of f_#.

    Returns ``(fixed, periodic)``.  When ``max_seed_iters == 1`` the walk is
    pruned with two exact tests on a prefix q of a would-be fixed path p:
    cancellation between f_#(q) and the image of the rest is at most
    ``L * (max_len - |q|)`` letters (L = longest edge image), so
    ``|f_#(q)|`` is bounded and the prefix of f_#(q) that must survive has to
    agree with q.
    """
    g = t.graph
    allowed = sorted(g.filtration_edges(height))
    turns = illegal_turns(t, height)
    em = t.edge_map
    L = max(len(em[e]) for e in allowed)
    prune = max_seed_iters == 1
    out_by_vertex = {v: g.out_edges(v, allowed) for v in g.vertices}
    fixed: list[Word] = []
    periodic: list[Word] = []

    path: list[int] = []
    image: list[int] = []

    def consistent() -> bool:
        rem = max_len - len(path)
        if len(image) > max_len + L * rem:
            return False
        surv = min(len(image) - L * rem, len(path))
        return surv <= 0 or image[:surv] == path[:surv]

    def visit(n_illegal: int, crosses: bool):
        if path and crosses and (illegal_at_most is None or n_illegal == illegal_at_most):
            p = tuple(path)
            if tuple(image) == p:
                fixed.append(p)
            elif max_seed_iters > 1:
                for k in range(2, max_seed_iters + 1):
                    if iterate(t, p, k) == p:
                        periodic.append(p)
                        break
        if len(path) == max_len:
            return
        last = path[-1] if path else None
        v = g.terminal[last] if path else None
        for e in (out_by_vertex[v] if path else []):
            if e == -last:
                continue
            turn_illegal = (g.stratum_of(last) == height and g.stratum_of(e) == height
                            and frozenset((-last, e)) in turns)
            ni = n_illegal + turn_illegal
            if illegal_at_most is not None and ni > illegal_at_most:
                continue
            popped, pushed = [], 0
            for x in em[e]:
                if image and pushed == 0 and image[-1] == -x:
                    popped.append(image.pop())
                else:
                    image.append(x)
                    pushed += 1
            path.append(e)
            if not prune or consistent():
                visit(ni, crosses or g.stratum_of(e) == height)
            path.pop()
            if pushed:
                del image[-pushed:]
            image.extend(reversed(popped))

    for v in sorted(g.vertices):
        for e in out_by_vertex[v]:
            image[:] = list(em[e])
            path[:] = [e]
            if not prune or consistent():
                visit(0, g.stratum_of(e) == height)
    return fixed, periodic


def fixed_directions(t: TopRep, height: int, power: int = 1) -> list[int]:
    """Oriented H_height edges e whose f^power-image starts with e."""
    g = t.graph
    out = []
    for k in sorted(abs(e) for e in g.stratum(height).edges):
        for e in (k, -k):
            if iterate(t, (e,), power)[:1] == (e,):
                out.append(e)
    return out


def fixed_ray(t: TopRep, e: int, length: int, power: int = 1, budget: int = 1_000_000) -> Word:
    """Prefix of length ``length`` of the ray lim f^(power*k)_#(e), for a fixed
    direction e; the prefix is taken once two successive iterates agree on
    twice that many letters (or on all of the shorter one)."""
    prev = (e,)
    while True:
        cur = iterate(t, prev, power, budget)
        need = 2 * length
        common = 0
        for x, y in zip(prev, cur):
            if x != y:
                break
            common += 1
        if common >= min(need, len(cur)) and len(prev) >= need:
            return cur[:length]
        if len(cur) <= len(prev) and common == len(cur):
            return cur[:length]
        prev = cur


def _ray_candidates(t: TopRep, height: int, max_len: int, power: int) -> list[Word]:
    """Paths R1[:n] * R2[:m]^-1 built from two fixed-direction rays, with
    n + m <= max_len, that are fixed by f^power."""
    dirs = fixed_directions(t, height, power)
    rays = {e: fixed_ray(t, e, max_len, power) for e in dirs}
    g = t.graph
    found = []
    for e1 in dirs:
        for e2 in dirs:
            r1, r2 = rays[e1], rays[e2]
            for n in range(1, min(len(r1), max_len - 1) + 1):
                for m in range(1, min(len(r2), max_len - n) + 1):
                    a, b = r1[:n], r2[:m]
                    if a[-1] == b[-1] or g.terminal[a[-1]] != g.terminal[b[-1]]:
                        continue
                    p = a + inverse(b)
                    if iterate(t, p, power) == p:
                        found.append(p)
    return found


def search_inp(t: TopRep, height: int | None = None, max_len: int = 12,
               max_seed_iters: int = 1) -> NielsenData:
    """Bounded search for the indivisible Nielsen path of an EG height.

    Such a path starts and ends with H_height edges whose images begin with
    those same edges, and each half up to the illegal turn is a prefix of the
    ray grown from that edge; candidates are therefore read off pairs of
    rays.  ``max_seed_iters > 1`` also looks for paths fixed by a power of f
    and reports them as a caveat.

    Returns the trivial convention if nothing of length <= ``max_len`` is
    found; the result is flagged ``bounded_search`` since longer Nielsen paths
    are not excluded.  Raises :class:`NielsenUniquenessError` if two
    reversal-inequivalent indivisible Nielsen paths turn up.
    """
    height = t.r if height is None else height
    g = t.graph
    if g.stratum(height).kind is not StratumKind.EG:
        raise ValueError(f"stratum {height} is not EG")
    caveats = [f"bounded search: paths of length <= {max_len}"]
    if not illegal_turns(t, height):
        caveats.append(f"no illegal turns in stratum {height}, so no Nielsen path of that height")
        return _bounded_trivial(t, height, caveats)
    fixed = _ray_candidates(t, height, max_len, 1)
    periodic = set()
    for k in range(2, max_seed_iters + 1):
        periodic |= {_orient(p) for p in _ray_candidates(t, height, max_len, k)
                     if not verify_nielsen(t, p)}
    if periodic:
        caveats.append(f"{len(periodic)} periodic but not fixed Nielsen path(s) found; "
                       "the map is not rotationless")
    found = sorted({_orient(p) for p in fixed if is_indivisible(t, p)}, key=word_key)
    if len(found) > 1:
        raise NielsenUniquenessError(
            f"{len(found)} reversal-inequivalent indivisible Nielsen paths of height {height}")
    if not found:
        return _bounded_trivial(t, height, caveats)
    rho = found[0]
    return NielsenData(rho, _kind(t, rho), height, g.initial[rho[0]],
                       bounded_search=True, caveats=tuple(caveats))


def _bounded_trivial(t: TopRep, height: int, caveats) -> NielsenData:
    nd = trivial_nielsen(t, height, caveats)
    return NielsenData(nd.rho, nd.kind, nd.height, nd.vertex, bounded_search=True,
                       caveats=nd.caveats)


def classify(nd: NielsenData) -> GeometricityReport:
    if nd.kind is NielsenKind.CLOSED:
        return GeometricityReport(True, False, "rho is a closed Nielsen path: geometric stratum")
    if nd.kind is NielsenKind.NONCLOSED:
        return GeometricityReport(False, True, "rho is a nonclosed Nielsen path: nongeometric")
    return GeometricityReport(False, True, "rho is trivial: nongeometric")


def split_at_illegal_turn(t: TopRep, nd: NielsenData) -> tuple[Word, Word] | None:
    """``(alpha, beta)`` with rho = alpha * beta at its unique illegal turn of
    height ``nd.height``, or None if rho is trivial or the turn is not unique."""
    if nd.trivial:
        return None
    g = t.graph
    turns = illegal_turns(t, nd.height)
    rho = nd.rho
    cuts = [j for j in range(1, len(rho))
            if g.stratum_of(rho[j - 1]) == nd.height and g.stratum_of(rho[j]) == nd.height
            and frozenset((-rho[j - 1], rho[j])) in turns]
    if len(cuts) != 1:
        return None
    return rho[:cuts[0]], rho[cuts[0]:]

