"""Edge words: tightening, circuits, occurrence scanning and windows.

A finite path is a tuple of oriented edge ids (see :mod:`graph_core`); the
trivial path is ``()``.  Circuits are stored in a canonical rotation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .graph_core import MarkedGraph

Word = tuple[int, ...]

# above n*m this many letter comparisons, scan with KMP instead of naively
NAIVE_SCAN_LIMIT = 50_000


class NonComposableError(ValueError):
    pass


class TrivialClassError(ValueError):
    pass


class WordSyntaxError(ValueError):
    def __init__(self, text: str, position: int, reason: str):
        self.text, self.position = text, position
        super().__init__(f"{reason} at position {position} in {text!r}")


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def letter_key(x: int) -> int:
    """Order letters as a < a' < b < b' < ... (by edge id, forward first)."""
    return 2 * abs(x) + (x < 0)


def word_key(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(letter_key(x) for x in word)


def check_composable(g: MarkedGraph, word: Sequence[int]) -> None:
    for i in range(len(word) - 1):
        if g.terminal[word[i]] != g.initial[word[i + 1]]:
            raise NonComposableError(
                f"{g.name(word[i])} ends at {g.terminal[word[i]]} but "
                f"{g.name(word[i + 1])} starts at {g.initial[word[i + 1]]} (position {i})")


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def tighten(g: MarkedGraph | None, word: Sequence[int]) -> Word:
    """Freely reduce a composable edge word.  Pass ``g=None`` to skip the
    composability check on hot paths where it is already known."""
    if g is not None:
        check_composable(g, word)
    return free_reduce(word)


def is_reduced(word: Sequence[int]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def cyclically_tighten(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def least_rotation(word: Sequence[int]) -> int:
    """Booth's algorithm: offset of the lexicographically least rotation
    under :func:`letter_key`."""
    s = [letter_key(x) for x in word]
    n = len(s)
    if n == 0:
        return 0
    s = s + s
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def rotate(word: Sequence[int], k: int) -> Word:
    return tuple(word[k:]) + tuple(word[:k])


@dataclass(frozen=True, order=False)
class Circuit:
    """A cyclically reduced closed edge word in its least rotation.

    Equality is oriented: a circuit and its inverse are different objects.
    Use :attr:`unoriented_key` to compare up to orientation.
    """

    word: Word

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def inverse(self) -> "Circuit":
        return _canonical(inverse(self.word))

    @property
    def unoriented_key(self) -> tuple[int, ...]:
        return min(word_key(self.word), word_key(self.inverse().word))

    def sort_key(self):
        return (len(self.word), word_key(self.word))

    def line_segment(self, start: int, length: int) -> Word:
        """Subword of the periodic line starting at offset ``start``."""
        n = len(self.word)
        return tuple(self.word[(start + i) % n] for i in range(length))


def _canonical(w: Sequence[int]) -> Circuit:
    return Circuit(rotate(w, least_rotation(w)))


def cyclic_reduce(g: MarkedGraph | None, word: Sequence[int]) -> Circuit:
    """Circuit represented by a closed composable word."""
    if g is not None and word:
        check_composable(g, word)
        if g.terminal[word[-1]] != g.initial[word[0]]:
            raise NonComposableError("word is not closed")
    w = cyclically_tighten(word)
    if not w:
        raise TrivialClassError("word represents the trivial conjugacy class")
    return _canonical(w)


@dataclass(frozen=True)
class PeriodicLine:
    """The bi-infinite periodization of a circuit."""

    circuit: Circuit

    def segment(self, start: int, length: int) -> Word:
        return self.circuit.line_segment(start, length)


class Occurrence(NamedTuple):
    start: int
    end: int
    forward: bool


def _scan_naive(hay: Sequence[int], needle: Sequence[int]) -> list[int]:
    m = len(needle)
    first = needle[0]
    return [i for i in range(len(hay) - m + 1)
            if hay[i] == first and tuple(hay[i:i + m]) == tuple(needle)]


def _scan_kmp(hay: Sequence[int], needle: Sequence[int]) -> list[int]:
    m = len(needle)
    fail = [0] * m
    k = 0
    for i in range(1, m):
        while k and needle[i] != needle[k]:
            k = fail[k - 1]
        if needle[i] == needle[k]:
            k += 1
        fail[i] = k
    out, k = [], 0
    for i, x in enumerate(hay):
        while k and x != needle[k]:
            k = fail[k - 1]
        if x == needle[k]:
            k += 1
        if k == m:
            out.append(i - m + 1)
            k = fail[k - 1]
    return out


def find_all(hay: Sequence[int], needle: Sequence[int]) -> list[int]:
    """Start positions of (possibly overlapping) occurrences of ``needle``."""
    if not needle or len(needle) > len(hay):
        return []
    if len(hay) * len(needle) <= NAIVE_SCAN_LIMIT:
        return _scan_naive(hay, needle)
    return _scan_kmp(hay, needle)


def occurrences(haystack: Sequence[int] | Circuit, needle: Sequence[int]) -> list[Occurrence]:
    """Occurrences of ``needle`` or its inverse, sorted by start.

    For a circuit, starts range over one period and an occurrence may run
    around the periodic line, so ``end`` can exceed ``len(circuit)``.
    """
    needle = tuple(needle)
    if not needle:
        raise ValueError("needle must be nonempty")
    inv = inverse(needle)
    if isinstance(haystack, Circuit):
        n = len(haystack.word)
        reps = -(-(n + len(needle) - 1) // n)
        hay = haystack.word * reps
        hay = hay[:n + len(needle) - 1]
    else:
        n = None
        hay = tuple(haystack)
    out = [Occurrence(i, i + len(needle), True) for i in find_all(hay, needle)]
    out += [Occurrence(i, i + len(needle), False) for i in find_all(hay, inv)]
    out.sort()
    return out


def _encode(word: Iterable[int]) -> str:
    # one character per letter, so substring search runs in C
    return "".join(map(chr, (0x100 + letter_key(x) for x in word)))


def contains(haystack: Sequence[int] | Circuit, needle: Sequence[int]) -> bool:
    """Whether ``needle`` or its inverse occurs (cyclically, for a circuit)."""
    needle = tuple(needle)
    if not needle:
        raise ValueError("needle must be nonempty")
    if isinstance(haystack, Circuit):
        n = len(haystack.word)
        hay = haystack.word * (-(-(n + len(needle) - 1) // n))
        hay = hay[:n + len(needle) - 1]
    else:
        hay = tuple(haystack)
    h = _encode(hay)
    return _encode(needle) in h or _encode(inverse(needle)) in h


def windows(p: Sequence[int] | Circuit, width: int, with_inverses: bool = False) -> set[Word]:
    """All nonempty subpaths of length at most ``width``.

    For a circuit the start offsets run over one period and windows read the
    periodic line, so windows may wrap around.
    """
    out: set[Word] = set()
    if isinstance(p, Circuit):
        n = len(p.word)
        line = p.word * (-(-(n + width) // n)) if n else ()
        starts = range(n)
        limit = lambda i: width
    else:
        line = tuple(p)
        starts = range(len(line))
        limit = lambda i: min(width, len(line) - i)
    for i in starts:
        for L in range(1, limit(i) + 1):
            out.add(tuple(line[i:i + L]))
    if with_inverses:
        out |= {inverse(w) for w in out}
    return out


# -- word syntax -------------------------------------------------------------

_SEP = re.compile(r"[\s.]+")


def parse_word(g: MarkedGraph, text: str) -> Word:
    """Parse ``"c b c' a"``, ``"cbc'a"`` or ``"c.b.c'.a"`` into edge ids.

    Edge names are matched greedily (longest first) inside unseparated runs;
    an inverse is a single trailing apostrophe.
    """
    names = sorted(g.edge_names, key=len, reverse=True)
    out = []
    pos = 0
    for chunk in _SEP.split(text):
        start = text.find(chunk, pos) if chunk else pos
        pos = start + len(chunk)
        i = 0
        while i < len(chunk):
            for nm in names:
                if chunk.startswith(nm, i):
                    break
            else:
                raise WordSyntaxError(text, start + i, f"unknown edge name {chunk[i:]!r}")
            e = g.edge_id(nm)
            i += len(nm)
            if i < len(chunk) and chunk[i] == "'":
                e = -e
                i += 1
                if i < len(chunk) and chunk[i] == "'":
                    raise WordSyntaxError(text, start + i, f"repeated inverse mark in token {chunk!r}")
            out.append(e)
    return tuple(out)


def format_word(g: MarkedGraph, word: Sequence[int] | Circuit) -> str:
    if isinstance(word, Circuit):
        word = word.word
    if not word:
        return "1"
    sep = "" if all(len(n) == 1 for n in g.edge_names) else " "
    return sep.join(g.name(e) for e in word)
