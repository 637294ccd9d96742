"""Reading and writing representative files (TOML).

Layout::

    [graph]
    vertices = ["v"]
    edges = [
        { name = "a", from = "v", to = "v" },
    ]

    [[strata]]            # bottom to top
    edges = ["a"]
    class = "NEG-fixed"   # EG, NEG-fixed, NEG-linear, NEG-other, ZERO
    # envelope = 3        # ZERO strata only: index of the enveloping EG stratum

    [map]                 # vertices are fixed; one image word per edge
    a = "a"

    [lamination]
    r = 3

    [nielsen]             # optional: declared rho_r, verified on load
    rho_r = "a b a' b'"

    [dictionary]          # optional: edge correspondence with a partner file
    partner = "other.toml"
    to_partner = { a = "x" }
    from_partner = { x = "a" }
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .graph_core import MarkedGraph, StratumKind, validate_graph
from .paths import Word, WordSyntaxError, format_word, parse_word
from .toprep import TopRep, validate_rep

DATA_DIR = Path(__file__).parent / "data"


class RepFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class RepFile:
    graph: MarkedGraph
    images: dict[int, Word]
    r: int
    rho: Word | None = None
    partner: str | None = None
    to_partner: dict[str, str] = field(default_factory=dict)
    from_partner: dict[str, str] = field(default_factory=dict)
    path: Path | None = None

    @property
    def rep(self) -> TopRep:
        return TopRep.build(self.graph, self.images, self.r)

    def partner_path(self) -> Path | None:
        if self.partner is None:
            return None
        base = self.path.parent if self.path else Path.cwd()
        return base / self.partner

    def __eq__(self, other):
        if not isinstance(other, RepFile):
            return NotImplemented
        return (_graph_data(self.graph) == _graph_data(other.graph) and self.images == other.images
                and self.r == other.r and self.rho == other.rho and self.partner == other.partner
                and self.to_partner == other.to_partner and self.from_partner == other.from_partner)


def _graph_data(g: MarkedGraph):
    return (g.vertices, g.edge_names,
            tuple((g.initial[k], g.terminal[k]) for k in range(1, g.n_edges + 1)), g.strata)


def _line_of(text: str, section: str | None, key: str) -> int | None:
    """Best-effort line number of ``key`` inside ``[section]``."""
    current = None
    pat = re.compile(rf"^\s*\"?{re.escape(key)}\"?\s*=")
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s.startswith("["):
            current = s.strip("[] ")
            continue
        if (section is None or current == section) and pat.match(line):
            return i
    return None


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise RepFileError(f"missing {where}")
    val = doc[key]
    if not isinstance(val, kind):
        raise RepFileError(f"{where} has the wrong type")
    return val


def loads(text: str, path: Path | None = None) -> RepFile:
    """Parse a representative file.  Structural problems raise
    :class:`RepFileError` (with a line number where one can be found);
    semantic problems are left to :func:`check`."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise RepFileError(f"TOML syntax: {exc}", int(m.group(1)) if m else None) from None

    gdoc = _require(doc, "graph", dict, "[graph] section")
    vertices = _require(gdoc, "vertices", list, "graph.vertices")
    edges_doc = _require(gdoc, "edges", list, "graph.edges")
    edges = []
    for i, e in enumerate(edges_doc):
        if not isinstance(e, dict) or not {"name", "from", "to"} <= set(e):
            raise RepFileError(f"graph.edges[{i}] needs name, from and to",
                               _line_of(text, "graph", "edges"))
        if "'" in e["name"] or not e["name"].strip() or any(c.isspace() or c == "." for c in e["name"]):
            raise RepFileError(f"bad edge name {e['name']!r}", _line_of(text, "graph", "edges"))
        edges.append((e["name"], str(e["from"]), str(e["to"])))
    strata_doc = _require(doc, "strata", list, "[[strata]] tables")
    strata = []
    names = {e[0] for e in edges}
    for i, s in enumerate(strata_doc, start=1):
        se = _require(s, "edges", list, f"strata[{i}].edges")
        unknown = [n for n in se if n not in names]
        if unknown:
            raise RepFileError(f"stratum {i}: unknown edge(s) {', '.join(map(str, unknown))}")
        cls = _require(s, "class", str, f"strata[{i}].class")
        if cls not in {k.value for k in StratumKind}:
            raise RepFileError(f"stratum {i}: unknown class {cls!r}")
        strata.append((se, cls, s.get("envelope")))
    try:
        g = MarkedGraph.build(vertices, edges, strata)
    except ValueError as exc:
        raise RepFileError(str(exc)) from None

    mdoc = _require(doc, "map", dict, "[map] section")
    images: dict[int, Word] = {}
    for name, word in mdoc.items():
        line = _line_of(text, "map", name)
        if name not in names:
            raise RepFileError(f"map entry for unknown edge {name!r}", line)
        if not isinstance(word, str):
            raise RepFileError(f"map.{name} must be a word string", line)
        try:
            images[g.edge_id(name)] = parse_word(g, word)
        except WordSyntaxError as exc:
            raise RepFileError(f"map.{name}: {exc}", line) from None
    missing = [n for n in g.edge_names if g.edge_id(n) not in images]
    if missing:
        raise RepFileError(f"[map] has no image for {', '.join(missing)}")

    lam = _require(doc, "lamination", dict, "[lamination] section")
    r = _require(lam, "r", int, "lamination.r")

    rho = None
    if "nielsen" in doc:
        w = _require(doc["nielsen"], "rho_r", str, "nielsen.rho_r")
        try:
            rho = parse_word(g, w)
        except WordSyntaxError as exc:
            raise RepFileError(f"nielsen.rho_r: {exc}", _line_of(text, "nielsen", "rho_r")) from None

    rf = RepFile(g, images, r, rho, path=path)
    if "dictionary" in doc:
        d = doc["dictionary"]
        rf.partner = d.get("partner")
        rf.to_partner = dict(d.get("to_partner", {}))
        rf.from_partner = dict(d.get("from_partner", {}))
    return rf


def load(path: str | Path) -> RepFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RepFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, path)


def load_example(name: str) -> RepFile:
    """A bundled example by stem, e.g. ``load_example("ex1")``."""
    return load(DATA_DIR / f"{name}.toml")


def check(rf: RepFile) -> list[str]:
    """Graph, representative and lamination-index violations."""
    out = validate_graph(rf.graph)
    if out:
        return out
    g = rf.graph
    if not 1 <= rf.r <= g.n_strata:
        return [f"lamination.r = {rf.r} is not a stratum index"]
    return validate_rep(rf.rep)


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _key(s: str) -> str:
    return s if re.fullmatch(r"[A-Za-z0-9_-]+", s) else _q(s)


def _word(g: MarkedGraph, w: Word) -> str:
    return format_word(g, w) if w else ""


def dumps(rf: RepFile) -> str:
    g = rf.graph
    lines = ["[graph]", "vertices = [" + ", ".join(_q(v) for v in g.vertices) + "]", "edges = ["]
    for k in range(1, g.n_edges + 1):
        lines.append(f"    {{ name = {_q(g.edge_names[k - 1])}, from = {_q(g.initial[k])}, "
                     f"to = {_q(g.terminal[k])} }},")
    lines.append("]")
    for s in g.strata:
        lines += ["", "[[strata]]",
                  "edges = [" + ", ".join(_q(g.edge_names[abs(e) - 1]) for e in s.edges) + "]",
                  f"class = {_q(s.kind.value)}"]
        if s.envelope is not None:
            lines.append(f"envelope = {s.envelope}")
    lines += ["", "[map]"]
    for k in range(1, g.n_edges + 1):
        lines.append(f"{_key(g.edge_names[k - 1])} = {_q(_word(g, rf.images[k]))}")
    lines += ["", "[lamination]", f"r = {rf.r}"]
    if rf.rho is not None:
        lines += ["", "[nielsen]", f"rho_r = {_q(_word(g, rf.rho))}"]
    if rf.partner is not None or rf.to_partner or rf.from_partner:
        lines += ["", "[dictionary]"]
        if rf.partner is not None:
            lines.append(f"partner = {_q(rf.partner)}")
        for key, d in (("to_partner", rf.to_partner), ("from_partner", rf.from_partner)):
            body = ", ".join(f"{_key(k)} = {_q(v)}" for k, v in d.items())
            lines.append(f"{key} = {{ {body} }}")
    return "\n".join(lines) + "\n"


def read_corpus(path: str | Path) -> list[str]:
    """Newline-separated words; blank lines and ``#`` comments are skipped."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            out.append(s)
    return out
