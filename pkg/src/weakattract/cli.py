"""Command line entry point: ``weakattract {validate,nonattracting,attract,audit}``.

Exit codes: 0 ok, 1 audit violations, 2 parse or validation errors,
3 budget exceeded or inconclusive.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .attraction import (ComplementarityError, DictionaryError, DualitySetup, InconclusiveError,
                         all_circuits, attracted_circuit, attracted_path, cert_summary,
                         concat_closure_audit, duality_audit, member_pairs, theorem_f_audit,
                         tile_in_other_graph, uniform_m)
from .nielsen import NielsenUniquenessError
from .nonattracting import (ImmersionError, NonattractingSystem, default_k_max, member,
                            nonattracting_system, sigma_window_table, window_filter)
from .paths import NonComposableError, TrivialClassError, WordSyntaxError, cyclic_reduce, format_word, parse_word
from .repfile import RepFile, RepFileError, check, load, read_corpus
from .toprep import DEFAULT_BUDGET, BudgetExceeded

EXIT_OK, EXIT_VIOLATIONS, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3

AUDIT_MAXLEN = {"theorem-f": 6, "duality": 4, "uniform-m": 6, "concat": 200, "windows": 6}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# -- output ------------------------------------------------------------------

class Out:
    def __init__(self, fmt: str, stream):
        self.fmt, self.stream = fmt, stream

    def text(self, line: str = ""):
        if self.fmt == "text":
            print(line, file=self.stream)

    def record(self, rec: dict):
        if self.fmt == "jsonl":
            print(json.dumps(rec, sort_keys=True, ensure_ascii=False), file=self.stream)


# -- loading -----------------------------------------------------------------

def _load_valid(path) -> RepFile:
    try:
        rf = load(path)
    except RepFileError as exc:
        raise _Fail(EXIT_INVALID, f"{path}: {exc}") from None
    bad = check(rf)
    if bad:
        raise _Fail(EXIT_INVALID, f"{path}: invalid representative\n" + "\n".join(f"  - {v}" for v in bad))
    return rf


def _system(rf: RepFile, args, max_len: int) -> NonattractingSystem:
    try:
        return nonattracting_system(rf.rep, rf.rho, max_len=max_len, k_max=args.kmax,
                                    budget=args.budget)
    except (ValueError, NielsenUniquenessError, ImmersionError) as exc:
        raise _Fail(EXIT_INVALID, f"{rf.path}: {exc}") from None


def _parse(rf: RepFile, text: str):
    try:
        return parse_word(rf.graph, text)
    except WordSyntaxError as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None


def _circuit(rf: RepFile, text: str):
    try:
        return cyclic_reduce(rf.graph, _parse(rf, text))
    except (NonComposableError, TrivialClassError) as exc:
        raise _Fail(EXIT_INVALID, f"{text!r}: {exc}") from None


def _corpus(rf: RepFile, args, default_len: int):
    if getattr(args, "corpus", None):
        return [_circuit(rf, w) for w in read_corpus(args.corpus)]
    return all_circuits(rf.graph, args.maxlen if args.maxlen is not None else default_len)


# -- commands ----------------------------------------------------------------

def cmd_validate(args, out: Out) -> int:
    try:
        rf = load(args.file)
    except RepFileError as exc:
        out.text(f"parse error: {exc}")
        out.record({"file": str(args.file), "ok": False, "error": str(exc)})
        return EXIT_INVALID
    bad = check(rf)
    if rf.rho is not None and not bad:
        try:
            from .nielsen import declared_nielsen
            declared_nielsen(rf.rep, rf.rho)
        except ValueError as exc:
            bad.append(f"nielsen.rho_r: {exc}")
    for v in bad:
        out.text(f"violation: {v}")
    out.text("ok" if not bad else f"{len(bad)} violation(s)")
    out.record({"file": str(args.file), "ok": not bad, "violations": bad})
    return EXIT_OK if not bad else EXIT_INVALID


def nonattracting_report(ns: NonattractingSystem) -> dict:
    g = ns.rep.graph
    return {
        "Z": [g.edge_names[e - 1] for e in sorted(ns.Z.edges)],
        "rho": {"kind": ns.rho.kind.value, "word": format_word(g, ns.rho_hat),
                "vertex": ns.rho.vertex, "declared": ns.rho.declared},
        "K": {"vertices": list(ns.K.vertices), "edges": list(ns.K.edge_names)},
        "components": [{"basepoint": c.component.basepoint, "rank": c.component.betti,
                        "basis": [format_word(g, w) for w in c.basis]} for c in ns.components],
        "geometric": ns.geometric,
        "free_factor_system": ns.free_factor_system,
        "caveats": list(ns.caveats),
    }


def cmd_nonattracting(args, out: Out) -> int:
    rf = _load_valid(args.file)
    ns = _system(rf, args, args.maxlen if args.maxlen is not None else 12)
    rep = nonattracting_report(ns)
    out.record(rep)
    out.text("Z: " + (" ".join(rep["Z"]) if rep["Z"] else "(empty)"))
    rho = rep["rho"]
    out.text(f"rho: {rho['kind']} {rho['word']} at {rho['vertex']}"
             + (" (declared)" if rho["declared"] else ""))
    out.text(f"K: {len(rep['K']['vertices'])} vertices, {len(rep['K']['edges'])} edges")
    if not rep["components"]:
        out.text("A_na empty")
    for i, c in enumerate(rep["components"], start=1):
        out.text(f"A_na[{i}]: rank {c['rank']} at {c['basepoint']}: " + ", ".join(c["basis"]))
    out.text(f"geometric: {'yes' if rep['geometric'] else 'no'}")
    out.text(f"free factor system: {'yes' if rep['free_factor_system'] else 'no'}")
    for c in rep["caveats"]:
        out.text(f"caveat: {c}")
    return EXIT_OK


def _verdict_record(ns, word: str, v) -> dict:
    return {"word": word, "verdict": v.verdict.value, "method": v.method.value, "k": v.k,
            "cert": cert_summary(ns, v.cert)}


def cmd_attract(args, out: Out) -> int:
    rf = _load_valid(args.file)
    ns = _system(rf, args, args.inp_len)
    words = read_corpus(args.corpus) if args.corpus else [args.word]
    k_max = args.kmax if args.kmax is not None else default_k_max(rf.rep)
    for w in words:
        if args.path:
            p = _parse(rf, w)
            try:
                from .paths import check_composable
                check_composable(rf.graph, p)
            except NonComposableError as exc:
                raise _Fail(EXIT_INVALID, f"{w!r}: {exc}") from None
            v = attracted_path(rf.rep, ns, p, args.tile_m, k_max, args.budget)
            shown = format_word(rf.graph, p)
        else:
            c = _circuit(rf, w)
            v = attracted_circuit(rf.rep, ns, c, args.tile_m, k_max, args.budget)
            shown = format_word(rf.graph, c)
        rec = _verdict_record(ns, shown, v)
        out.record(rec)
        tail = f" k={v.k} m={v.m}" if v.attracted else ""
        out.text(f"{shown}\t{v.verdict.value}\t{v.method.value}{tail}\t{rec['cert']}")
    return EXIT_OK


def _duality(rf: RepFile, args) -> DualitySetup:
    p2 = Path(args.file2) if args.file2 else rf.partner_path()
    if p2 is None:
        raise _Fail(EXIT_INVALID, "duality needs a second file or a [dictionary] partner")
    rf2 = _load_valid(p2)
    if not rf.to_partner or not rf.from_partner:
        raise _Fail(EXIT_INVALID, f"{rf.path}: [dictionary] needs to_partner and from_partner")

    def table(src: RepFile, dst: RepFile, d: dict[str, str]):
        try:
            return {src.graph.edge_id(k): parse_word(dst.graph, v) for k, v in d.items()}
        except (KeyError, WordSyntaxError) as exc:
            raise _Fail(EXIT_INVALID, f"[dictionary]: {exc}") from None

    ds = DualitySetup(rf.rep, rf2.rep, table(rf, rf2, rf.to_partner), table(rf2, rf, rf.from_partner))
    ds.ns_phi = _system(rf, args, args.inp_len)
    ds.ns_psi = _system(rf2, args, args.inp_len)
    return ds


def cmd_audit(args, out: Out) -> int:
    rf = _load_valid(args.file)
    mode = args.mode
    t = rf.rep
    k_max = args.kmax if args.kmax is not None else default_k_max(t)
    if mode == "duality":
        ds = _duality(rf, args)
        corpus = _corpus(rf, args, AUDIT_MAXLEN[mode])
        try:
            rep = duality_audit(ds, corpus, args.tile_m, args.kmax, args.budget)
        except DictionaryError as exc:
            out.text(f"violation: {exc}")
            out.record({"summary": {"mode": mode, "checked": 0, "violations": 1, "error": str(exc)}})
            return EXIT_VIOLATIONS
        return _emit_audit(out, rep)
    ns = _system(rf, args, args.inp_len)
    if mode == "theorem-f":
        rep = theorem_f_audit(t, ns, _corpus(rf, args, AUDIT_MAXLEN[mode]), args.tile_m, k_max,
                              args.budget)
        return _emit_audit(out, rep)
    if mode == "concat":
        n = args.samples
        rep = concat_closure_audit(t, ns, member_pairs(ns, n, args.seed), args.tile_m, k_max,
                                   args.budget)
        return _emit_audit(out, rep)
    if mode == "windows":
        return _windows_audit(rf, ns, _corpus(rf, args, AUDIT_MAXLEN[mode]), out)
    # uniform-m
    tile_minus = None
    if args.file2 or rf.partner:
        ds = _duality(rf, args)
        tile_minus = tile_in_other_graph(ds, args.tile_m_minus or args.tile_m, args.budget)
    res = uniform_m(t, ns, _corpus(rf, args, AUDIT_MAXLEN[mode]), args.tile_m, tile_minus,
                    args.kmax if args.kmax is not None else 10, args.budget)
    for row in res.table:
        out.record({"word": row["word"], "verdict": row["reason"], "method": "uniform-m",
                    "k": row["ks"][0] if row["ks"] else None,
                    "cert": ",".join(map(str, row["ks"])) if row["ks"] is not None else ""})
        out.text(f"{row['word']}\t{row['reason']}\t"
                 + (" ".join(map(str, row["ks"])) if row["ks"] is not None else "-"))
    out.record({"summary": {"mode": mode, "m": res.m, "worst": res.worst,
                            "checked": len(res.table)}})
    out.text(f"uniform m = {res.m}" if res.found else f"no uniform m; worst: {res.worst}")
    return EXIT_OK if res.found else EXIT_VIOLATIONS


def _windows_audit(rf, ns, corpus, out: Out) -> int:
    L, sigma = sigma_window_table(ns)
    violations, rejected = [], 0
    for c in corpus:
        lifted, passed = bool(member(ns, c)), bool(window_filter(ns, c))
        if lifted and not passed:
            violations.append(f"{format_word(rf.graph, c)}: member but a window fails")
        rejected += not passed
    for v in violations:
        out.text(f"violation: {v}")
    out.text(f"L = {L}, |Sigma| = {len(sigma)}, checked {len(corpus)}, "
             f"filtered out {rejected}, violations {len(violations)}")
    out.record({"summary": {"mode": "windows", "L": L, "sigma": len(sigma), "checked": len(corpus),
                            "filtered": rejected, "violations": len(violations)}})
    return EXIT_OK if not violations else EXIT_VIOLATIONS


def _emit_audit(out: Out, rep) -> int:
    for rec in rep.records:
        out.record(rec)
    for v in rep.violations:
        out.text(f"violation: {v}")
    for d in rep.diagnostics:
        out.text(f"note: {d}")
    out.text(f"{rep.mode}: checked {rep.checked}, violations {len(rep.violations)}")
    out.record({"summary": {"mode": rep.mode, "checked": rep.checked,
                            "violations": len(rep.violations), "diagnostics": len(rep.diagnostics)}})
    return EXIT_OK if rep.ok else EXIT_VIOLATIONS


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kmax", type=int, default=None,
                        help="iteration bound (default 8 + number of strata)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="largest untightened word length allowed while iterating")
    common.add_argument("--maxlen", type=int, default=None,
                        help="corpus enumeration bound (Nielsen search bound for nonattracting)")
    common.add_argument("--inp-len", type=int, default=12,
                        help="Nielsen path search bound when no rho_r is declared")
    common.add_argument("--tile-m", type=int, default=3, help="tile order")
    common.add_argument("--format", choices=("text", "jsonl"), default="text")

    p = argparse.ArgumentParser(prog="weakattract", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", parents=[common], help="check a representative file")
    v.add_argument("file")
    n = sub.add_parser("nonattracting", parents=[common], help="report Z, K and the subgroup system")
    n.add_argument("file")
    a = sub.add_parser("attract", parents=[common], help="decide weak attraction")
    a.add_argument("file")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("word", nargs="?")
    src.add_argument("--corpus", help="file of newline-separated words")
    a.add_argument("--path", action="store_true", help="treat words as finite paths, not circuits")
    u = sub.add_parser("audit", parents=[common], help="run a consistency audit")
    u.add_argument("file")
    u.add_argument("file2", nargs="?", help="representative of the inverse (duality, uniform-m)")
    u.add_argument("--mode", required=True,
                   choices=("theorem-f", "duality", "uniform-m", "concat", "windows"))
    u.add_argument("--corpus", help="file of newline-separated circuits")
    u.add_argument("--samples", type=int, default=200, help="concat: number of member pairs")
    u.add_argument("--seed", type=int, default=0, help="concat: sampling seed")
    u.add_argument("--tile-m-minus", type=int, default=None, help="uniform-m: dual tile order")
    return p


COMMANDS = {"validate": cmd_validate, "nonattracting": cmd_nonattracting,
            "attract": cmd_attract, "audit": cmd_audit}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    out = Out(args.format, stdout)
    try:
        return COMMANDS[args.command](args, out)
    except _Fail as exc:
        print(f"error: {exc}", file=stderr)
        return exc.code
    except (BudgetExceeded, InconclusiveError, ComplementarityError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
