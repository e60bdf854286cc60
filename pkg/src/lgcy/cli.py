"""Command-line front end.

Exit status: 0 success, 1 a correspondence check failed, 2 the model is
invalid, 3 the document could not be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import statespace as ss
from .exact import PrimeCollisionError
from .model import ParseError, load_model, validate
from .symmetry import GroupFiniteError

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_PARSE = 0, 1, 2, 3
VERBS = ("validate", "sectors", "cy", "lg", "bundles", "pair", "verify", "report")


def _fmt(x: Fraction) -> str:
    return str(x)


def _table_text(title: str, table: ss.BigradedTable) -> list[str]:
    lines = [f"{title} (total {table.total})"]
    if not table.entries:
        lines.append("  (empty)")
    for (p, q), h in table.as_dict().items():
        lines.append(f"  h^({_fmt(p)},{_fmt(q)}) = {h}")
    return lines


def _validation_text(rep) -> list[str]:
    lines = [f"valid: {'yes' if rep.ok else 'no'}"]
    for c in rep.checks:
        lines.append(f"  [{c.status}] {c.name}: {c.detail}")
    return lines


def _summary_dict(s: ss.HodgeSummary) -> dict:
    return s.to_dict()


def _cmd_validate(m, args):
    rep = validate(m)
    status = EXIT_OK if rep.ok else EXIT_INVALID
    return status, rep.to_dict(), _validation_text(rep)


def _cmd_sectors(a: ss.Analysis, args):
    side = args.side or "all"
    secs = a.sectors(side)
    doc = {"side": side, "components": len(a.components),
           "sectors": [s.to_dict() for s in secs]}
    lines = [f"{len(secs)} sector(s) on side {side}, {len(a.components)} component(s)"]
    for s in secs:
        th = ",".join(map(_fmt, s.theta))
        pi = ",".join(map(_fmt, s.pi))
        lines.append(f"  {s.id:>10}  phases ({th} | {pi})  n_g={s.n_gamma} r_g={s.r_gamma}"
                     f"  a_tot={_fmt(s.a_tot)} a_X={_fmt(s.a_x)}")
    return EXIT_OK, doc, lines


def _cmd_table(a, args, which):
    table = ss.assemble_cy(a) if which == "cy" else ss.assemble_lg(a)
    title = "CY orbifold cohomology" if which == "cy" else "LG state space"
    doc = {"side": which, "table": table.to_list(), "total": table.total}
    return EXIT_OK, doc, _table_text(title, table)


def _cmd_bundles(a, args):
    sides = [args.side] if args.side in ("cy", "lg") else ["cy", "lg"]
    doc, lines = {}, []
    tables = {s: ss.assemble_bundle_cr(a, s) for s in sides}
    for s, t in tables.items():
        doc[s] = t.to_list()
        lines += _table_text(f"{s.upper()} bundle", t)
    status = EXIT_OK
    if len(tables) == 2:
        equal = tables["cy"] == tables["lg"]
        doc["equal"] = equal
        lines.append(f"equal: {'yes' if equal else 'no'}")
        status = EXIT_OK if equal else EXIT_MISMATCH
    return status, doc, lines


def _cmd_pair(a, args):
    from . import dots as dd
    doc = {"diagrams": [], "certificate": []}
    lines = []
    for diag in a.diagrams:
        cert = dd.pair_dots(diag)
        doc["diagrams"].append({
            "component": diag.component.index,
            "a": [_fmt(x) for x in diag.component.a],
            "dots": [{"color": d.color, "t": _fmt(d.t), "source": d.source + 1, "f": f}
                     for d, f in diag.labelled()]})
        doc["certificate"] += cert.to_list()
        lines.append(diag.dump())
        for p in cert.pairs:
            lines.append(f"    x{p.black.source + 1}@{_fmt(p.black.t)} <-> "
                         f"d{p.white.source + 1}@{_fmt(p.white.t)}  f={p.f} degree={_fmt(p.degree)}")
    ok = ss.ray_consistency(a)
    doc["ray_consistent"] = ok
    lines.append(f"ray consistency: {'yes' if ok else 'no'}")
    return (EXIT_OK if ok else EXIT_MISMATCH), doc, lines


def _cmd_verify(a, args):
    rep = validate(a.model)
    if not rep.ok:
        doc = {"refused": True, "validation": rep.to_dict()}
        return EXIT_INVALID, doc, ["refusing to verify an invalid model"] + _validation_text(rep)
    vr = ss.verify_correspondence(a)
    doc = {"validation": rep.to_dict(), **vr.to_dict()}
    lines = [f"correspondence: {'PASS' if vr.ok else 'FAIL'}"]
    for k, v in vr.verdicts.items():
        lines.append(f"  {k}: {'pass' if v else 'FAIL'}")
    lines += _table_text("CY orbifold cohomology", vr.cy)
    lines += _table_text("LG state space", vr.lg)
    lines.append(f"certificate: {len(vr.certificate)} pairs; rank checks: {vr.rank_checks}")
    for c in vr.counterexamples:
        lines.append(f"  counterexample: {json.dumps(c, sort_keys=True)}")
    return (EXIT_OK if vr.ok else EXIT_MISMATCH), doc, lines


def _cmd_report(a, args):
    m = a.model
    dim = m.n - m.r - 1
    cy, lg = ss.assemble_cy(a), ss.assemble_lg(a)
    doc, lines = {}, []
    for name, table in (("cy", cy), ("lg", lg)):
        s = ss.hodge_report(table, dim)
        nb = ss.narrow_broad_counts(table)
        doc[name] = {**_summary_dict(s), **nb}
        lines.append(f"{name.upper()}: total {s.total}, euler characteristic {s.euler}, "
                     f"symmetric {'yes' if s.symmetric else 'no'}, "
                     f"dual {'yes' if s.dual else 'no'}, narrow {nb['narrow']}, broad {nb['broad']}")
        if s.fractional:
            lines.append(f"  fractional bidegrees: {len(s.fractional)}")
    equal = cy == lg
    doc["equal"] = equal
    lines.append(f"tables equal: {'yes' if equal else 'no'}")
    return (EXIT_OK if equal else EXIT_MISMATCH), doc, lines


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lgcy", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("input", help="model document (JSON)")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--verify-prime", type=int)
    ap.add_argument("--qs-bound", type=int)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--side", choices=("cy", "lg", "all"))
    ap.add_argument("--exact", action="store_true", help="recompute every rank over Q")
    return ap


def _emit(fmt: str, verb: str, status: int, doc: dict, lines: list[str], out):
    if fmt == "json":
        out.write(json.dumps({"command": verb, "status": status, **doc}, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        m = load_model(args.input)
    except OSError as exc:
        return _fail(args, EXIT_PARSE, f"cannot read {args.input}: {exc.strerror}", out)
    except ParseError as exc:
        return _fail(args, EXIT_PARSE, f"parse error: {exc}", out)
    m = m.with_options(prime=args.prime, verify_prime=args.verify_prime, qs_bound=args.qs_bound)
    if args.verb == "validate":
        status, doc, lines = _cmd_validate(m, args)
        _emit(args.format, args.verb, status, doc, lines, out)
        return status
    if args.verb != "verify":
        rep = validate(m, quasi_smooth=False)
        if not rep.ok:
            doc = {"refused": True, "validation": rep.to_dict()}
            _emit(args.format, args.verb, EXIT_INVALID, doc,
                  ["invalid model"] + _validation_text(rep), out)
            return EXIT_INVALID
    try:
        a = ss.Analysis(m, jobs=args.jobs, exact=args.exact)
        handler = {"sectors": _cmd_sectors, "pair": _cmd_pair, "verify": _cmd_verify,
                   "report": _cmd_report, "bundles": _cmd_bundles,
                   "cy": lambda a, x: _cmd_table(a, x, "cy"),
                   "lg": lambda a, x: _cmd_table(a, x, "lg")}[args.verb]
        status, doc, lines = handler(a, args)
    except GroupFiniteError as exc:
        return _fail(args, EXIT_INVALID, str(exc), out)
    except PrimeCollisionError as exc:
        return _fail(args, EXIT_MISMATCH, f"prime collision persisted after retries: {exc}", out)
    _emit(args.format, args.verb, status, doc, lines, out)
    return status


def _fail(args, status: int, message: str, out) -> int:
    if args.format == "json":
        out.write(json.dumps({"command": args.verb, "status": status, "error": message},
                             indent=2) + "\n")
    else:
        sys.stderr.write(message + "\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
