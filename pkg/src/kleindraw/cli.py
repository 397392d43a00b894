"""Command-line interface: ``kleindraw <command> ...``.

Exit status 0 on success, 1 on a domain error (one ``error <reason>: ...``
line on standard error), 2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import omega as omega_db
from .drawing import crossings, extract_rotation_system
from .enumeration import enumerate_embeddings
from .errors import KleinDrawError, ParseError
from .formats import EmbeddingRecord, parse_kdr, parse_krs_document, read_text, write_db, write_kdr, write_krs
from .graph import klein_grid, make_named
from .pipeline import TUTTE_EPS, TUTTE_MAX_ITER, draw_report
from .rotation import equivalent, euler_characteristic, format_system
from .svg import render_svg

log = logging.getLogger("kleindraw")


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_krs(path: str):
    return parse_krs_document(read_text(path))


def cmd_format(args) -> int:
    doc = _load_krs(args.input)
    rs, _ = format_system(doc.system)
    _write(args.out, write_krs(rs, doc.name))
    return 0


def cmd_euler(args) -> int:
    doc = _load_krs(args.input)
    print(f"chi {euler_characteristic(doc.system)}")
    return 0


def cmd_enumerate(args) -> int:
    graphs = args.graph or ["k5", "k33"]
    source = None
    records: list[EmbeddingRecord] = []
    for item in graphs:
        if item.lower() in ("k5", "k33"):
            kind = item.upper()
            g = make_named(kind)
        else:
            doc = _load_krs(item)
            g = doc.graph
            kind = doc.name or Path(item).stem
        res = enumerate_embeddings(g, masks=args.masks, workers=args.workers)
        print(f"{kind} embeddings {len(res.klein)} torus {len(res.false_positives)} scanned {res.scanned}")
        drawings = {}
        if kind in omega_db.KINDS:
            if source is None:
                source = omega_db.authored_drawings(omega_db.load_omega(args.omega))
            # raises when a drawing is missing or invalid
            built = omega_db.build_omega({s: source[s] for s in res.klein if s in source}, {kind: res})
            drawings = {r.system: r.drawing for r in built}
        for s in res.klein:
            records.append(EmbeddingRecord(len(records), kind, s, drawings.get(s)))
    _write(args.out, write_db(records, omega_db.HEADER))
    return 0


def cmd_draw(args) -> int:
    doc = _load_krs(args.input)
    om = omega_db.load_omega(args.omega)
    rep = draw_report(doc.graph, doc.system, om, eps=args.eps, max_iter=args.max_iter)
    _write(args.out, write_kdr(rep.drawing))
    print(f"base {rep.record.id} {rep.record.kind} sweeps {rep.sweeps} attempts {rep.attempts}")
    return 0


def cmd_check(args) -> int:
    d = parse_kdr(read_text(args.input))
    found = crossings(d)
    print(f"crossings {len(found)}")
    ok = not found
    if args.against:
        doc = _load_krs(args.against)
        same = doc.graph.n == d.n and list(doc.graph.edges) == d.edges
        if same:
            same = equivalent(extract_rotation_system(d), doc.system) is not None
        print("rotation-system match" if same else "rotation-system mismatch")
        if not same:
            print("error rotation-system-mismatch: drawing does not realize the rotation system", file=sys.stderr)
            return 1
    if not ok:
        print(f"error crossings: {len(found)} crossing edge pairs", file=sys.stderr)
        return 1
    return 0


def cmd_render(args) -> int:
    if args.copies < 1:
        raise UsageError("--copies must be at least 1")
    d = parse_kdr(read_text(args.input))
    _write(args.svg, render_svg(d, args.copies))
    return 0


def cmd_grid(args) -> int:
    _, rs = klein_grid(args.m, args.n)
    _write(args.out, write_krs(rs, f"grid{args.m}x{args.n}"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kleindraw", description="Straight-line drawings on the flat Klein bottle.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("format", help="normal form of a rotation system")
    s.add_argument("input")
    s.add_argument("--out")
    s.set_defaults(func=cmd_format)

    s = sub.add_parser("euler", help="Euler characteristic of a rotation system")
    s.add_argument("input")
    s.set_defaults(func=cmd_euler)

    s = sub.add_parser("enumerate", help="enumerate Klein-bottle embeddings and write a database")
    s.add_argument("--graph", action="append", help="k5, k33 or a .krs file (repeatable; default k5 and k33)")
    s.add_argument("--out", required=True)
    s.add_argument("--omega", help="database supplying the K5/K3,3 drawings")
    s.add_argument("--masks", choices=("all", "half", "cotree"), default="all")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("draw", help="draw a rotation system")
    s.add_argument("input")
    s.add_argument("--omega")
    s.add_argument("--out", required=True)
    s.add_argument("--eps", type=float, default=TUTTE_EPS)
    s.add_argument("--max-iter", type=int, default=TUTTE_MAX_ITER)
    s.set_defaults(func=cmd_draw)

    s = sub.add_parser("check", help="validate a drawing")
    s.add_argument("input")
    s.add_argument("--against")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("render", help="render a drawing as SVG")
    s.add_argument("input")
    s.add_argument("--svg", required=True)
    s.add_argument("--copies", type=int, default=1)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("grid", help="rotation system of a Klein grid")
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_grid)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error {exc.reason}: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error usage: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error io: {exc}", file=sys.stderr)
        return 2
    except KleinDrawError as exc:
        print(f"error {exc.reason}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
