"""Text formats: ``.krs`` rotation systems, ``.kdr`` drawings and the base-embedding database.

``.krs``::

    # comment
    graph K5
    vertices 5
    rs 0: 1 2 3- 4

A trailing ``-`` marks a twisted edge and must appear on both endpoint
lines.  ``.kdr``::

    vertex 0 0.25 0.5
    edge 0 1 0 0

with the shift of each edge given for the direction low label to high label.
The database concatenates records ``embedding <id> <kind>`` ... ``end``, each
holding a ``.krs`` block optionally followed by a ``.kdr`` block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .drawing import Drawing
from .errors import AdjacencyMismatch, ParseError, SignMismatch
from .graph import Graph, build_graph, edge_key
from .rotation import RotationSystem
from .shifts import KleinShift

Line = tuple[int, str]


@dataclass(frozen=True)
class KrsDocument:
    name: str
    system: RotationSystem

    @property
    def graph(self) -> Graph:
        return self.system.graph


@dataclass(frozen=True)
class EmbeddingRecord:
    """One database entry; ``drawing`` is labelled like ``system``."""

    id: int
    kind: str
    system: RotationSystem
    drawing: Drawing | None = None


# -- tokenizing --------------------------------------------------------------


def _lines(text: str) -> Iterator[Line]:
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield i, line


def _tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _int(tok: tuple[int, str], lineno: int, what: str) -> int:
    col, s = tok
    try:
        v = int(s)
    except ValueError:
        raise ParseError(f"expected {what}, got {s!r}", lineno, col) from None
    if v < 0 and what != "shift":
        raise ParseError(f"{what} must be non-negative", lineno, col)
    return v


def _float(tok: tuple[int, str], lineno: int) -> float:
    col, s = tok
    try:
        v = float(s)
    except ValueError:
        raise ParseError(f"expected a coordinate, got {s!r}", lineno, col) from None
    if not (math.isfinite(v) and 0.0 <= v < 1.0):
        raise ParseError(f"coordinate {s} outside [0, 1)", lineno, col)
    return v


def _arity(toks: list[tuple[int, str]], k: int, lineno: int) -> None:
    if len(toks) > k:
        raise ParseError(f"unexpected {toks[k][1]!r}", lineno, toks[k][0])
    if len(toks) < k:
        col = toks[-1][0] + len(toks[-1][1]) if toks else 1
        raise ParseError(f"'{toks[0][1]}' needs {k - 1} fields", lineno, col)


# -- .krs --------------------------------------------------------------------


def _parse_krs_lines(lines: list[Line], end_line: int) -> KrsDocument:
    name = ""
    n: int | None = None
    rows: dict[int, list[tuple[int, bool, int, int]]] = {}
    for lineno, line in lines:
        toks = _tokens(line)
        kw = toks[0][1]
        if kw == "graph":
            _arity(toks, 2, lineno)
            name = toks[1][1]
        elif kw == "vertices":
            if n is not None:
                raise ParseError("repeated 'vertices' line", lineno, toks[0][0])
            _arity(toks, 2, lineno)
            n = _int(toks[1], lineno, "vertex count")
        elif kw == "rs":
            if n is None:
                raise ParseError("'rs' before 'vertices'", lineno, toks[0][0])
            if len(toks) < 2 or not toks[1][1].endswith(":"):
                raise ParseError("expected 'rs <v>:'", lineno, toks[0][0])
            v = _int((toks[1][0], toks[1][1][:-1]), lineno, "vertex")
            if v >= n:
                raise ParseError(f"vertex {v} out of range", lineno, toks[1][0])
            if v in rows:
                raise ParseError(f"second rotation line for vertex {v}", lineno, toks[0][0])
            row = []
            for col, s in toks[2:]:
                twisted = s.endswith("-")
                u = _int((col, s[:-1] if twisted else s), lineno, "neighbor")
                if u >= n:
                    raise ParseError(f"neighbor {u} out of range", lineno, col)
                row.append((u, twisted, lineno, col))
            rows[v] = row
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][0])
    if n is None:
        raise ParseError("missing 'vertices' line", end_line, 1)
    missing = [v for v in range(n) if v not in rows]
    if missing:
        raise ParseError(f"no rotation line for vertex {missing[0]}", end_line, 1)
    marks: dict[tuple[int, int], tuple[bool, int, int]] = {}
    for v in range(n):
        seen = set()
        for u, twisted, lineno, col in rows[v]:
            if u == v or u in seen:
                raise AdjacencyMismatch(f"vertex {v} lists {u} twice or itself", lineno, col)
            seen.add(u)
            marks[(v, u)] = (twisted, lineno, col)
    signs: dict[tuple[int, int], int] = {}
    for (v, u), (twisted, lineno, col) in marks.items():
        back = marks.get((u, v))
        if back is None:
            raise AdjacencyMismatch(f"{v} lists {u} but {u} does not list {v}", lineno, col)
        if back[0] != twisted:
            raise SignMismatch(f"edge {v}-{u} has inconsistent twist marks", lineno, col)
        signs[edge_key(v, u)] = -1 if twisted else 1
    g = build_graph(n, signs)
    pi = [[u for u, _, _, _ in rows[v]] for v in range(n)]
    return KrsDocument(name, RotationSystem(g, pi, signs))


def parse_krs_document(text: str) -> KrsDocument:
    lines = list(_lines(text))
    return _parse_krs_lines(lines, len(text.splitlines()) or 1)


def parse_krs(text: str) -> tuple[Graph, RotationSystem]:
    doc = parse_krs_document(text)
    return doc.graph, doc.system


def _krs_body(rs: RotationSystem, name: str) -> list[str]:
    out = []
    if name:
        out.append(f"graph {name}")
    out.append(f"vertices {rs.n}")
    for v, p in enumerate(rs.pi):
        items = " ".join(f"{u}-" if rs.sign(v, u) < 0 else str(u) for u in p)
        out.append(f"rs {v}: {items}".rstrip())
    return out


def write_krs(rs: RotationSystem, name: str = "") -> str:
    return "\n".join(_krs_body(rs, name)) + "\n"


# -- .kdr --------------------------------------------------------------------


def _parse_kdr_lines(lines: list[Line], end_line: int, n: int | None = None) -> Drawing:
    points: dict[int, tuple[float, float]] = {}
    shifts: dict[tuple[int, int], KleinShift] = {}
    where: dict[int, tuple[int, int]] = {}
    for lineno, line in lines:
        toks = _tokens(line)
        kw = toks[0][1]
        if kw == "vertex":
            _arity(toks, 4, lineno)
            v = _int(toks[1], lineno, "vertex")
            if v in points:
                raise ParseError(f"vertex {v} listed twice", lineno, toks[1][0])
            points[v] = (_float(toks[2], lineno), _float(toks[3], lineno))
            where[v] = (lineno, toks[1][0])
        elif kw == "edge":
            _arity(toks, 5, lineno)
            u = _int(toks[1], lineno, "vertex")
            v = _int(toks[2], lineno, "vertex")
            if u >= v:
                raise ParseError("edge endpoints must be listed low label first", lineno, toks[1][0])
            if (u, v) in shifts:
                raise ParseError(f"edge {u}-{v} listed twice", lineno, toks[1][0])
            shifts[(u, v)] = KleinShift(_int(toks[3], lineno, "shift"), _int(toks[4], lineno, "shift"))
            for x, tok in ((u, toks[1]), (v, toks[2])):
                if n is not None and x >= n:
                    raise ParseError(f"vertex {x} out of range", lineno, tok[0])
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][0])
    count = n if n is not None else len(points)
    for v in range(count):
        if v not in points:
            raise ParseError(f"no position for vertex {v}", end_line, 1)
    extra = sorted(v for v in points if v >= count)
    if extra:
        line, col = where[extra[0]]
        raise ParseError(f"vertex {extra[0]} out of range", line, col)
    for (u, v) in shifts:
        if v >= count:
            raise ParseError(f"edge {u}-{v} references a missing vertex", end_line, 1)
    return Drawing([points[v] for v in range(count)], shifts)


def parse_kdr(text: str) -> Drawing:
    return _parse_kdr_lines(list(_lines(text)), len(text.splitlines()) or 1)


def _kdr_body(d: Drawing) -> list[str]:
    out = [f"vertex {v} {x!r} {y!r}" for v, (x, y) in enumerate(d.gamma)]
    out += [f"edge {a} {b} {s.a} {s.b}" for (a, b), s in sorted(d.delta.items())]
    return out


def write_kdr(d: Drawing) -> str:
    return "\n".join(_kdr_body(d)) + "\n"


# -- database ----------------------------------------------------------------

_KRS_WORDS = {"graph", "vertices", "rs"}
_KDR_WORDS = {"vertex", "edge"}


def _split_records(lines: Iterable[Line], end_line: int) -> Iterator[tuple[Line, list[Line], list[Line], int]]:
    head: Line | None = None
    krs: list[Line] = []
    kdr: list[Line] = []
    for lineno, line in lines:
        toks = _tokens(line)
        kw = toks[0][1]
        if kw == "embedding":
            if head is not None:
                raise ParseError("'embedding' inside an open record", lineno, toks[0][0])
            head, krs, kdr = (lineno, line), [], []
        elif kw == "end":
            if head is None:
                raise ParseError("'end' without 'embedding'", lineno, toks[0][0])
            _arity(toks, 1, lineno)
            yield head, krs, kdr, lineno
            head = None
        elif head is None:
            raise ParseError(f"{kw!r} outside a record", lineno, toks[0][0])
        elif kw in _KRS_WORDS:
            if kdr:
                raise ParseError("rotation data after drawing data", lineno, toks[0][0])
            krs.append((lineno, line))
        elif kw in _KDR_WORDS:
            kdr.append((lineno, line))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][0])
    if head is not None:
        raise ParseError("record not closed with 'end'", end_line, 1)


def parse_db(text: str) -> list[EmbeddingRecord]:
    out = []
    ids = set()
    for (lineno, line), krs, kdr, end in _split_records(_lines(text), len(text.splitlines()) or 1):
        toks = _tokens(line)
        _arity(toks, 3, lineno)
        rid = _int(toks[1], lineno, "record id")
        if rid in ids:
            raise ParseError(f"duplicate record id {rid}", lineno, toks[1][0])
        ids.add(rid)
        doc = _parse_krs_lines(krs, end)
        drawing = None
        if kdr:
            drawing = _parse_kdr_lines(kdr, end, doc.system.n)
            if set(drawing.delta) != doc.graph.edge_set:
                raise AdjacencyMismatch(f"record {rid}: drawing edges differ from the graph", kdr[0][0], 1)
        out.append(EmbeddingRecord(rid, toks[2][1], doc.system, drawing))
    return out


def write_db(records: Iterable[EmbeddingRecord], header: str = "") -> str:
    out = [f"# {h}".rstrip() for h in header.splitlines()]
    for r in records:
        out.append(f"embedding {r.id} {r.kind}")
        out += _krs_body(r.system, "")
        if r.drawing is not None:
            out += _kdr_body(r.drawing)
        out.append("end")
    return "\n".join(out) + "\n"


def read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()
