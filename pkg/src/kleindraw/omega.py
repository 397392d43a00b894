"""The base-embedding database: convex drawings of every Klein-bottle embedding of K5 and K3,3."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .drawing import Drawing, crossings, extract_rotation_system
from .enumeration import EnumerationResult, enumerate_embeddings
from .errors import DegenerateAngles, DrawingInvalid, MissingDrawing
from .formats import EmbeddingRecord, parse_db, read_text, write_db
from .graph import make_named
from .rotation import RotationSystem, equivalent, euler_characteristic, is_balanced

ENV_VAR = "KLEINDRAW_OMEGA"
KINDS = ("K5", "K33")
HEADER = "Klein-bottle base embeddings: canonical rotation system plus a convex drawing"


def default_db_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("kleindraw") / "data" / "omega.kdb"))


def load_omega(path: str | os.PathLike | None = None) -> list[EmbeddingRecord]:
    return parse_db(read_text(path if path is not None else default_db_path()))


def validate_record(system: RotationSystem, drawing: Drawing) -> None:
    """Raise :class:`DrawingInvalid` unless ``drawing`` realizes ``system`` as a Klein-bottle embedding."""
    if drawing.n != system.n or set(drawing.delta) != system.graph.edge_set:
        raise DrawingInvalid("drawing is not on the system's graph")
    if not drawing.in_square():
        raise DrawingInvalid("vertex outside the unit square")
    if crossings(drawing):
        raise DrawingInvalid("drawing has crossings")
    try:
        drawn = extract_rotation_system(drawing)
    except DegenerateAngles as exc:
        raise DrawingInvalid(str(exc)) from exc
    if equivalent(drawn, system) is None:
        raise DrawingInvalid("drawn rotation system differs from the stored one")
    if euler_characteristic(system) != 0 or is_balanced(system):
        raise DrawingInvalid("stored system is not a Klein-bottle embedding")


def build_omega(
    drawings: Mapping[RotationSystem, Drawing],
    results: Mapping[str, EnumerationResult] | None = None,
) -> list[EmbeddingRecord]:
    """Pair every enumerated embedding with its authored drawing, validating each.

    ``results`` maps a kind label to its enumeration; by default K5 and K3,3
    are enumerated afresh.
    """
    if results is None:
        results = {k: enumerate_embeddings(make_named(k)) for k in KINDS}
    records = []
    used = set()
    for kind, res in results.items():
        for system in res.klein:
            drawing = drawings.get(system)
            if drawing is None:
                raise MissingDrawing(f"no drawing for {kind} embedding {system!r}")
            validate_record(system, drawing)
            used.add(system)
            records.append(EmbeddingRecord(len(records), kind, system, drawing))
    stray = [s for s in drawings if s not in used]
    if stray:
        raise DrawingInvalid(f"drawing for a system that is not an enumerated embedding: {stray[0]!r}")
    return records


def authored_drawings(records: Iterable[EmbeddingRecord]) -> dict[RotationSystem, Drawing]:
    return {r.system: r.drawing for r in records if r.drawing is not None}


def regenerate(source: str | os.PathLike | None = None) -> str:
    """Database text rebuilt from fresh enumeration and the drawings stored in ``source``."""
    return write_db(build_omega(authored_drawings(load_omega(source))), HEADER)
