"""Exception hierarchy.

Every exception carries a short kebab-case ``reason`` used by the CLI as the
machine-readable error code.
"""

from __future__ import annotations


class KleinDrawError(Exception):
    reason = "error"


# -- graph construction ------------------------------------------------------


class GraphError(KleinDrawError, ValueError):
    reason = "invalid-graph"


class DuplicateEdge(GraphError):
    reason = "duplicate-edge"


class SelfLoop(GraphError):
    reason = "self-loop"


class VertexOutOfRange(GraphError, IndexError):
    reason = "vertex-out-of-range"


class UnknownName(GraphError):
    reason = "unknown-name"


class BadDimensions(GraphError):
    reason = "bad-dimensions"


class DisconnectedGraph(GraphError):
    reason = "disconnected-graph"


class TooLarge(KleinDrawError, ValueError):
    reason = "too-large"


# -- rotation systems --------------------------------------------------------


class DegreeTooLow(KleinDrawError, ValueError):
    reason = "degree-too-low"


class NotASubdivision(KleinDrawError, ValueError):
    reason = "not-a-subdivision"


class NotAChainVertex(KleinDrawError, ValueError):
    reason = "not-a-chain-vertex"


class GraphIsPlanar(KleinDrawError, ValueError):
    reason = "graph-is-planar"


# -- drawing -----------------------------------------------------------------


class NotThreeConnected(KleinDrawError, ValueError):
    reason = "not-three-connected"


class NotKleinSystem(KleinDrawError, ValueError):
    reason = "not-klein-system"


class NoBaseMatch(KleinDrawError):
    reason = "no-base-match"


class InvalidRotationSystem(KleinDrawError, ValueError):
    reason = "invalid-rotation-system"


class NoConvergence(KleinDrawError):
    """Barycentric iteration hit its sweep cap; ``drawing`` holds the last state."""

    reason = "no-convergence"

    def __init__(self, message: str, drawing=None, sweeps: int = 0, displacement: float = float("nan")):
        super().__init__(message)
        self.drawing = drawing
        self.sweeps = sweeps
        self.displacement = displacement


class DrawingFailed(KleinDrawError):
    """The finished drawing did not pass crossing/rotation validation."""

    reason = "drawing-failed"


class NotIncident(KleinDrawError, ValueError):
    reason = "not-incident"


class DegenerateAngles(KleinDrawError, ValueError):
    reason = "degenerate-angles"


# -- base embedding database -------------------------------------------------


class MissingDrawing(KleinDrawError):
    reason = "missing-drawing"


class DrawingInvalid(KleinDrawError):
    reason = "drawing-invalid"


# -- file formats ------------------------------------------------------------


class ParseError(KleinDrawError, ValueError):
    reason = "parse-error"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)


class SignMismatch(ParseError):
    reason = "sign-mismatch"


class AdjacencyMismatch(ParseError):
    reason = "adjacency-mismatch"
