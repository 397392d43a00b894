"""Backend selection for the face-tracing kernels.

The compiled extension is used when it imports; set ``KLEINDRAW_PURE_PYTHON=1``
to force the pure-Python twin.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("KLEINDRAW_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_backend, BACKEND = _load()

count_face_orbits = _backend.count_face_orbits
scan_euler = _backend.scan_euler


def backend_module(name: str) -> ModuleType:
    """Kernel module by name (``"python"`` or ``"cython"``); raises ImportError if unavailable."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
