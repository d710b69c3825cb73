"""Gibbs kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python kernel when
the extension is missing. RELCHECK_PURE_KERNEL=1 forces the fallback
(used by the parity tests and the backend benchmark).
"""

from __future__ import annotations

import os

from . import _gibbs_py

if os.environ.get("RELCHECK_PURE_KERNEL") == "1":
    _backend = _gibbs_py
    BACKEND = "python"
else:
    try:
        from . import _gibbs as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _backend = _gibbs_py
        BACKEND = "python"

train_sweeps = _backend.train_sweeps
infer_sweeps = _backend.infer_sweeps


def get_backend(name: str):
    """Explicit backend lookup for benchmarks/tests: 'cython' or 'python'."""
    if name == "python":
        return _gibbs_py
    if name == "cython":
        from . import _gibbs

        return _gibbs
    raise ValueError(f"unknown kernel backend {name!r}")
