"""Retrieval kernel selection.

Imports the compiled Cython kernel when the extension is available, otherwise
the numpy fallback; both expose the same ``mmr_select``. Set LOGEXPLAIN_PURE=1
to force the fallback (used by the benchmark and by tests that pin down the
two implementations against each other).
"""

from __future__ import annotations

import os

from . import _mmr_py

if os.environ.get("LOGEXPLAIN_PURE") == "1":
    mmr_select = _mmr_py.mmr_select
    BACKEND = "numpy"
else:
    try:
        from ._mmr import mmr_select  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        mmr_select = _mmr_py.mmr_select
        BACKEND = "numpy"

__all__ = ["mmr_select", "BACKEND"]
