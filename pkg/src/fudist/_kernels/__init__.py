"""Hot kernels for the commutant search objective.

The compiled extension (Cython) is used when present; otherwise the
pure-numpy fallback takes over.  Set FUDIST_PURE_PYTHON=1 to force the
fallback regardless.  Both implementations share one parameter layout and
agree to ~1e-12; see tests/test_kernels.py.
"""
from __future__ import annotations

import os

if os.environ.get("FUDIST_PURE_PYTHON"):
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

fu_objective = _impl.fu_objective
block_unitary = _impl.block_unitary
BACKEND = _impl.BACKEND


def backend() -> str:
    """Name of the active implementation: 'cython' or 'python'."""
    return BACKEND
