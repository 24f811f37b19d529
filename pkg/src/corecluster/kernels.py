"""Hot-loop kernels, compiled when available.

The Cython extension ``_ckernels`` is used if it was built; otherwise the
pure-Python implementations are used. Set ``CORECLUSTER_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _pykernels

try:
    if os.environ.get("CORECLUSTER_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

core_numbers = _impl.core_numbers
absorb = _impl.absorb
spans = _impl.spans
local_move = _impl.local_move


def available_backends() -> dict:
    """Name -> kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
