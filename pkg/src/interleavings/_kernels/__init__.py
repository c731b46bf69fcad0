"""Kernel backend selection.

The compiled extension is used when it imports; set
``INTERLEAVINGS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_backend

BACKEND = "python"
if os.environ.get("INTERLEAVINGS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None
    else:
        BACKEND = "cython"
else:
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend

reduce_boundary = _impl.reduce_boundary
gh_minima = _impl.gh_minima

__all__ = ["BACKEND", "reduce_boundary", "gh_minima", "python_backend", "compiled_backend"]
