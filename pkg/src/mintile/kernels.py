"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_pycore`` twin is used.  Setting ``MINTILE_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pycore

_impl = None
if not os.environ.get("MINTILE_PURE_PYTHON"):
    try:
        from . import _core as _impl
    except ImportError:
        _impl = None

BACKEND = "cython" if _impl is not None else "python"
if _impl is None:
    _impl = _pycore

containment_table = _impl.containment_table
subset_dp = _impl.subset_dp
