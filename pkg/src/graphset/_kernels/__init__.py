"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
``GRAPHSET_PURE=1`` forces the pure-python fallback.  Both backends
implement the same three functions with bitwise-identical results, so
the choice only affects speed.
"""

import os

from . import _py

if os.environ.get("GRAPHSET_PURE") == "1":
    _impl = _py
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _py

BACKEND = _impl.BACKEND
network_simplex = _impl.network_simplex
scan_split_classification = _impl.scan_split_classification
scan_split_regression = _impl.scan_split_regression


def backends():
    """All importable backends, for benchmarks and agreement tests."""
    out = {"pure": _py}
    try:
        from . import _native
        out["native"] = _native
    except ImportError:
        pass
    return out
