"""Kernel backend selection.

The compiled module is used when it imports; set ``GENERICLAB_PURE=1`` to
force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("GENERICLAB_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

cycle_labels = _impl.cycle_labels
max_sym_diff = _impl.max_sym_diff
max_tower = _impl.max_tower
