"""Kernel backend selection.

The compiled extension is preferred when importable; set XGAB_KERNELS=pure or
XGAB_KERNELS=compiled to force a choice (forcing an unavailable backend is an
error). Both backends are bit-identical, so everything above this module is
backend-agnostic.
"""

import os

from . import _kernels_pure

_choice = os.environ.get("XGAB_KERNELS", "").strip().lower()

if _choice == "pure":
    _impl = _kernels_pure
elif _choice == "compiled":
    from . import _kernels_c as _impl
else:
    if _choice:
        raise ValueError(f"XGAB_KERNELS must be 'pure' or 'compiled', got {_choice!r}")
    try:
        from . import _kernels_c as _impl
    except ImportError:
        _impl = _kernels_pure

rref_mod = _impl.rref_mod
matmul_mod = _impl.matmul_mod
rank_mod = _impl.rank_mod


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return _impl.BACKEND
