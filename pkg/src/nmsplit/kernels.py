"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``NMSPLIT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

if os.environ.get("NMSPLIT_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

durand_kerner = _impl.durand_kerner
newton_real = _impl.newton_real
sq_grid = _impl.sq_grid
vef_grid = _impl.vef_grid

__all__ = ["BACKEND", "durand_kerner", "newton_real", "sq_grid", "vef_grid"]
