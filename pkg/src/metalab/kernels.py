"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it imports; otherwise the
numpy fallback in ``_kernels_py``.  Setting ``METALAB_PURE_PYTHON=1``
forces the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("METALAB_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

eval_base = _impl.eval_base
social_force = _impl.social_force
gravity = _impl.gravity
signed_rank_counts = _impl.signed_rank_counts

__all__ = ["BACKEND", "eval_base", "social_force", "gravity", "signed_rank_counts"]
