"""Kernel selection: the compiled extension when it imports, else the
NumPy reference.  ``BREATHER_KERNELS=python`` forces the reference."""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("BREATHER_KERNELS", "").lower() not in ("python", "py"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

cos_mul_batch = _impl.cos_mul_batch
scan_exp_forward = _impl.scan_exp_forward
scan_exp_backward = _impl.scan_exp_backward
scan_rot_backward = _impl.scan_rot_backward

__all__ = ["BACKEND", "cos_mul_batch", "scan_exp_forward", "scan_exp_backward", "scan_rot_backward"]
