"""Kernel selection: compiled extension when importable, else pure Python."""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
greedy_sd_real = _fallback.greedy_sd_real
jacobi_eigh = _fallback.jacobi_eigh

if os.environ.get("ADEC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        greedy_sd_real = _kernels.greedy_sd_real
        jacobi_eigh = _kernels.jacobi_eigh

__all__ = ["BACKEND", "greedy_sd_real", "jacobi_eigh"]
