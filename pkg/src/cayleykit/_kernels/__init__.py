"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback is loaded.  Set ``CAYLEYKIT_KERNELS=python`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("CAYLEYKIT_KERNELS", "").lower() != "python":
    try:
        from ._ckernels import assign_columns, multisets_summing_to
        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._pykernels import assign_columns, multisets_summing_to

__all__ = ["BACKEND", "assign_columns", "multisets_summing_to"]
