"""Select the row-reduction kernels: compiled if available, else pure Python.

Set ``STATIONARITY_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("STATIONARITY_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import dot, pivot, rref  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernels import dot, pivot, rref  # noqa: F401
