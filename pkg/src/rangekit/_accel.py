"""Backend switch for the hot loops.

Set RANGEKIT_NO_NUMBA=1 to force the pure-numpy kernels, e.g. to compare
timings or to run on a machine without numba.
"""
import os

DISABLED = os.environ.get("RANGEKIT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"
