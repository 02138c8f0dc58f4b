"""Optional numba acceleration.

Set ``MPFC_SAV_NUMBA=0`` to force the pure-numpy kernels even when numba is
installed. The flag is read once, at import time.
"""
import logging
import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
JIT_ENABLED = HAVE_NUMBA and os.environ.get("MPFC_SAV_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)

if HAVE_NUMBA:
    logging.getLogger("numba").setLevel(logging.WARNING)


def njit(func):
    """Compile ``func`` with numba in nopython mode, or return it unchanged."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=False, fastmath=False)(func)
