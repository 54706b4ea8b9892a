"""Kernel backend selection.

The solver inner loops in :mod:`impopt._kernels` are written in plain
numpy-compatible Python so that numba can compile them unchanged.  Which
variant runs is controlled by the ``IMPOPT_BACKEND`` environment variable:

* ``auto`` (default) -- use numba when it is importable, else pure Python;
* ``numba``          -- require numba, raise if missing;
* ``numpy``          -- always run the uncompiled Python/numpy loops.

The choice is made once at import time.  ``python_impl`` recovers the
uncompiled function from a jitted one so both paths can be benchmarked in
a single process.
"""

import logging
import os

log = logging.getLogger(__name__)

_ENV_VAR = "IMPOPT_BACKEND"


def _choose_backend() -> str:
    raw = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if raw in ("", "auto"):
        try:
            import numba  # noqa: F401
            return "numba"
        except ImportError:
            log.warning("numba not importable; falling back to the numpy backend")
            return "numpy"
    if raw == "numba":
        import numba  # noqa: F401  (raise ImportError if truly absent)
        return "numba"
    if raw in ("numpy", "python"):
        return "numpy"
    raise ValueError(f"unrecognized {_ENV_VAR}={raw!r}; expected auto, numba or numpy")


BACKEND = _choose_backend()


def jit_kernel(func):
    """Compile ``func`` with numba when the numba backend is active."""
    if BACKEND == "numba":
        from numba import njit
        return njit(cache=True)(func)
    return func


def python_impl(func):
    """Return the uncompiled implementation behind a (possibly) jitted kernel."""
    return getattr(func, "py_func", func)


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False
