"""Backend switch for the compiled kernels.

Set ``HERMITEX_BACKEND=numpy`` to force the pure-numpy path. The default is
``numba`` when numba imports cleanly.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional at runtime
    numba = None

HAS_NUMBA = numba is not None
BACKEND = os.environ.get("HERMITEX_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ValueError(f"HERMITEX_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")
USE_NUMBA = HAS_NUMBA and BACKEND == "numba"


def njit(func=None, **options):
    """``numba.njit`` when numba is importable, identity otherwise."""
    options.setdefault("cache", True)

    def wrap(f):
        if not HAS_NUMBA:
            return f
        return numba.njit(**options)(f)

    if func is None:
        return wrap
    return wrap(func)


def pick(numba_impl, numpy_impl):
    return numba_impl if USE_NUMBA else numpy_impl
