"""Backend selection for the hot loops.

The compiled extension is preferred. Set ``ZIPFCODE_PURE_PYTHON=1`` to force
the pure-Python fallback (used by the benchmark and the parity tests).
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("ZIPFCODE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels


def kendall_counts(x, y):
    return _impl.kendall_counts(x, y)


def nonsingular_lengths(ranks, n_symbols):
    return _impl.nonsingular_lengths(ranks, n_symbols)
