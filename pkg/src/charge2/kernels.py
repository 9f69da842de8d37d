"""Backend selection for the numeric inner loops.

The Cython extension is used when it was built; otherwise the numpy
fallback in :mod:`charge2._pykernels` is loaded. Setting
``CHARGE2_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CHARGE2_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

tridiag_eigvalsh = _impl.tridiag_eigvalsh
laguerre_log_neg = _impl.laguerre_log_neg
laguerre_newton_deltas = _impl.laguerre_newton_deltas
bernoulli_pmf = _impl.bernoulli_pmf


def available_backends():
    """Map of backend name to kernel module, for benchmarks and parity tests."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        return out
    out["cython"] = _ckernels
    return out
