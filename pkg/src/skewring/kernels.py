"""Backend selection for the scan kernels.

The compiled extension is used when it imports; ``SKEWRING_PURE=1`` forces the
numpy fallback.  Both backends return identical results.
"""
import os

from skewring import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SKEWRING_PURE", "") not in ("1", "true", "yes"):
    try:
        from skewring import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass


def backends():
    """Available backend modules by name."""
    out = {"python": _pykernels}
    try:
        from skewring import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def first_assoc_violation(op):
    return _impl.first_assoc_violation(op)


def first_distrib_violation(add, mul, left):
    return _impl.first_distrib_violation(add, mul, left)


def sandwich_matrix(mul, zero, lefts, rights):
    return _impl.sandwich_matrix(mul, zero, lefts, rights)


def skew_sandwich_grid(mul, add, zero, sigpow, E, elen, F, flen, kcount):
    return _impl.skew_sandwich_grid(mul, add, zero, sigpow, E, elen, F, flen, kcount)
