"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set TAUT_PURE=1 to force the numpy implementations.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("TAUT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels


def use(backend):
    """Switch implementation at runtime ('compiled' or 'python')."""
    global _impl, BACKEND
    if backend == "python":
        _impl, BACKEND = _pykernels, "python"
    elif backend == "compiled":
        from . import _kernels
        _impl, BACKEND = _kernels, "compiled"
    else:
        raise ValueError(backend)


def _c(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def axis_transform(data, E, step):
    return _impl.axis_transform(_c(data), _c(E), int(step))


def pair_transform(data, P, step):
    return _impl.pair_transform(_c(data), _c(P), int(step))


def cyclic_outer(f, g):
    return _impl.cyclic_outer(_c(f), _c(g))


def cyclic_rowmul(f, g):
    return _impl.cyclic_rowmul(_c(f), _c(g))
