"""Backend selection for the exterior-algebra kernels.

The compiled extension is used when it imports and ``GENK_PURE_PYTHON`` is not
set.  Exact (object dtype) coefficients always take the Python path.
"""

import os

import numpy as np

from . import _kernels_py

_compiled = None
if not os.environ.get("GENK_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_fast = _compiled if _compiled is not None else _kernels_py
BACKEND = _fast.BACKEND

popcount = _kernels_py.popcount
wedge_sign = _kernels_py.wedge_sign
contract_sign = _kernels_py.contract_sign
contraction_matrix = _fast.contraction_matrix


def _exact(*arrays):
    return any(np.asarray(a).dtype == object for a in arrays)


def wedge(a, b, m):
    if _exact(a, b):
        return _kernels_py.wedge(a, b, m)
    return _fast.wedge(a, b, m)


def contract(x, a, m):
    if _exact(x, a):
        return _kernels_py.contract(x, a, m)
    return _fast.contract(x, a, m)


def wedge_matrix(a, m):
    if _exact(a):
        return _kernels_py.wedge_matrix(a, m)
    return _fast.wedge_matrix(a, m)
