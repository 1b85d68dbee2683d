"""Pure-Python bitmask kernels for the exterior algebra.

Basis element ``dx^{i1} ^ ... ^ dx^{ik}`` (i1 < ... < ik, 1-based) is stored at
index ``sum(1 << (i - 1))``.  These loops work for any coefficient dtype,
including ``object`` arrays of :class:`fractions.Fraction`, which is what the
exact mode relies on.
"""

import numpy as np

BACKEND = "python"


def popcount(x):
    return bin(x).count("1")


def wedge_sign(a, b):
    """Sign of dx^a ^ dx^b relative to dx^(a|b); 0 if the masks overlap."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        # generators of a above this generator of b must hop over it
        swaps += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


def contract_sign(i, a):
    """Sign of i_{e_{i+1}} dx^a (i is 0-based), 0 if the index is absent."""
    if not (a >> i) & 1:
        return 0
    return -1 if popcount(a & ((1 << i) - 1)) & 1 else 1


def wedge(a, b, m):
    n = 1 << m
    out = np.zeros(n, dtype=np.result_type(a, b))
    if out.dtype == object:
        out[:] = 0
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            bj = b[j]
            if bj == 0 or i & j:
                continue
            out[i | j] += wedge_sign(i, j) * ai * bj
    return out


def contract(x, a, m):
    n = 1 << m
    out = np.zeros(n, dtype=np.result_type(x, a))
    if out.dtype == object:
        out[:] = 0
    for mask in range(n):
        am = a[mask]
        if am == 0:
            continue
        for i in range(m):
            if (mask >> i) & 1 and x[i] != 0:
                out[mask ^ (1 << i)] += contract_sign(i, mask) * x[i] * am
    return out


def wedge_matrix(a, m):
    """Matrix of left multiplication ``b -> a ^ b``."""
    n = 1 << m
    out = np.zeros((n, n), dtype=np.result_type(a, np.float64))
    if out.dtype == object:
        out[:] = 0
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            if not i & j:
                out[i | j, j] += wedge_sign(i, j) * ai
    return out


def contraction_matrix(i, m):
    """Matrix of ``i_{e_{i+1}}`` acting on coefficient vectors."""
    n = 1 << m
    out = np.zeros((n, n))
    for mask in range(n):
        s = contract_sign(i, mask)
        if s:
            out[mask ^ (1 << i), mask] = s
    return out
