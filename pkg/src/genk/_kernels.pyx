# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels for complex double coefficients.

Same contracts as ``genk._kernels_py``; object (exact) arrays are routed to the
Python versions by ``genk.kernels``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline int _popcount(unsigned long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef inline int _wedge_sign(unsigned long a, unsigned long b) nogil:
    cdef unsigned long low
    cdef int swaps = 0
    if a & b:
        return 0
    while b:
        low = b & (~b + 1)
        swaps += _popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


cdef inline int _contract_sign(int i, unsigned long a) nogil:
    if not ((a >> i) & 1):
        return 0
    return -1 if _popcount(a & ((1UL << i) - 1)) & 1 else 1


def popcount(x):
    return _popcount(<unsigned long>x)


def wedge_sign(a, b):
    return _wedge_sign(<unsigned long>a, <unsigned long>b)


def contract_sign(i, a):
    return _contract_sign(<int>i, <unsigned long>a)


def wedge(a, b, int m):
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = 1 << m
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i, j
    cdef int s
    with nogil:
        for i in range(n):
            if av[i] == 0:
                continue
            for j in range(n):
                if bv[j] == 0 or (i & j):
                    continue
                s = _wedge_sign(i, j)
                ov[i | j] = ov[i | j] + s * av[i] * bv[j]
    return out


def contract(x, a, int m):
    cdef const double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = 1 << m
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t mask
    cdef int i, s
    with nogil:
        for mask in range(n):
            if av[mask] == 0:
                continue
            for i in range(m):
                s = _contract_sign(i, mask)
                if s != 0:
                    ov[mask ^ (1 << i)] = ov[mask ^ (1 << i)] + s * xv[i] * av[mask]
    return out


def wedge_matrix(a, int m):
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = 1 << m
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            if av[i] == 0:
                continue
            for j in range(n):
                if not (i & j):
                    ov[i | j, j] = ov[i | j, j] + _wedge_sign(i, j) * av[i]
    return out


def contraction_matrix(int i, int m):
    cdef Py_ssize_t n = 1 << m
    out = np.zeros((n, n))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t mask
    cdef int s
    with nogil:
        for mask in range(n):
            s = _contract_sign(i, mask)
            if s != 0:
                ov[mask ^ (1 << i), mask] = s
    return out
