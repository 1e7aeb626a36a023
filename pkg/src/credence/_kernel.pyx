# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled combination kernel.

Same contract as _kernel_py, restricted to codes that fit an unsigned
64-bit word (the dispatcher in credence.kernel enforces that).  The
pairwise intersection loop accumulates into an open-addressing table so
the inner loop never touches Python objects.
"""

from libc.stdlib cimport calloc, free, malloc

ctypedef unsigned long long u64


cdef inline Py_ssize_t _slot(u64 key, Py_ssize_t mask) nogil:
    # Fibonacci hashing; table size is a power of two.
    return <Py_ssize_t>((key * <u64>0x9E3779B97F4A7C15) >> 32) & mask


def combine_masses(dict a, dict b, double tol):
    """Orthogonal sum of two {code: mass} dicts.  Returns (result|None, K)."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef u64 *ca = <u64 *> malloc(na * sizeof(u64))
    cdef double *ma = <double *> malloc(na * sizeof(double))
    cdef u64 *cb = <u64 *> malloc(nb * sizeof(u64))
    cdef double *mb = <double *> malloc(nb * sizeof(double))
    if ca == NULL or ma == NULL or cb == NULL or mb == NULL:
        free(ca); free(ma); free(cb); free(mb)
        raise MemoryError()

    cdef Py_ssize_t i = 0, j
    for code, mass in a.items():
        ca[i] = <u64> code
        ma[i] = <double> mass
        i += 1
    i = 0
    for code, mass in b.items():
        cb[i] = <u64> code
        mb[i] = <double> mass
        i += 1

    # Table capacity: next power of two >= 2 * na * nb keeps the load
    # factor under one half even if every product lands on a new key.
    cdef Py_ssize_t cap = 1
    while cap < 2 * na * nb:
        cap <<= 1
    cdef Py_ssize_t mask = cap - 1
    # key 0 doubles as the empty-slot sentinel: an empty intersection is
    # never inserted (it feeds the conflict sum instead).
    cdef u64 *keys = <u64 *> calloc(cap, sizeof(u64))
    cdef double *vals = <double *> calloc(cap, sizeof(double))
    if keys == NULL or vals == NULL:
        free(ca); free(ma); free(cb); free(mb); free(keys); free(vals)
        raise MemoryError()

    cdef double conflict = 0.0, w
    cdef u64 inter
    cdef Py_ssize_t s
    with nogil:
        for i in range(na):
            for j in range(nb):
                inter = ca[i] & cb[j]
                w = ma[i] * mb[j]
                if inter == 0:
                    conflict += w
                    continue
                s = _slot(inter, mask)
                while keys[s] != 0 and keys[s] != inter:
                    s = (s + 1) & mask
                keys[s] = inter
                vals[s] += w

    free(ca); free(ma); free(cb); free(mb)

    if conflict >= 1.0 - tol:
        free(keys); free(vals)
        return None, conflict

    cdef double norm = 1.0 / (1.0 - conflict)
    cdef dict out = {}
    for s in range(cap):
        if keys[s] != 0 and vals[s] > 0.0:
            out[keys[s]] = vals[s] * norm
    free(keys); free(vals)
    return out, conflict


def bel_of(dict masses, target_code):
    """Total mass committed to subsets of `target_code`."""
    cdef u64 target = <u64> target_code
    cdef u64 code
    cdef double total = 0.0
    for key, mass in masses.items():
        code = <u64> key
        if code & target == code:
            total += <double> mass
    return total
