# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled lattice-point box scan on 64-bit integers.

The caller guarantees that every partial sum fits in a signed 64-bit
integer; see ``fanovol.kernels`` for the overflow guard.
"""

from libc.stdlib cimport malloc, free


cdef inline long long floordiv(long long a, long long b):
    # floor semantics because cdivision is off
    return a // b


def box_scan(offsets, normals, strict, lo, hi):
    cdef Py_ssize_t d = len(lo)
    cdef Py_ssize_t m = len(offsets)
    cdef Py_ssize_t i, k
    out = []
    if d == 0:
        for i in range(m):
            if (strict[i] and offsets[i] <= 0) or ((not strict[i]) and offsets[i] < 0):
                return []
        return [()]

    cdef long long *A = <long long *> malloc(m * d * sizeof(long long))
    cdef long long *need = <long long *> malloc(m * sizeof(long long))
    cdef long long *tail = <long long *> malloc(m * (d + 1) * sizeof(long long))
    cdef long long *part = <long long *> malloc(m * (d + 1) * sizeof(long long))
    cdef long long *L = <long long *> malloc(d * sizeof(long long))
    cdef long long *H = <long long *> malloc(d * sizeof(long long))
    cdef long long *x = <long long *> malloc(d * sizeof(long long))
    cdef long long a, rhs, b, low, high, v
    cdef int ok
    try:
        for i in range(m):
            need[i] = 1 if strict[i] else 0
            part[i] = offsets[i]
            row = normals[i]
            for k in range(d):
                A[i * d + k] = row[k]
        for k in range(d):
            L[k] = lo[k]
            H[k] = hi[k]
        for i in range(m):
            tail[d * m + i] = 0
        for k in range(d - 1, -1, -1):
            for i in range(m):
                a = A[i * d + k]
                tail[k * m + i] = tail[(k + 1) * m + i] + (a * H[k] if a > 0 else a * L[k])

        # part[k*m + i] holds offsets[i] + sum_{j<k} A[i,j] x_j
        k = 0
        x[0] = L[0] - 1
        while k >= 0:
            if k == d - 1:
                low = L[k]
                high = H[k]
                ok = 1
                for i in range(m):
                    a = A[i * d + k]
                    rhs = need[i] - part[k * m + i]
                    if a > 0:
                        b = -floordiv(-rhs, a)
                        if b > low:
                            low = b
                    elif a < 0:
                        b = floordiv(-rhs, -a)
                        if b < high:
                            high = b
                    elif rhs > 0:
                        ok = 0
                        break
                    if low > high:
                        ok = 0
                        break
                if ok:
                    for v in range(low, high + 1):
                        x[k] = v
                        out.append(tuple([x[i] for i in range(d)]))
                k -= 1
                continue
            x[k] += 1
            if x[k] > H[k]:
                k -= 1
                continue
            ok = 1
            for i in range(m):
                part[(k + 1) * m + i] = part[k * m + i] + A[i * d + k] * x[k]
                if part[(k + 1) * m + i] + tail[(k + 1) * m + i] < need[i]:
                    ok = 0
                    break
            if ok:
                k += 1
                if k < d - 1:
                    x[k] = L[k] - 1
    finally:
        free(A)
        free(need)
        free(tail)
        free(part)
        free(L)
        free(H)
        free(x)
    return out
