# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in _pykernels."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libc.math cimport fabs, INFINITY

cnp.import_array()


cdef inline int _top_bit(uint64_t[:] col, int nwords) nogil:
    cdef int w, b
    cdef uint64_t v
    for w in range(nwords - 1, -1, -1):
        v = col[w]
        if v:
            b = 63
            while not (v >> b) & 1:
                b -= 1
            return w * 64 + b
    return -1


def reduce_boundary(list columns):
    cdef Py_ssize_t n = len(columns)
    cdef int nwords = <int>((n + 63) // 64) if n else 1
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] mat = np.zeros((n, nwords), dtype=np.uint64)
    cdef uint64_t[:, :] m = mat
    cdef Py_ssize_t j, k, w
    cdef long r
    for j in range(n):
        for r in columns[j]:
            m[j, r >> 6] ^= (<uint64_t>1) << (r & 63)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] owner_arr = np.full(max(n, 1), -1, dtype=np.int64)
    cdef cnp.int64_t[:] owner = owner_arr
    low = [-1] * n
    cdef int piv
    for j in range(n):
        piv = _top_bit(m[j], nwords)
        while piv >= 0:
            k = owner[piv]
            if k < 0:
                owner[piv] = j
                low[j] = piv
                break
            for w in range(nwords):
                m[j, w] ^= m[k, w]
            piv = _top_bit(m[j], nwords)
    return low


cdef double _dis(double[:, :] da, double[:, :] db, long[:] f, int n) nogil:
    cdef double best = 0.0, v
    cdef int i, j
    for i in range(n):
        for j in range(i + 1, n):
            v = fabs(da[i, j] - db[f[i], f[j]])
            if v > best:
                best = v
    return best


cdef bint _next_map(long[:] f, int n, int m) nogil:
    cdef int i = n - 1
    while i >= 0:
        f[i] += 1
        if f[i] < m:
            return True
        f[i] = 0
        i -= 1
    return False


def gh_minima(dx_in, dy_in):
    cdef double[:, :] dx = np.ascontiguousarray(dx_in, dtype=float)
    cdef double[:, :] dy = np.ascontiguousarray(dy_in, dtype=float)
    cdef int nx = dx.shape[0], ny = dy.shape[0]
    cdef long[:] f = np.zeros(nx, dtype=np.int_)
    cdef long[:] g = np.zeros(ny, dtype=np.int_)
    # distortions of every g, enumerated in the same odometer order
    cdef Py_ssize_t ng = nx ** ny
    cdef double[:] disg = np.empty(max(ng, 1))
    cdef Py_ssize_t gi = 0
    while True:
        disg[gi] = _dis(dy, dx, g, ny)
        gi += 1
        if not _next_map(g, ny, nx):
            break
    cdef double best0 = INFINITY, best1 = INFINITY, best2 = INFINITY
    cdef double df, base, c, a, v
    cdef int x, y
    with nogil:
        while True:
            df = _dis(dx, dy, f, nx)
            if df < best0 or df < best1 or df < best2:
                for y in range(ny):
                    g[y] = 0
                gi = 0
                while True:
                    base = df if df > disg[gi] else disg[gi]
                    if base < best2:
                        best2 = base
                    if base < best0:
                        c = base
                        for x in range(nx):
                            for y in range(ny):
                                v = fabs(dx[x, g[y]] - dy[y, f[x]])
                                if v > c:
                                    c = v
                            if c >= best0:
                                break
                        if c < best0:
                            best0 = c
                    if base < best1:
                        a = base
                        for x in range(nx):
                            v = dx[x, g[f[x]]]
                            if v > a:
                                a = v
                        for y in range(ny):
                            v = dy[y, f[g[y]]]
                            if v > a:
                                a = v
                        if a < best1:
                            best1 = a
                    gi += 1
                    if not _next_map(g, ny, nx):
                        break
            if not _next_map(f, nx, ny):
                break
    return best0, best1, best2
