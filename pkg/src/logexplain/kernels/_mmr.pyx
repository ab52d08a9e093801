# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled greedy-MMR kernel.

Same contract as kernels._mmr_py.mmr_select: greedy maximal marginal
relevance over unit-vector rows, empty-set diversity term 0, ties resolved
to the lowest row index via strict argmax. The row-similarity products go
through BLAS dgemv; the selection loop itself is fused C with no per-step
temporaries.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport dgemv

cnp.import_array()


cdef void _matvec(double[:, ::1] matrix, double* x, double* y) noexcept nogil:
    # y = matrix @ x for a C-contiguous (n, dim) matrix: in column-major
    # terms that array is (dim, n), so ask BLAS for the transposed product
    cdef int m = <int> matrix.shape[1]   # dim
    cdef int n = <int> matrix.shape[0]
    cdef int inc = 1
    cdef double one = 1.0
    cdef double zero = 0.0
    dgemv("T", &m, &n, &one, &matrix[0, 0], &m, x, &inc, &zero, y, &inc)


def mmr_select(double[::1] query, double[:, ::1] matrix, int k, double lam):
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t m = k if k < n else n
    if m <= 0:
        return []

    cdef cnp.ndarray[cnp.float64_t, ndim=1] rel_arr = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sims_arr = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] max_sim_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] taken_arr = np.zeros(n, dtype=np.uint8)
    cdef double[::1] rel = rel_arr
    cdef double[::1] sims = sims_arr
    cdef double[::1] max_sim = max_sim_arr
    cdef unsigned char[::1] taken = taken_arr

    cdef Py_ssize_t i, step, best
    cdef double score, best_score
    cdef double neg = 1.0 - lam
    cdef bint empty = True  # diversity term is 0 only while nothing is selected

    out = []
    with nogil:
        _matvec(matrix, &query[0], &rel[0])
    for step in range(m):
        best = -1
        best_score = -np.inf
        with nogil:
            for i in range(n):
                if taken[i]:
                    continue
                if empty:
                    score = lam * rel[i] - 0.0
                else:
                    score = lam * rel[i] - neg * max_sim[i]
                if score > best_score:
                    best_score = score
                    best = i
        taken[best] = 1
        out.append(best)
        if step + 1 == m:
            break
        # fold the new pick into the max-similarity column; the first pick
        # assigns (a non-empty max may legitimately be negative)
        with nogil:
            _matvec(matrix, &matrix[best, 0], &sims[0])
            for i in range(n):
                if empty or sims[i] > max_sim[i]:
                    max_sim[i] = sims[i]
        empty = False
    return out
