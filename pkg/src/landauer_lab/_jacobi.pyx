# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi sweeps for complex Hermitian matrices.

Hot kernel of the package: exact joint evolution repeatedly decomposes
matrices of dimension up to a few hundred.  The algorithm (and the skip /
convergence thresholds) mirror the pure fallback in ``_jacobi_py`` exactly.
"""

from libc.math cimport sqrt, fabs

cimport cython


cdef double _off_norm_sq(double complex[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double re, im
    for i in range(n):
        for j in range(n):
            if i != j:
                re = a[i, j].real
                im = a[i, j].imag
                acc += re * re + im * im
    return acc


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                  double tol, int max_sweeps):
    """In-place Jacobi diagonalization; returns ``(sweeps, converged)``."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double fro = 0.0, thresh, thresh_sq, skip
    cdef double ag, alpha, beta, tau, t, c, re, im
    cdef double complex g, s, sc, xp, xq

    with nogil:
        for p in range(n):
            for q in range(n):
                re = a[p, q].real
                im = a[p, q].imag
                fro += re * re + im * im
    fro = sqrt(fro)
    if fro == 0.0:
        return 0, True
    thresh = tol * fro
    thresh_sq = thresh * thresh
    skip = thresh / n

    with nogil:
        for sweep in range(max_sweeps):
            if _off_norm_sq(a, n) <= thresh_sq:
                with gil:
                    return sweep, True
            for p in range(n - 1):
                for q in range(p + 1, n):
                    g = a[p, q]
                    ag = sqrt(g.real * g.real + g.imag * g.imag)
                    if ag <= skip:
                        continue
                    alpha = a[p, p].real
                    beta = a[q, q].real
                    tau = (alpha - beta) / (2.0 * ag)
                    if tau >= 0.0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = (t * c) * (g.conjugate() / ag)
                    sc = s.conjugate()
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp + s * xq
                        a[k, q] = -sc * xp + c * xq
                    for k in range(n):
                        xp = a[p, k]
                        xq = a[q, k]
                        a[p, k] = c * xp + sc * xq
                        a[q, k] = -s * xp + c * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp + s * xq
                        v[k, q] = -sc * xp + c * xq
    return max_sweeps, _off_norm_sq(a, n) <= thresh_sq
