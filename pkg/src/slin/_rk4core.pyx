# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepping kernel; semantics mirror numeric.rk4_kernel_python.

Both kernels run the same IEEE double operations in the same order, so
trajectories agree bit for bit between backends.
"""

from libc.math cimport isfinite
from libc.stdlib cimport free, malloc


cdef void _eval_into(int[::1] comp_ptr, double[::1] coeff, int[::1] term_ptr,
                     int[::1] fvar, int[::1] fexp,
                     double* y, double* res, int dim) noexcept nogil:
    cdef int c, t, f, e
    cdef double acc, v, x
    for c in range(dim):
        acc = 0.0
        for t in range(comp_ptr[c], comp_ptr[c + 1]):
            v = coeff[t]
            for f in range(term_ptr[t], term_ptr[t + 1]):
                x = y[fvar[f]]
                for e in range(fexp[f]):
                    v *= x
            acc += v
        res[c] = acc


def rk4_kernel(int[::1] comp_ptr, double[::1] coeff, int[::1] term_ptr,
               int[::1] fvar, int[::1] fexp, double[::1] y0,
               double step, int n_steps, double[::1] out):
    cdef int dim = y0.shape[0]
    cdef double* buf = <double*> malloc(7 * dim * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* y = buf
    cdef double* k1 = buf + dim
    cdef double* k2 = buf + 2 * dim
    cdef double* k3 = buf + 3 * dim
    cdef double* k4 = buf + 4 * dim
    cdef double* ytmp = buf + 5 * dim
    cdef double* lost = buf + 6 * dim
    cdef double half = 0.5 * step
    cdef double sixth = step / 6.0
    cdef double delta, t
    cdef int i, s, base
    cdef bint ok
    try:
        for i in range(dim):
            y[i] = y0[i]
            lost[i] = 0.0
            out[i] = y[i]
        for s in range(n_steps):
            _eval_into(comp_ptr, coeff, term_ptr, fvar, fexp, y, k1, dim)
            for i in range(dim):
                ytmp[i] = y[i] + half * k1[i]
            _eval_into(comp_ptr, coeff, term_ptr, fvar, fexp, ytmp, k2, dim)
            for i in range(dim):
                ytmp[i] = y[i] + half * k2[i]
            _eval_into(comp_ptr, coeff, term_ptr, fvar, fexp, ytmp, k3, dim)
            for i in range(dim):
                ytmp[i] = y[i] + step * k3[i]
            _eval_into(comp_ptr, coeff, term_ptr, fvar, fexp, ytmp, k4, dim)
            ok = True
            for i in range(dim):
                # Kahan-compensated accumulation, matching the Python twin.
                delta = sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) + lost[i]
                t = y[i] + delta
                lost[i] = delta - (t - y[i])
                y[i] = t
                if not isfinite(t):
                    ok = False
            if not ok:
                return s
            base = (s + 1) * dim
            for i in range(dim):
                out[base + i] = y[i]
        return n_steps
    finally:
        free(buf)
