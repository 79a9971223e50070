# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernel: fidelity of both equation sides over a (theta2, theta1) grid."""
import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport cos, sin, sqrt

cnp.import_array()


cdef inline void _mul(double complex* a, double complex* b, double complex* out) noexcept nogil:
    out[0] = a[0] * b[0] + a[1] * b[2]
    out[1] = a[0] * b[1] + a[1] * b[3]
    out[2] = a[2] * b[0] + a[3] * b[2]
    out[3] = a[2] * b[1] + a[3] * b[3]


cdef inline void _set_A(double t, double complex* m) noexcept nogil:
    cdef double c = cos(t), s = sin(t)
    m[0] = c - 1j * s
    m[1] = 0
    m[2] = 0
    m[3] = c + 1j * s


cdef inline void _set_B(double t, double complex* m) noexcept nogil:
    cdef double c = cos(t), s = sin(t)
    m[0] = c
    m[1] = -1j * s
    m[2] = -1j * s
    m[3] = c


cdef void _point(double t1, double t2, double t3,
                 double complex[:, ::1] probes, double[::1] out) noexcept nogil:
    cdef double complex a1[4], b1[4], a2[4], b2[4], a3[4], b3[4]
    cdef double complex tmp[4], left[4], right[4], u[4]
    cdef double complex pv, ph, w
    cdef Py_ssize_t k
    _set_A(t1, a1); _set_B(t1, b1)
    _set_A(t2, a2); _set_B(t2, b2)
    _set_A(t3, a3); _set_B(t3, b3)
    _mul(a1, b2, tmp); _mul(tmp, a3, left)
    _mul(b3, a2, tmp); _mul(tmp, b1, right)
    # u = left^dagger right
    u[0] = left[0].conjugate() * right[0] + left[2].conjugate() * right[2]
    u[1] = left[0].conjugate() * right[1] + left[2].conjugate() * right[3]
    u[2] = left[1].conjugate() * right[0] + left[3].conjugate() * right[2]
    u[3] = left[1].conjugate() * right[1] + left[3].conjugate() * right[3]
    for k in range(probes.shape[0]):
        pv = probes[k, 0]
        ph = probes[k, 1]
        w = (pv.conjugate() * (u[0] * pv + u[1] * ph)
             + ph.conjugate() * (u[2] * pv + u[3] * ph))
        out[k] = sqrt(w.real * w.real + w.imag * w.imag)


def fidelity_grid(theta1, theta2, double theta3, probes, int num_threads=0):
    """Return ``F[i2, i1, k] = |<p_k| lhs^dagger rhs |p_k>|`` on the outer grid."""
    cdef double[::1] t1 = np.ascontiguousarray(theta1, dtype=np.float64)
    cdef double[::1] t2 = np.ascontiguousarray(theta2, dtype=np.float64)
    cdef double complex[:, ::1] pr = np.ascontiguousarray(probes, dtype=np.complex128)
    cdef Py_ssize_t n1 = t1.shape[0], n2 = t2.shape[0], npr = pr.shape[0]
    out_arr = np.empty((n2, n1, npr), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j
    if num_threads <= 0:
        for i in prange(n2, nogil=True, schedule="static"):
            for j in range(n1):
                _point(t1[j], t2[i], theta3, pr, out[i, j])
    else:
        for i in prange(n2, nogil=True, schedule="static", num_threads=num_threads):
            for j in range(n1):
                _point(t1[j], t2[i], theta3, pr, out[i, j])
    return out_arr
