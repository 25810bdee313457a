# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the recurrences in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def dprim_backward(double[::1] h, double complex[::1] r, double complex[::1] D,
                   double complex[::1] M, double complex phi_end, double complex dphi_end):
    cdef Py_ssize_t n = h.shape[0], j
    phi_a = np.empty(n + 1, np.complex128)
    dphi_a = np.empty(n + 1, np.complex128)
    cdef double complex[::1] phi = phi_a
    cdef double complex[::1] dphi = dphi_a
    cdef double complex rj
    phi[n] = phi_end
    dphi[n] = dphi_end
    for j in range(n - 1, -1, -1):
        rj = r[j]
        dphi[j] = rj * dphi[j + 1] - D[j]
        phi[j] = rj * (phi[j + 1] - h[j] * dphi[j + 1]) + M[j]
    return phi_a, dphi_a


def dprim_forward(double[::1] h, double complex[::1] r, double complex[::1] D,
                  double complex[::1] N, double complex phi0, double complex dphi0):
    cdef Py_ssize_t n = h.shape[0], j
    phi_a = np.empty(n + 1, np.complex128)
    dphi_a = np.empty(n + 1, np.complex128)
    cdef double complex[::1] phi = phi_a
    cdef double complex[::1] dphi = dphi_a
    cdef double complex rj
    phi[0] = phi0
    dphi[0] = dphi0
    for j in range(n):
        rj = r[j]
        dphi[j + 1] = rj * dphi[j] + D[j]
        phi[j + 1] = rj * (phi[j] + h[j] * dphi[j]) + N[j]
    return phi_a, dphi_a


def linrec_forward(double complex[::1] r, double complex[::1] c, double complex p0):
    cdef Py_ssize_t n = r.shape[0], k
    p_a = np.empty(n + 1, np.complex128)
    cdef double complex[::1] p = p_a
    p[0] = p0
    for k in range(n):
        p[k + 1] = r[k] * p[k] + c[k]
    return p_a


def linrec_backward(double complex[::1] r, double complex[::1] c, double complex pn):
    cdef Py_ssize_t n = r.shape[0], k
    p_a = np.empty(n + 1, np.complex128)
    cdef double complex[::1] p = p_a
    p[n] = pn
    for k in range(n - 1, -1, -1):
        p[k] = r[k] * p[k + 1] + c[k]
    return p_a


cdef inline double _l1(double re, double im) nogil:
    return (re if re >= 0 else -re) + (im if im >= 0 else -im)


def airy_taylor_step(double complex[::1] z0, double complex[::1] f0, double complex[::1] fp0,
                     double complex[::1] f1_0, double complex[::1] h, double tol, int maxterms):
    """Per-point Taylor step of y'' = z y; each point stops at its own tolerance.

    Complex arithmetic is spelled out on real and imaginary parts, and the
    stopping test uses the l1 modulus (within a factor sqrt(2) of |.|, which
    the 1e-18 tolerance absorbs).
    """
    cdef Py_ssize_t m = z0.shape[0], i
    cdef int n
    val_a = np.empty(m, np.complex128)
    der_a = np.empty(m, np.complex128)
    prim_a = np.empty(m, np.complex128)
    cdef double complex[::1] val = val_a
    cdef double complex[::1] der = der_a
    cdef double complex[::1] prim = prim_a
    cdef double zr, zi, hr, hi, pr, pi_, ar, ai_, nr, ni, qr, qi, hpr, hpi, hqr, hqi
    cdef double vr, vi, dr, di, sr, si, tr, ti, tmp, inv, scale, tail, hab
    for i in range(m):
        zr = z0[i].real
        zi = z0[i].imag
        hr = h[i].real
        hi = h[i].imag
        pr = 0.0
        pi_ = 0.0
        ar = f0[i].real
        ai_ = f0[i].imag
        nr = fp0[i].real
        ni = fp0[i].imag
        hpr = 1.0
        hpi = 0.0
        hqr = 0.0
        hqi = 0.0
        vr = 0.0
        vi = 0.0
        dr = 0.0
        di = 0.0
        sr = f1_0[i].real
        si = f1_0[i].imag
        hab = _l1(hr, hi)
        scale = _l1(ar, ai_) + _l1(nr, ni) * hab + _l1(sr, si) + 1e-300
        for n in range(maxterms):
            tr = ar * hpr - ai_ * hpi
            ti = ar * hpi + ai_ * hpr
            vr += tr
            vi += ti
            if n >= 1:
                dr += n * (ar * hqr - ai_ * hqi)
                di += n * (ar * hqi + ai_ * hqr)
            inv = 1.0 / (n + 1)
            sr += (tr * hr - ti * hi) * inv
            si += (tr * hi + ti * hr) * inv
            inv = 1.0 / ((n + 1) * (n + 2))
            qr = (zr * ar - zi * ai_ + pr) * inv
            qi = (zr * ai_ + zi * ar + pi_) * inv
            pr = ar
            pi_ = ai_
            ar = nr
            ai_ = ni
            nr = qr
            ni = qi
            hqr = hpr
            hqi = hpi
            tmp = hpr * hr - hpi * hi
            hpi = hpr * hi + hpi * hr
            hpr = tmp
            if n > 4:
                tail = _l1(hpr, hpi) * (_l1(ar, ai_) + _l1(nr, ni) * hab)
                if tail * (n + 2) <= tol * scale:
                    break
        val[i] = vr + 1j * vi
        der[i] = dr + 1j * di
        prim[i] = sr + 1j * si
    return val_a, der_a, prim_a


cdef extern from "complex.h" nogil:
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)

from libc.math cimport sqrt

cdef double DPC[6]
DPC[:] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0]
cdef double DPA[6][5]
DPA[1][:] = [0.2, 0, 0, 0, 0]
DPA[2][:] = [3.0 / 40, 9.0 / 40, 0, 0, 0]
DPA[3][:] = [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0]
DPA[4][:] = [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0]
DPA[5][:] = [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656]
cdef double DPB[7]
DPB[:] = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0]
cdef double DPE[7]
DPE[:] = [35.0 / 384 - 5179.0 / 57600, 0.0, 500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
          -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100, -1.0 / 40]


cdef inline double _abs2(double complex z) nogil:
    return creal(z) * creal(z) + cimag(z) * cimag(z)


cdef inline void _rhs(double complex* y, double complex a, double complex b, double s,
                      double al2, double complex* f) nogil:
    f[0] = s * y[1]
    f[1] = s * y[2]
    f[2] = s * y[3]
    f[3] = ((2 * al2 + a) * s * s * y[2] - (al2 * al2 + a * al2 + b) * y[0]) / (s * s * s)


cdef void _gs2(double complex* y1, double complex* y2, double complex* q, double complex* r) nogil:
    # q: 4x2 row-major, r: 2x2 row-major
    cdef int i
    cdef double n1 = 0, n2 = 0
    cdef double complex r12 = 0, d = 0
    for i in range(4):
        n1 += _abs2(y1[i])
    n1 = sqrt(n1)
    for i in range(4):
        q[2 * i] = y1[i] / n1
        r12 += conj(q[2 * i]) * y2[i]
    for i in range(4):
        y2[i] = y2[i] - r12 * q[2 * i]
        d += conj(q[2 * i]) * y2[i]
    for i in range(4):
        y2[i] = y2[i] - d * q[2 * i]
        n2 += _abs2(y2[i])
    n2 = sqrt(n2)
    for i in range(4):
        q[2 * i + 1] = y2[i] / n2
    r[0] = n1
    r[1] = r12 + d
    r[2] = 0
    r[3] = n2


def orr_dopri_sweep(double[::1] h, double complex[:, ::1] a, double complex[:, ::1] b, double s,
                    double al2, Y0):
    cdef Py_ssize_t n = h.shape[0], k
    cdef int i, j, col, st
    Q_a = np.empty((n + 1, 4, 2), np.complex128)
    R_a = np.empty((n, 2, 2), np.complex128)
    R0_a = np.empty((2, 2), np.complex128)
    cdef double complex[:, :, ::1] Q = Q_a
    cdef double complex[:, :, ::1] R = R_a
    cdef double complex[:, ::1] R0 = R0_a
    cdef double complex[:, ::1] Y = np.ascontiguousarray(Y0, dtype=np.complex128)
    cdef double complex y1[4]
    cdef double complex y2[4]
    cdef double complex q[8]
    cdef double complex r[4]
    cdef double complex kk[7][4]
    cdef double complex yi[4]
    cdef double complex ynew[2][4]
    cdef double complex err[4]
    cdef double complex ak, bk
    cdef double hk, e, errmax = 0.0
    for i in range(4):
        y1[i] = Y[i, 0]
        y2[i] = Y[i, 1]
    _gs2(y1, y2, q, r)
    for i in range(4):
        Q[0, i, 0] = q[2 * i]
        Q[0, i, 1] = q[2 * i + 1]
    R0[0, 0] = r[0]; R0[0, 1] = r[1]; R0[1, 0] = r[2]; R0[1, 1] = r[3]
    with nogil:
        for k in range(n):
            hk = h[k]
            for col in range(2):
                for st in range(6):
                    for i in range(4):
                        yi[i] = Q[k, i, col]
                        for j in range(st):
                            yi[i] = yi[i] + hk * DPA[st][j] * kk[j][i]
                    _rhs(yi, a[k, st], b[k, st], s, al2, kk[st])
                for i in range(4):
                    ynew[col][i] = Q[k, i, col]
                    for j in range(6):
                        ynew[col][i] = ynew[col][i] + hk * DPB[j] * kk[j][i]
                _rhs(ynew[col], a[k, 5], b[k, 5], s, al2, kk[6])
                e = 0.0
                for i in range(4):
                    err[i] = 0
                    for j in range(7):
                        err[i] = err[i] + hk * DPE[j] * kk[j][i]
                    e += _abs2(err[i])
                e = sqrt(e)
                if e > errmax:
                    errmax = e
            _gs2(ynew[0], ynew[1], q, r)
            for i in range(4):
                Q[k + 1, i, 0] = q[2 * i]
                Q[k + 1, i, 1] = q[2 * i + 1]
            R[k, 0, 0] = r[0]; R[k, 0, 1] = r[1]; R[k, 1, 0] = r[2]; R[k, 1, 1] = r[3]
    return Q_a, R_a, errmax, R0_a


def chain_solve(double complex[:, :, ::1] R, Py_ssize_t m, c, int direction):
    cdef Py_ssize_t n = R.shape[0], k
    out_a = np.zeros((n + 1, 2), np.complex128)
    cdef double complex[:, ::1] out = out_a
    cdef double complex c0 = c[0], c1 = c[1]
    out[m, 0] = c0
    out[m, 1] = c1
    if direction < 0:
        for k in range(m - 1, -1, -1):
            c1 = c1 / R[k, 1, 1]
            c0 = (c0 - R[k, 0, 1] * c1) / R[k, 0, 0]
            out[k, 0] = c0
            out[k, 1] = c1
    else:
        for k in range(m, n):
            c1 = c1 / R[k, 1, 1]
            c0 = (c0 - R[k, 0, 1] * c1) / R[k, 0, 0]
            out[k + 1, 0] = c0
            out[k + 1, 1] = c1
    return out_a
