"""Pure-Python reference implementations of the hot recurrences.

These mirror ``_kernels.pyx`` one to one and are used when the compiled
extension is unavailable or when ``OSGREEN_PURE=1`` is set.
"""
from __future__ import annotations

import numpy as np

__all__ = ["dprim_backward", "dprim_forward", "linrec_forward", "linrec_backward", "airy_taylor_step",
           "orr_dopri_sweep", "chain_solve"]


def dprim_backward(h, r, D, M, phi_end, dphi_end):
    """Double primitive swept from the right end to the left.

    Panel j spans [x_j, x_{j+1}].  Mantissas at x_j satisfy
        dphi_j = r_j dphi_{j+1} - D_j
        phi_j  = r_j (phi_{j+1} - h_j dphi_{j+1}) + M_j
    where r_j = exp(l_{j+1} - l_j) rescales between break log-scales and
    D_j, M_j are the panel integrals of psi and (t - x_j) psi already
    expressed in the scale l_j.
    """
    n = h.shape[0]
    phi = np.empty(n + 1, complex)
    dphi = np.empty(n + 1, complex)
    phi[n] = phi_end
    dphi[n] = dphi_end
    for j in range(n - 1, -1, -1):
        rj = r[j]
        dphi[j] = rj * dphi[j + 1] - D[j]
        phi[j] = rj * (phi[j + 1] - h[j] * dphi[j + 1]) + M[j]
    return phi, dphi


def dprim_forward(h, r, D, N, phi0, dphi0):
    """Double primitive swept from the left end to the right.

        dphi_{j+1} = r_j dphi_j + D_j
        phi_{j+1}  = r_j (phi_j + h_j dphi_j) + N_j
    with r_j = exp(l_j - l_{j+1}) and D_j, N_j the panel integrals of psi and
    (x_{j+1} - t) psi in the scale l_{j+1}.
    """
    n = h.shape[0]
    phi = np.empty(n + 1, complex)
    dphi = np.empty(n + 1, complex)
    phi[0] = phi0
    dphi[0] = dphi0
    for j in range(n):
        rj = r[j]
        dphi[j + 1] = rj * dphi[j] + D[j]
        phi[j + 1] = rj * (phi[j] + h[j] * dphi[j]) + N[j]
    return phi, dphi


def linrec_forward(r, c, p0):
    """p_{k+1} = r_k p_k + c_k, returned for k = 0..n."""
    n = r.shape[0]
    p = np.empty(n + 1, complex)
    p[0] = p0
    for k in range(n):
        p[k + 1] = r[k] * p[k] + c[k]
    return p


def linrec_backward(r, c, pn):
    """p_k = r_k p_{k+1} + c_k, returned for k = 0..n."""
    n = r.shape[0]
    p = np.empty(n + 1, complex)
    p[n] = pn
    for k in range(n - 1, -1, -1):
        p[k] = r[k] * p[k + 1] + c[k]
    return p


def airy_taylor_step(z0, f0, fp0, f1_0, h, tol, maxterms):
    """Taylor step of the Airy equation from z0 by h (vectorized over points).

    Returns (Ai, Ai', Ai(1,.)) at z0 + h given the same triple at z0.
    """
    a_prev = np.zeros_like(z0)  # a_{n-1}
    a_n = f0.copy()  # a_n, n = 0
    a_next = fp0.copy()  # a_{n+1}
    hp = np.ones_like(h)  # h^n
    hp_prev = np.zeros_like(h)  # h^(n-1)
    val = np.zeros_like(z0)
    der = np.zeros_like(z0)
    prim = f1_0.copy()
    scale = np.abs(f0) + np.abs(fp0) * np.abs(h) + np.abs(f1_0) + 1e-300
    for n in range(maxterms):
        t = a_n * hp
        val += t
        if n >= 1:
            der += n * a_n * hp_prev
        prim += t * h / (n + 1)
        # a_{n+2} = (z0 a_n + a_{n-1}) / ((n+1)(n+2))
        a_nn = (z0 * a_n + a_prev) / ((n + 1) * (n + 2))
        a_prev, a_n, a_next = a_n, a_next, a_nn
        hp_prev = hp
        hp = hp * h
        if n > 4:
            tail = np.abs(a_n * hp) + np.abs(a_next * hp * h)
            if np.all(tail * (n + 2) <= tol * scale):
                break
    return val, der, prim


# Dormand-Prince 5(4) tableau
DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
DP_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
DP_E = DP_B - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def _orr_rhs(y, a, b, s, al2):
    f = np.empty_like(y)
    f[0] = s * y[1]
    f[1] = s * y[2]
    f[2] = s * y[3]
    f[3] = ((2 * al2 + a) * s * s * y[2] - (al2 * al2 + a * al2 + b) * y[0]) / (s * s * s)
    return f


def _gs2(Y):
    """Two-column Gram-Schmidt with one re-orthogonalization pass."""
    y1, y2 = Y[:, 0], Y[:, 1]
    r11 = np.sqrt(np.sum(np.abs(y1) ** 2))
    q1 = y1 / r11
    r12 = np.vdot(q1, y2)
    v = y2 - r12 * q1
    d = np.vdot(q1, v)
    v = v - d * q1
    r12 = r12 + d
    r22 = np.sqrt(np.sum(np.abs(v) ** 2))
    Q = np.stack([q1, v / r22], axis=1)
    R = np.array([[r11, r12], [0.0, r22]], dtype=complex)
    return Q, R


def orr_dopri_sweep(h, a, b, s, al2, Y0):
    """Orthonormalized DOPRI5 sweep of a 2-dimensional solution subspace.

    The state is (phi, phi'/s, phi''/s^2, phi'''/s^3) for the homogeneous
    Orr-Sommerfeld equation written as phi'''' = 2 al2 phi'' - al2^2 phi
    + (a (phi'' - al2 phi) - b phi) with a = (U - c)/eps and b = U''/eps
    sampled at the six distinct DOPRI5 stage abscissae of every step
    (arrays of shape (n, 6)).  After each step the two columns are
    re-orthonormalized: Y_raw(k+1) = Q[k+1] R[k].  Returns (Q, R, errmax)
    with errmax the largest embedded error estimate relative to the
    (unit) column norms.
    """
    n = h.shape[0]
    Q = np.empty((n + 1, 4, 2), complex)
    R = np.empty((n, 2, 2), complex)
    Qc, R0 = _gs2(np.asarray(Y0, complex))
    Q[0] = Qc
    errmax = 0.0
    for k in range(n):
        hk = h[k]
        ks = []
        y = Q[k]
        for i in range(6):
            yi = y.copy()
            for j, aij in enumerate(DP_A[i]):
                yi = yi + hk * aij * ks[j]
            ks.append(_orr_rhs(yi, a[k, i], b[k, i], s, al2))
        ynew = y + hk * sum(DP_B[i] * ks[i] for i in range(6))
        ks.append(_orr_rhs(ynew, a[k, 5], b[k, 5], s, al2))
        err = hk * sum(DP_E[i] * ks[i] for i in range(7))
        e = float(np.sqrt(np.max(np.sum(np.abs(err) ** 2, axis=0))))
        errmax = max(errmax, e)
        Q[k + 1], R[k] = _gs2(ynew)
    return Q, R, errmax, R0


def chain_solve(R, m, c, direction):
    """Coefficients c_k away from index m through c_next = R[k]^{-1} c.

    direction -1: k = m-1, ..., 0 with c_k = R[k]^{-1} c_{k+1};
    direction +1: k = m, ..., n-1 with c_{k+1} = R[k]^{-1} c_k.
    Returns an (n+1, 2) array (zeros on the other side of m).
    """
    n = R.shape[0]
    out = np.zeros((n + 1, 2), complex)
    cur = np.asarray(c, complex).copy()
    out[m] = cur
    ks = range(m - 1, -1, -1) if direction < 0 else range(m, n)
    for k in ks:
        r = R[k]
        c1 = cur[1] / r[1, 1]
        c0 = (cur[0] - r[0, 1] * c1) / r[0, 0]
        cur = np.array([c0, c1])
        out[k if direction < 0 else k + 1] = cur
    return out
