# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled per-seed Newton kernel for the tripod-functional search.

Semantics mirror ``_kernels_py`` exactly (same residual, same finite
difference Jacobian, same two-halving damping rule, same domain kills);
only the execution strategy differs: each seed runs its own full Newton
loop in C instead of advancing a masked numpy batch.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs

cnp.import_array()

DEF MAXK = 4096
DEF EUCLIDEAN_KIND = 0
DEF SPHERE_KIND = 1
DEF HYPERBOLIC_KIND = 2

cdef double SPHERE_Z_MIN = 0.0009999998333333417  # sin(1e-3)
cdef double DISK_MAX = 0.97


cdef void _normalize_sphere(double* pt, double* vel) nogil:
    cdef double nrm = sqrt(pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2])
    cdef double dot
    cdef int d
    for d in range(3):
        pt[d] /= nrm
    dot = vel[0] * pt[0] + vel[1] * pt[1] + vel[2] * pt[2]
    for d in range(3):
        vel[d] = (vel[d] - dot * pt[d]) / nrm


cdef void _eval_curve(int kind, double[::1] a0, double[:, ::1] A, double[:, ::1] B,
                      double omega, double t, double* pt, double* vel) nogil:
    cdef int K = A.shape[0]
    cdef int dim = A.shape[1]
    cdef int k, d
    cdef double base = omega * t
    cdef double c1 = cos(base), s1 = sin(base)
    cdef double ck = 1.0, sk = 0.0, cn, sn, w
    for d in range(dim):
        pt[d] = a0[d]
        vel[d] = 0.0
    for k in range(K):
        cn = ck * c1 - sk * s1
        sn = sk * c1 + ck * s1
        ck = cn
        sk = sn
        w = (k + 1) * omega
        for d in range(dim):
            pt[d] += ck * A[k, d] + sk * B[k, d]
            vel[d] += w * (-sk * A[k, d] + ck * B[k, d])
    if kind == SPHERE_KIND:
        _normalize_sphere(pt, vel)


cdef void _sphere_frame(double* p, double* e1, double* e2) nogil:
    cdef double rx, ry, rz, n
    if fabs(p[2]) < 0.9:
        rx = 0.0; ry = 0.0; rz = 1.0
    else:
        rx = 1.0; ry = 0.0; rz = 0.0
    e1[0] = ry * p[2] - rz * p[1]
    e1[1] = rz * p[0] - rx * p[2]
    e1[2] = rx * p[1] - ry * p[0]
    n = sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2])
    e1[0] /= n; e1[1] /= n; e1[2] /= n
    e2[0] = p[1] * e1[2] - p[2] * e1[1]
    e2[1] = p[2] * e1[0] - p[0] * e1[2]
    e2[2] = p[0] * e1[1] - p[1] * e1[0]


cdef bint _alive(int kind, double* tuv, double* p, int dim) nogil:
    cdef int i
    for i in range(3):
        if tuv[i] != tuv[i]:
            return False
    for i in range(dim):
        if p[i] != p[i]:
            return False
    if kind == SPHERE_KIND:
        return p[2] > SPHERE_Z_MIN
    if kind == HYPERBOLIC_KIND:
        return sqrt(p[0] * p[0] + p[1] * p[1]) < DISK_MAX
    return True


cdef bint _residual(int kind, double[::1] a0, double[:, ::1] A, double[:, ::1] B,
                    double omega, double* tuv, double* p, double* e1, double* e2,
                    double* F) nogil:
    """F = chart gradient; returns False on singular data (coincident points)."""
    cdef double e[3]
    cdef double v[3]
    cdef double gp0 = 0.0, gp1 = 0.0, gp2 = 0.0
    cdef double diff0, diff1, r, c, s
    cdef double wre, wim, lam_p, zre, zim, vre, vim, ure, uim, n2, lam_z
    cdef int i
    if kind == EUCLIDEAN_KIND:
        for i in range(3):
            _eval_curve(kind, a0, A, B, omega, tuv[i], e, v)
            diff0 = p[0] - e[0]
            diff1 = p[1] - e[1]
            r = sqrt(diff0 * diff0 + diff1 * diff1)
            if r < 1e-300:
                return False
            F[i] = -(diff0 * v[0] + diff1 * v[1]) / r
            gp0 += diff0 / r
            gp1 += diff1 / r
        F[3] = gp0
        F[4] = gp1
        return True
    if kind == SPHERE_KIND:
        for i in range(3):
            _eval_curve(kind, a0, A, B, omega, tuv[i], e, v)
            c = e[0] * p[0] + e[1] * p[1] + e[2] * p[2]
            s = 1.0 - c * c
            if s < 1e-300:
                return False
            s = sqrt(s)
            F[i] = -(p[0] * v[0] + p[1] * v[1] + p[2] * v[2]) / s
            gp0 -= (e[0] - c * p[0]) / s
            gp1 -= (e[1] - c * p[1]) / s
            gp2 -= (e[2] - c * p[2]) / s
        F[3] = gp0 * e1[0] + gp1 * e1[1] + gp2 * e1[2]
        F[4] = gp0 * e2[0] + gp1 * e2[1] + gp2 * e2[2]
        return True
    # hyperbolic disk
    wre = p[0]
    wim = p[1]
    lam_p = 2.0 / (1.0 - (wre * wre + wim * wim))
    for i in range(3):
        _eval_curve(kind, a0, A, B, omega, tuv[i], e, v)
        zre = e[0]
        zim = e[1]
        lam_z = 2.0 / (1.0 - (zre * zre + zim * zim))
        # u_pz = (z - w) / (1 - conj(w) z), unit
        ure = zre - wre; uim = zim - wim
        vre = 1.0 - (wre * zre + wim * zim)
        vim = -(wre * zim - wim * zre)
        n2 = vre * vre + vim * vim
        if n2 < 1e-300:
            return False
        c = (ure * vre + uim * vim) / n2
        s = (uim * vre - ure * vim) / n2
        r = sqrt(c * c + s * s)
        if r < 1e-300:
            return False
        gp0 -= lam_p * c / r
        gp1 -= lam_p * s / r
        # u_zp = (w - z) / (1 - conj(z) w), unit
        ure = wre - zre; uim = wim - zim
        vre = 1.0 - (zre * wre + zim * wim)
        vim = -(zre * wim - zim * wre)
        n2 = vre * vre + vim * vim
        c = (ure * vre + uim * vim) / n2
        s = (uim * vre - ure * vim) / n2
        r = sqrt(c * c + s * s)
        if r < 1e-300:
            return False
        F[i] = -lam_z * ((c / r) * v[0] + (s / r) * v[1])
    F[3] = gp0
    F[4] = gp1
    return True


cdef void _apply_step(int kind, double* tuv, double* p, double* e1, double* e2,
                      double* delta, double scale,
                      double* tuv2, double* p2) nogil:
    cdef int i
    cdef double nrm
    for i in range(3):
        tuv2[i] = tuv[i] - scale * delta[i]
    if kind == SPHERE_KIND:
        for i in range(3):
            p2[i] = p[i] - scale * (delta[3] * e1[i] + delta[4] * e2[i])
        nrm = sqrt(p2[0] * p2[0] + p2[1] * p2[1] + p2[2] * p2[2])
        for i in range(3):
            p2[i] /= nrm
    else:
        p2[0] = p[0] - scale * delta[3]
        p2[1] = p[1] - scale * delta[4]


cdef bint _solve5(double* J, double* F, double* x) nogil:
    """Gaussian elimination with partial pivoting on the 5x5 system."""
    cdef double aug[5][6]
    cdef int i, j, k, piv
    cdef double best, tmp, factor
    for i in range(5):
        for j in range(5):
            aug[i][j] = J[i * 5 + j]
        aug[i][5] = F[i]
    for k in range(5):
        piv = k
        best = fabs(aug[k][k])
        for i in range(k + 1, 5):
            if fabs(aug[i][k]) > best:
                best = fabs(aug[i][k])
                piv = i
        if best < 1e-300:
            return False
        if piv != k:
            for j in range(6):
                tmp = aug[k][j]
                aug[k][j] = aug[piv][j]
                aug[piv][j] = tmp
        for i in range(k + 1, 5):
            factor = aug[i][k] / aug[k][k]
            for j in range(k, 6):
                aug[i][j] -= factor * aug[k][j]
    for k in range(4, -1, -1):
        tmp = aug[k][5]
        for j in range(k + 1, 5):
            tmp -= aug[k][j] * x[j]
        x[k] = tmp / aug[k][k]
    return True


cdef double _fmax5(double* F) nogil:
    cdef double m = fabs(F[0])
    cdef int i
    for i in range(1, 5):
        if fabs(F[i]) > m:
            m = fabs(F[i])
    return m


def residual(int kind, double[::1] a0, double[:, ::1] A, double[:, ::1] B,
             double omega, double[:, ::1] tuv, double[:, ::1] p):
    """Chart gradient for a batch of states (parity-test entry point)."""
    cdef int n = tuv.shape[0]
    cdef int dim = p.shape[1]
    out = np.empty((n, 5), dtype=np.float64)
    cdef double[:, ::1] out_v = out
    cdef double tuv_i[3]
    cdef double p_i[3]
    cdef double e1[3]
    cdef double e2[3]
    cdef double F[5]
    cdef int i, j
    for i in range(n):
        for j in range(3):
            tuv_i[j] = tuv[i, j]
        for j in range(dim):
            p_i[j] = p[i, j]
        if kind == SPHERE_KIND:
            _sphere_frame(p_i, e1, e2)
        if _residual(kind, a0, A, B, omega, tuv_i, p_i, e1, e2, F):
            for j in range(5):
                out_v[i, j] = F[j]
        else:
            for j in range(5):
                out_v[i, j] = float("nan")
    return out


def newton_refine(int kind, double[::1] a0, double[:, ::1] A, double[:, ::1] B,
                  double omega, double period, double[:, ::1] state,
                  double tol=1e-12, int max_iter=60, double fd_step=1e-6):
    """Per-seed damped Newton; returns (converged states, grad norms)."""
    cdef int n = state.shape[0]
    cdef int width = state.shape[1]
    cdef int dim = width - 3
    out = np.empty((n, width), dtype=np.float64)
    norms = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] out_v = out
    cdef double[::1] norms_v = norms
    cdef int kept = 0
    cdef double tuv[3]
    cdef double p[3]
    cdef double tuv2[3]
    cdef double p2[3]
    cdef double e1[3]
    cdef double e2[3]
    cdef double F[5]
    cdef double F2[5]
    cdef double Jm[25]
    cdef double delta[5]
    cdef double fnorm, f_new, scale, tmp
    cdef int i, j, k, it, h
    cdef bint ok, done

    with nogil:
        for i in range(n):
            for j in range(3):
                tuv[j] = state[i, j]
            for j in range(dim):
                p[j] = state[i, 3 + j]
            if not _alive(kind, tuv, p, dim):
                continue
            done = False
            fnorm = 1e308
            for it in range(max_iter):
                if kind == SPHERE_KIND:
                    _sphere_frame(p, e1, e2)
                if not _residual(kind, a0, A, B, omega, tuv, p, e1, e2, F):
                    break
                fnorm = _fmax5(F)
                if fnorm != fnorm:
                    break
                if fnorm < tol:
                    done = True
                    break
                ok = True
                for j in range(5):
                    for k in range(5):
                        delta[k] = 0.0
                    delta[j] = fd_step
                    _apply_step(kind, tuv, p, e1, e2, delta, -1.0, tuv2, p2)
                    if not _residual(kind, a0, A, B, omega, tuv2, p2, e1, e2, F2):
                        ok = False
                        break
                    for k in range(5):
                        Jm[k * 5 + j] = F2[k]
                    _apply_step(kind, tuv, p, e1, e2, delta, 1.0, tuv2, p2)
                    if not _residual(kind, a0, A, B, omega, tuv2, p2, e1, e2, F2):
                        ok = False
                        break
                    for k in range(5):
                        Jm[k * 5 + j] = (Jm[k * 5 + j] - F2[k]) / (2.0 * fd_step)
                if not ok:
                    break
                if not _solve5(Jm, F, delta):
                    break
                # damped update: halve the step (twice at most) where |F| worsens
                scale = 1.0
                _apply_step(kind, tuv, p, e1, e2, delta, scale, tuv2, p2)
                if _alive(kind, tuv2, p2, dim) and _residual(kind, a0, A, B, omega, tuv2, p2, e1, e2, F2):
                    f_new = _fmax5(F2)
                else:
                    f_new = 1e308
                for h in range(2):
                    if f_new <= fnorm:
                        break
                    scale *= 0.5
                    _apply_step(kind, tuv, p, e1, e2, delta, scale, tuv2, p2)
                    if _alive(kind, tuv2, p2, dim) and _residual(kind, a0, A, B, omega, tuv2, p2, e1, e2, F2):
                        f_new = _fmax5(F2)
                    else:
                        f_new = 1e308
                if f_new >= 1e308:
                    break
                for j in range(3):
                    tuv[j] = tuv2[j]
                for j in range(dim):
                    p[j] = p2[j]
            if done:
                # canonical form: feet sorted modulo the period
                for j in range(3):
                    tuv[j] = tuv[j] - period * <long long>(tuv[j] / period)
                    if tuv[j] < 0:
                        tuv[j] += period
                for j in range(2):
                    for k in range(2 - j):
                        if tuv[k] > tuv[k + 1]:
                            tmp = tuv[k]
                            tuv[k] = tuv[k + 1]
                            tuv[k + 1] = tmp
                for j in range(3):
                    out_v[kept, j] = tuv[j]
                for j in range(dim):
                    out_v[kept, 3 + j] = p[j]
                norms_v[kept] = fnorm
                kept += 1
    return out[:kept].copy(), norms[:kept].copy()
