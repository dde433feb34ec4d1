# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, acos, sin, cos, fabs, M_PI, INFINITY

cnp.import_array()


cdef inline double _dot(const double[:, ::1] a, Py_ssize_t i, const double[:, ::1] b, Py_ssize_t j, Py_ssize_t d) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(d):
        s += a[i, k] * b[j, k]
    return s


def radial_function(dirs, vertices):
    cdef const double[:, ::1] X = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef const double[:, ::1] V = np.ascontiguousarray(vertices, dtype=np.float64).reshape(-1, X.shape[1])
    cdef Py_ssize_t n = X.shape[0], m = V.shape[0], d = X.shape[1]
    out = np.ones(n)
    cdef double[::1] rho = out
    cdef Py_ssize_t i, j, k
    cdef double a, L2, p2, t, r
    with nogil:
        for i in range(n):
            for j in range(m):
                a = _dot(X, i, V, j, d)
                if a <= 1.0:
                    continue
                L2 = 0.0
                p2 = 0.0
                for k in range(d):
                    L2 += V[j, k] * V[j, k]
                    t = V[j, k] - a * X[i, k]
                    p2 += t * t
                r = L2 / (a + sqrt((L2 - 1.0) * p2))
                if r > rho[i]:
                    rho[i] = r
    return out


cdef inline double _margin(const double* q, const double[:, ::1] H, const double[::1] Ls, const double[::1] K,
                          Py_ssize_t m, Py_ssize_t d) nogil:
    # H holds unit vertex directions, Ls the norms and K = 1/sqrt(L^2 - 1)
    cdef double qq = 0.0, best, alpha, beta2, t, s, L, g
    cdef Py_ssize_t j, k
    for k in range(d):
        qq += q[k] * q[k]
    best = sqrt(qq) - 1.0
    for j in range(m):
        L = Ls[j]
        alpha = 0.0
        for k in range(d):
            alpha += q[k] * H[j, k]
        beta2 = 0.0
        for k in range(d):
            t = q[k] - alpha * H[j, k]
            beta2 += t * t
        s = alpha - sqrt(beta2) * K[j]
        if s < 0.0:
            s = 0.0
        elif s > L:
            s = L
        g = sqrt((alpha - s) * (alpha - s) + beta2) + s / L - 1.0
        if g < best:
            best = g
    return best


def _prepare(vertices, Py_ssize_t d):
    V = np.ascontiguousarray(vertices, dtype=np.float64).reshape(-1, d)
    Ls = np.linalg.norm(V, axis=1)
    H = np.ascontiguousarray(V / Ls[:, None]) if len(V) else V
    return H, Ls, 1.0 / np.sqrt(Ls * Ls - 1.0)


def membership_margin(points, vertices):
    cdef const double[:, ::1] Q = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = Q.shape[0], d = Q.shape[1]
    H_, Ls_, K_ = _prepare(vertices, d)
    cdef const double[:, ::1] H = H_
    cdef const double[::1] Ls = Ls_, K = K_
    cdef Py_ssize_t m = H.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _margin(&Q[i, 0], H, Ls, K, m, d)
    return out


def illumination_scan(points, dirs, eps, vertices, double strict):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], d = P.shape[1]
    cdef const double[:, ::1] U = np.ascontiguousarray(dirs, dtype=np.float64).reshape(-1, d)
    cdef const double[::1] E = np.ascontiguousarray(eps, dtype=np.float64)
    H_, Ls_, K_ = _prepare(vertices, d)
    cdef const double[:, ::1] H = H_
    cdef const double[::1] Ls = Ls_, K = K_
    cdef Py_ssize_t m = H.shape[0], nu = U.shape[0], ne = E.shape[0]
    lit_arr = np.zeros(n, dtype=np.uint8)
    best_arr = np.full(n, np.inf)
    cdef unsigned char[::1] lit = lit_arr
    cdef double[::1] best = best_arr
    cdef double q[16]
    cdef Py_ssize_t i, j, e, k
    cdef double mg, rate
    if d > 16:
        raise ValueError("dimension too large")
    with nogil:
        for i in range(n):
            for j in range(nu):
                for e in range(ne):
                    for k in range(d):
                        q[k] = P[i, k] + E[e] * U[j, k]
                    mg = _margin(q, H, Ls, K, m, d)
                    rate = mg / E[e]
                    if mg <= -strict:
                        lit[i] = 1
                    if rate < best[i]:
                        best[i] = rate
    return lit_arr.astype(bool), best_arr


def scan_four_two_tangent(double h, double theta):
    cdef Py_ssize_t nx = <Py_ssize_t>(1.0 / h + 0.5), a, b, k = 1
    cdef double r2 = sqrt(2.0), r0, s, c, cp, x1, x2, sq
    cdef long long full_n = 0, sub_n = 0, above = 0, nsub, nfull
    cdef double full_max = -1.0, sub_max = -1.0
    with nogil:
        while k * h < M_PI / 2:
            r0 = k * h
            s = sin(r0)
            c = cos(r0)
            cp = cos(r0 + M_PI / 4)
            nsub = 0
            nfull = 0
            for a in range(nx + 1):
                x1 = a * h
                if not (x1 > s):
                    continue
                for b in range(nx + 1):
                    x2 = b * h
                    sq = x1 * x1 + x2 * x2
                    if (x1 + x2) / r2 <= cp and sq <= 1.0:
                        nsub += 1
                        if (x1 + x2) / r2 <= s and fabs(x1 - x2) / r2 <= s and sq >= 1.0 - 2.0 * s * s:
                            nfull += 1
            if nsub:
                sub_n += nsub
                sub_max = r0
                if r0 >= theta:
                    above += nsub
            if nfull:
                full_n += nfull
                full_max = r0
            k += 1
    return int(full_n), float(full_max), int(sub_n), float(sub_max), int(above)


def scan_eight_three_tangent(double h, double theta):
    cdef Py_ssize_t nx = <Py_ssize_t>(1.0 / h + 0.5), b, k = 1, i3, i4
    cdef double r2 = sqrt(2.0), r0, s, c, x1, x2, x3, x4, rad
    cdef long long full_n = 0, br_n = 0, above = 0, nb
    cdef double full_max = -1.0, br_max = -1.0
    with nogil:
        while k * h < M_PI / 2:
            r0 = k * h
            s = sin(r0)
            c = cos(r0)
            if r2 * c - 2.0 * s > 0.0:
                for b in range(nx + 1):
                    x2 = b * h
                    if not (x2 == 0.0 or x2 >= s):
                        continue
                    for i3 in range(2):
                        x3 = s * i3
                        for i4 in range(2):
                            x4 = s * i4
                            rad = 1.0 - x2 * x2 - x3 * x3 - x4 * x4
                            if rad < 0.0:
                                continue
                            x1 = sqrt(rad)
                            if x1 > s and x1 + x2 + x3 <= r2 * c - s and x1 + x2 <= r2 * s:
                                full_n += 1
                                full_max = r0
            nb = 0
            for b in range(nx + 1):
                x1 = b * h
                if x1 > s and x1 + 2.0 * s <= r2 * c:
                    nb += 1
            if nb:
                br_n += nb
                br_max = r0
                if r0 >= theta:
                    above += nb
            k += 1
    return int(full_n), float(full_max), int(br_n), float(br_max), int(above)
