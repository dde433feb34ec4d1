"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``CAPBODY_PURE_PYTHON`` is set.
"""

import math

import numpy as np

_CHUNK = 4096


def radial_function(dirs, vertices):
    dirs = np.ascontiguousarray(dirs, dtype=np.float64)
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    rho = np.ones(len(dirs))
    for v in vertices:
        L2 = float(v @ v)
        a = dirs @ v
        perp = v[None, :] - a[:, None] * dirs
        p2 = np.einsum("ij,ij->i", perp, perp)
        inside = a > 1.0
        r = np.ones_like(a)
        r[inside] = L2 / (a[inside] + np.sqrt((L2 - 1.0) * p2[inside]))
        np.maximum(rho, r, out=rho)
    return rho


def _margin_block(q, vertices):
    out = np.linalg.norm(q, axis=1) - 1.0
    for v in vertices:
        L = math.sqrt(float(v @ v))
        vh = v / L
        alpha = q @ vh
        perp = q - alpha[:, None] * vh[None, :]
        beta = np.sqrt(np.einsum("ij,ij->i", perp, perp))
        s = np.clip(alpha - beta / math.sqrt(L * L - 1.0), 0.0, L)
        g = np.hypot(alpha - s, beta) + s / L - 1.0
        np.minimum(out, g, out=out)
    return out


def membership_margin(points, vertices):
    points = np.ascontiguousarray(points, dtype=np.float64)
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    out = np.empty(len(points))
    for k in range(0, len(points), _CHUNK):
        out[k:k + _CHUNK] = _margin_block(points[k:k + _CHUNK], vertices)
    return out


def illumination_scan(points, dirs, eps, vertices, strict):
    points = np.ascontiguousarray(points, dtype=np.float64)
    dirs = np.ascontiguousarray(dirs, dtype=np.float64)
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    n = len(points)
    lit = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    for u in dirs:
        for e in eps:
            m = membership_margin(points + e * u, vertices)
            np.minimum(best, m / e, out=best)
            lit |= m <= -strict
    return lit, best


def cap_gap(points, centers, radii):
    points = np.ascontiguousarray(points, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    out = np.empty(len(points))
    for k in range(0, len(points), _CHUNK):
        ip = np.clip(points[k:k + _CHUNK] @ centers.T, -1.0, 1.0)
        out[k:k + _CHUNK] = np.min(np.arccos(ip) - radii[None, :], axis=1)
    return out


def scan_four_two_tangent(h, theta):
    """Grid scan of the constraint system for a cap next to four 2-tangent caps.

    Returns (full_feasible, full_max_r0, sub_feasible, sub_max_r0, sub_at_or_above_theta).
    """
    nx = int(round(1.0 / h))
    xs = np.arange(nx + 1) * h
    x1, x2 = np.meshgrid(xs, xs, indexing="ij")
    sq = x1 * x1 + x2 * x2
    sum12 = x1 + x2
    diff12 = np.abs(x1 - x2)
    r2 = math.sqrt(2.0)
    full_n = sub_n = above = 0
    full_max = sub_max = -1.0
    k = 1
    while k * h < math.pi / 2:
        r0 = k * h
        s, c = math.sin(r0), math.cos(r0)
        pack = sum12 / r2 <= math.cos(r0 + math.pi / 4)
        sub = (x1 > s) & pack & (sq <= 1.0)
        ns = int(np.count_nonzero(sub))
        if ns:
            sub_n += ns
            sub_max = r0
            if r0 >= theta:
                above += ns
        full = sub & (sum12 / r2 <= s) & (diff12 / r2 <= s) & (sq >= 1.0 - 2.0 * s * s)
        nf = int(np.count_nonzero(full))
        if nf:
            full_n += nf
            full_max = r0
        k += 1
    return full_n, full_max, sub_n, sub_max, above


def scan_eight_three_tangent(h, theta):
    """Grid scan of the constraint system for a cap next to eight 3-tangent caps.

    Returns (full_feasible, full_max_r0, branch_feasible, branch_max_r0, branch_at_or_above_theta);
    the branch is the x3 = sin r0, x2 = 0 sub-case bounded by ``theta``.
    """
    nx = int(round(1.0 / h))
    xs = np.arange(nx + 1) * h
    r2 = math.sqrt(2.0)
    full_n = br_n = above = 0
    full_max = br_max = -1.0
    k = 1
    while k * h < math.pi / 2:
        r0 = k * h
        s, c = math.sin(r0), math.cos(r0)
        if r2 * c - 2.0 * s > 0.0:
            x2ok = (xs == 0.0) | (xs >= s)
            for x3 in (0.0, s):
                for x4 in (0.0, s):
                    rad = 1.0 - xs * xs - x3 * x3 - x4 * x4
                    x1 = np.sqrt(np.where(rad >= 0.0, rad, 0.0))
                    ok = (
                        (rad >= 0.0)
                        & x2ok
                        & (x1 > s)
                        & (x1 + xs + x3 <= r2 * c - s)
                        & (x1 + xs <= r2 * s)
                    )
                    nf = int(np.count_nonzero(ok))
                    if nf:
                        full_n += nf
                        full_max = r0
        br = (xs > s) & (xs + 2.0 * s <= r2 * c)
        nb = int(np.count_nonzero(br))
        if nb:
            br_n += nb
            br_max = r0
            if r0 >= theta:
                above += nb
        k += 1
    return full_n, full_max, br_n, br_max, above
