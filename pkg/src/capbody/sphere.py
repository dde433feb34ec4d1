"""Primitives on the unit sphere S^{d-1}.

Vectors are plain ``numpy`` arrays; coordinate indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Comparison thresholds shared by every geometric predicate.

    unit
        allowed deviation of ``|x|`` from 1 for unit vectors.
    strict
        margin needed before a strict inequality counts as satisfied.
    band
        half-width of the undecided band around a decision boundary.
    """

    unit: float = 1e-12
    strict: float = 1e-9
    band: float = 1e-6

    def __post_init__(self):
        if not (0 < self.unit < self.strict < self.band < 1e-3):
            raise ValueError(
                f"need 0 < unit < strict < band < 1e-3, got {self.unit}, {self.strict}, {self.band}"
            )


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Verdict:
    """Outcome of a thresholded predicate.

    Truthiness follows the strict-margin rule; ``undecided`` flags margins
    that sit inside the tolerance band, where callers should not trust the
    answer either way.
    """

    value: bool
    margin: float
    undecided: bool

    def __bool__(self):
        return self.value

    @classmethod
    def from_margin(cls, margin: float, tol: Tolerance = DEFAULT_TOL) -> "Verdict":
        margin = float(margin)
        return cls(margin >= tol.strict, margin, abs(margin) < tol.band)


def unit(v, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Return ``v`` as a float array after checking it is a unit vector."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a 1-d vector")
    if abs(np.linalg.norm(v) - 1.0) > max(tol.unit, 8 * np.finfo(float).eps * v.size):
        raise ValueError(f"not a unit vector (norm {np.linalg.norm(v)!r})")
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise ValueError("cannot normalize the zero vector")
    return v / n


def basis_vector(i: int, dim: int) -> np.ndarray:
    e = np.zeros(dim)
    e[i] = 1.0
    return e


def angular_distance(a, b) -> float:
    """Spherical distance between unit vectors, in ``[0, pi]``."""
    c = float(np.dot(a, b))
    return float(np.arccos(min(1.0, max(-1.0, c))))


def plane_rotation(i: int, j: int, angle: float, dim: int) -> np.ndarray:
    """Rotation by ``angle`` in the (e_i, e_j) coordinate plane, taking e_i towards e_j."""
    if i == j:
        raise ValueError("rotation plane needs two distinct axes")
    R = np.eye(dim)
    c, s = np.cos(angle), np.sin(angle)
    R[i, i] = c
    R[j, j] = c
    R[j, i] = s
    R[i, j] = -s
    return R


def rotation_about_axis(axis: int, angle: float, dim: int = 3) -> np.ndarray:
    """Right-handed rotation of R^3 about coordinate ``axis``.

    ``rotation_about_axis(2, pi/2) @ e0 == e1``.
    """
    if dim != 3:
        raise ValueError("rotation about an axis is only defined in 3 dimensions; use plane_rotation")
    return plane_rotation((axis + 1) % 3, (axis + 2) % 3, angle, 3)


def _planar(a: np.ndarray, w: np.ndarray, angle: float) -> np.ndarray:
    # rotation in span(a, w) for orthonormal a, w
    d = a.size
    s, c = np.sin(angle), np.cos(angle)
    return (
        np.eye(d)
        + s * (np.outer(w, a) - np.outer(a, w))
        + (c - 1.0) * (np.outer(a, a) + np.outer(w, w))
    )


def rotation_taking(a, b, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Rotation matrix ``R`` (det +1) with ``R @ a == b``, acting in span(a, b).

    For antipodal ``a, b`` the plane is spanned by ``a`` and the
    lowest-index coordinate axis not parallel to ``a``.
    """
    a = unit(a, tol)
    b = unit(b, tol)
    c = float(np.dot(a, b))
    w = b - c * a
    nw = np.linalg.norm(w)
    if nw > 1e-9:
        return _planar(a, w / nw, float(np.arctan2(nw, c)))
    if c > 0:
        return np.eye(a.size)
    for k in range(a.size):
        if abs(a[k]) < 1.0 - 1e-6:
            w = -a[k] * a
            w[k] += 1.0
            return _planar(a, w / np.linalg.norm(w), np.pi)
    raise AssertionError("unreachable: a unit vector is parallel to at most one axis")


def reflect_coordinate(v, i: int) -> np.ndarray:
    """Reflect in the coordinate hyperplane x_i = 0."""
    out = np.array(v, dtype=float)
    out[i] = -out[i]
    return out


def is_rotation(R, tol: float = 1e-9) -> bool:
    R = np.asarray(R, dtype=float)
    return bool(
        np.allclose(R @ R.T, np.eye(R.shape[0]), atol=tol) and abs(np.linalg.det(R) - 1.0) < tol
    )
