"""Spherical caps, cap packings and cap bodies.

A vertex ``v`` outside the unit ball corresponds to the cap
``{p in S^{d-1} : <p, v> >= 1}`` with centre ``v/|v|`` and spherical radius
``arccos(1/|v|)``.  Distinct vertices of a cap body give caps with disjoint
interiors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidInputError, InvalidPacking, PointInsideCap, VertexInsideBall
from .sphere import DEFAULT_TOL, Tolerance, angular_distance, unit


@dataclass(frozen=True, eq=False)
class Cap:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = unit(self.center)
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "center", c)
        r = float(self.radius)
        if not (0.0 < r < math.pi / 2):
            raise InvalidInputError(
                f"cap radius must lie in (0, pi/2), got {r!r}; a radius of pi/2 is a hemisphere"
            )
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size

    def __repr__(self):
        return f"Cap(center={self.center.tolist()}, radius={self.radius!r})"

    def to_json(self) -> dict:
        return {"center": [float(x) for x in self.center], "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Packing:
    dim: int
    caps: tuple = ()

    def __post_init__(self):
        caps = tuple(self.caps)
        for c in caps:
            if c.dim != self.dim:
                raise InvalidInputError(f"cap of dimension {c.dim} in a packing of dimension {self.dim}")
        object.__setattr__(self, "caps", caps)

    def __len__(self):
        return len(self.caps)

    def __iter__(self):
        return iter(self.caps)

    @property
    def centers(self) -> np.ndarray:
        if not self.caps:
            return np.zeros((0, self.dim))
        return np.array([c.center for c in self.caps])

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.caps], dtype=float)

    @classmethod
    def from_arrays(cls, centers, radii) -> "Packing":
        centers = np.asarray(centers, dtype=float)
        return cls(centers.shape[1], tuple(Cap(c, r) for c, r in zip(centers, radii)))

    def to_json(self) -> dict:
        return {"dim": self.dim, "caps": [c.to_json() for c in self.caps]}

    @classmethod
    def from_json(cls, data: dict) -> "Packing":
        try:
            dim = int(data["dim"])
            caps = tuple(Cap(np.asarray(c["center"], dtype=float), float(c["radius"])) for c in data["caps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed packing JSON: {exc}") from exc
        return cls(dim, caps)


@dataclass(frozen=True, eq=False)
class CapBody:
    """conv(B^d u {v_i}) for finitely many vertices outside the unit ball."""

    dim: int
    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, self.dim)
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def caps(self, tol: Tolerance = DEFAULT_TOL) -> Packing:
        return Packing(self.dim, tuple(cap_from_vertex(v, tol) for v in self.vertices))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Raise unless every vertex is outside the ball and the induced caps pack."""
        violation = validate_packing(self.caps(tol).caps, tol)
        if violation is not None:
            raise InvalidPacking(f"vertices {violation.i} and {violation.j} overlap by {violation.overlap:.3e}")

    @classmethod
    def from_packing(cls, packing: Packing) -> "CapBody":
        return cls(packing.dim, np.array([vertex_from_cap(c) for c in packing.caps]).reshape(-1, packing.dim))

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "CapBody":
        try:
            return cls(int(data["dim"]), np.asarray(data["vertices"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed cap body JSON: {exc}") from exc


@dataclass(frozen=True)
class KTangentProfile:
    """Axes a k-tangent cap is tangent to, and axes its centre lies on."""

    tangent_axes: frozenset
    centered_axes: frozenset

    @property
    def k(self) -> int:
        return len(self.tangent_axes)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    overlap: float


def cap_from_vertex(v, tol: Tolerance = DEFAULT_TOL) -> Cap:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n <= 1.0 + tol.strict:
        raise VertexInsideBall(f"vertex {v.tolist()} has norm {n!r} <= 1")
    return Cap(v / n, math.acos(1.0 / n))


def vertex_from_cap(cap: Cap) -> np.ndarray:
    return cap.center / math.cos(cap.radius)


def packing_overlaps(centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Matrix of ``<c_i, c_j> - cos(r_i + r_j)``; positive entries overlap."""
    G = centers @ centers.T
    return G - np.cos(radii[:, None] + radii[None, :])


def validate_packing(caps: Sequence[Cap] | Packing, tol: Tolerance = DEFAULT_TOL) -> Optional[Violation]:
    """Return ``None`` if the caps pack, else the worst overlapping pair."""
    caps = list(caps)
    if len(caps) < 2:
        return None
    centers = np.array([c.center for c in caps])
    radii = np.array([c.radius for c in caps])
    over = packing_overlaps(centers, radii)
    np.fill_diagonal(over, -np.inf)
    i, j = np.unravel_index(int(np.argmax(over)), over.shape)
    worst = float(over[i, j])
    if worst <= tol.strict:
        return None
    i, j = sorted((int(i), int(j)))
    return Violation(i, j, worst)


def _match_multiset(src: np.ndarray, dst: np.ndarray, tol: float) -> bool:
    """True if rows of ``src`` can be paired one-to-one with rows of ``dst``."""
    if src.shape != dst.shape:
        return False
    used = np.zeros(len(dst), dtype=bool)
    for row in src:
        d = np.max(np.abs(dst - row), axis=1)
        d[used] = np.inf
        k = int(np.argmin(d)) if len(d) else -1
        if k < 0 or d[k] > tol:
            return False
        used[k] = True
    return True


def _rows(p: Packing) -> np.ndarray:
    return np.column_stack([p.centers, p.radii]) if len(p) else np.zeros((0, p.dim + 1))


def is_centrally_symmetric(p: Packing, tol: Tolerance = DEFAULT_TOL) -> bool:
    rows = _rows(p)
    image = rows.copy()
    image[:, :-1] *= -1
    return _match_multiset(image, rows, tol.band)


def is_unconditional(p: Packing, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Invariance of the cap multiset under every coordinate reflection."""
    rows = _rows(p)
    for i in range(p.dim):
        image = rows.copy()
        image[:, i] *= -1
        if not _match_multiset(image, rows, tol.band):
            return False
    return True


def k_tangent_radius(k: int, dim: int | None = None) -> float:
    if k < 2 or (dim is not None and k > dim):
        raise ValueError(f"k-tangent caps need 2 <= k <= d, got k={k}, d={dim}")
    return math.asin(1.0 / math.sqrt(k))


def classify_k_tangent(cap: Cap, dim: int | None = None, tol: Tolerance = DEFAULT_TOL) -> Optional[KTangentProfile]:
    """k-tangency profile of ``cap``, or ``None`` if it is not k-tangent for any k >= 2."""
    d = cap.dim if dim is None else dim
    x = np.abs(cap.center)
    s = math.sin(cap.radius)
    tangent = frozenset(int(i) for i in np.flatnonzero(np.abs(x - s) <= tol.band))
    centered = frozenset(int(i) for i in np.flatnonzero(x <= tol.band))
    if tangent & centered or len(tangent) + len(centered) != d:
        return None
    k = len(tangent)
    if k < 2 or abs(cap.radius - k_tangent_radius(k)) > tol.band:
        return None
    return KTangentProfile(tangent, centered)


def ktangent_sets_compatible(k1: int, k2: int, d: int) -> bool:
    """Necessary condition for a k1-tangent and a k2-tangent family to pack.

    Evaluates ``k1 + k2 - d <= sqrt((k1-1)(k2-1)) - 1`` in integer arithmetic.
    """
    for k in (k1, k2):
        if not 2 <= k <= d:
            raise ValueError(f"need 2 <= k <= d, got k={k}, d={d}")
    lhs = k1 + k2 - d + 1
    return lhs <= 0 or lhs * lhs <= (k1 - 1) * (k2 - 1)


def tangent_families_disjoint(profiles: Iterable[KTangentProfile]) -> bool:
    """Two 2-tangent families can only coexist when their tangent axes do not overlap."""
    profiles = list(profiles)
    for a, b in itertools.combinations(profiles, 2):
        if a.tangent_axes & b.tangent_axes:
            return False
    return True


def view_angle_sin(cap: Cap, p, tol: Tolerance = DEFAULT_TOL) -> float:
    """sin of half the angle between the two great circles through ``p`` tangent to ``cap``."""
    dist = angular_distance(p, cap.center)
    if dist <= cap.radius + tol.strict:
        raise PointInsideCap(f"point at distance {dist!r} lies in a cap of radius {cap.radius!r}")
    return math.sin(cap.radius) / math.sin(dist)
