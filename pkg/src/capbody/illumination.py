"""Illumination of cap bodies through separation of caps by hemispheres.

Direction ``u`` illuminates vertex ``v`` exactly when the open hemisphere
centred at the pole ``w = -u`` contains the whole cap of ``v``, i.e.
``<w, c> > sin r``.  A direction set illuminates the body when every cap is
separated in this way and the hemispheres around all poles cover the sphere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .caps import Cap, CapBody, Packing
from .errors import InvalidInputError, VertexInsideBall
from .sphere import DEFAULT_TOL, Tolerance, Verdict, angular_distance


@dataclass(frozen=True, eq=False)
class DirectionSet:
    directions: np.ndarray

    def __post_init__(self):
        u = np.array(self.directions, dtype=float) + 0.0  # no negative zeros in output
        if u.ndim != 2 or len(u) == 0:
            raise InvalidInputError("a direction set needs at least one direction")
        if np.any(np.abs(np.linalg.norm(u, axis=1) - 1.0) > 1e-9):
            raise InvalidInputError("directions must be unit vectors")
        u.flags.writeable = False
        object.__setattr__(self, "directions", u)

    def __len__(self):
        return len(self.directions)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def poles(self) -> np.ndarray:
        return -self.directions

    def to_json(self) -> dict:
        return {"directions": self.directions.tolist()}

    @classmethod
    def from_json(cls, data) -> "DirectionSet":
        if isinstance(data, dict):
            data = data.get("directions")
        if data is None:
            raise InvalidInputError("no 'directions' entry")
        return cls(np.asarray(data, dtype=float))


@dataclass(frozen=True, eq=False)
class CoverResult:
    covered: bool
    margin: float
    witness: Optional[np.ndarray]
    undecided: bool

    def __bool__(self):
        return self.covered


@dataclass(eq=False)
class IlluminationCertificate:
    """Outcome of checking a direction set against a cap body.

    ``assignment[i]`` is the index of the direction whose opposite hemisphere
    best separates cap ``i`` and ``margins[i]`` is that separation margin
    ``<-u, c_i> - sin r_i``.  ``cover_margin`` is the smallest, over unit
    ``x``, of the largest ``<x, -u_j>``; positive exactly when the
    hemispheres cover the sphere.
    """

    assignment: list
    margins: list
    cover_ok: bool
    cover_margin: float
    failure: Optional[str] = None
    worst_cap: Optional[int] = None
    witness: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def valid(self) -> bool:
        return self.failure is None

    def __bool__(self):
        return self.valid

    @property
    def decisive_margin(self) -> float:
        """Smallest margin that the verdict depends on."""
        return min([self.cover_margin, *self.margins])

    def to_json(self) -> dict:
        out = {
            "assignment": [int(j) for j in self.assignment],
            "margins": [float(m) for m in self.margins],
            "cover_ok": bool(self.cover_ok),
            "cover_margin": float(self.cover_margin),
            "valid": self.valid,
        }
        if self.failure is not None:
            out["failure"] = self.failure
            if self.worst_cap is not None:
                out["worst_cap"] = int(self.worst_cap)
            if self.witness is not None:
                out["witness"] = [float(x) for x in self.witness]
        return out


def illuminates_vertex(v, u, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Direction ``u`` illuminates vertex ``v`` iff ``<v, u> < -sqrt(|v|^2 - 1)``."""
    v = np.asarray(v, dtype=float)
    n2 = float(v @ v)
    if n2 <= 1.0:
        raise VertexInsideBall(f"vertex {v.tolist()} is not outside the unit ball")
    return Verdict.from_margin(-math.sqrt(n2 - 1.0) - float(np.dot(v, u)), tol)


def illuminates_sphere_point(p, u, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    return Verdict.from_margin(-float(np.dot(p, u)), tol)


def hemisphere_separates(cap: Cap, pole, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Does the open hemisphere centred at ``pole`` contain the closed cap?"""
    return Verdict.from_margin(float(np.dot(pole, cap.center)) - math.sin(cap.radius), tol)


def greatsphere_separates(cap: Cap, normal, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Does the greatsphere with this normal miss the closed cap?"""
    return Verdict.from_margin(abs(float(np.dot(normal, cap.center))) - math.sin(cap.radius), tol)


def pair_separable_by_one_hemisphere(c1: Cap, c2: Cap, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a single open hemisphere can contain both closed caps."""
    return angular_distance(c1.center, c2.center) < math.pi - c1.radius - c2.radius - tol.strict


def _cover_candidates(W: np.ndarray) -> np.ndarray:
    """Unit vectors among which min_x max_j <x, w_j> is attained.

    Nearest-point directions of every face (origin outside the hull), facet
    normals (origin inside), and the orthogonal complement of span(W)
    (degenerate hulls).
    """
    m, d = W.shape
    cands = [-W]
    for s in range(2, min(d, m) + 1):
        idx = np.array(list(itertools.combinations(range(m), s)))
        base = W[idx[:, 0]]
        B = np.transpose(W[idx[:, 1:]] - base[:, None, :], (0, 2, 1))
        proj = base - np.einsum("kij,kj->ki", B, np.einsum("kij,kj->ki", np.linalg.pinv(B), base))
        cands.append(-proj)
        if s == d:
            n = np.linalg.svd(np.transpose(B, (0, 2, 1)))[2][:, -1, :]
            cands.extend([n, -n])
    _, sv, vt = np.linalg.svd(W)
    rank = int(np.sum(sv > 1e-12 * max(1.0, sv[0]))) if len(sv) else 0
    if rank < d:
        null = vt[rank:]
        cands.extend([null, -null])
    C = np.vstack(cands)
    norms = np.linalg.norm(C, axis=1)
    C = C[norms > 1e-12]
    return C / np.linalg.norm(C, axis=1)[:, None]


def hemispheres_cover(poles, tol: Tolerance = DEFAULT_TOL) -> CoverResult:
    """Do the open hemispheres centred at ``poles`` cover the whole sphere?

    Equivalent to the origin lying in the interior of conv(poles).  The
    margin is ``min over unit x of max_j <x, w_j>``: the distance from the
    origin to the hull boundary when inside, minus the distance to the hull
    when outside.  On failure the witness ``x`` satisfies ``<x, w_j> <= margin``
    for every pole, so it is a direction no hemisphere covers.
    """
    W = np.atleast_2d(np.asarray(poles, dtype=float))
    if W.size == 0:
        raise InvalidInputError("need at least one pole")
    C = _cover_candidates(W)
    h = np.max(C @ W.T, axis=1)
    k = int(np.argmin(h))
    margin = float(h[k])
    covered = margin >= tol.strict
    return CoverResult(covered, margin, None if covered else C[k].copy(), abs(margin) < tol.band)


def _as_packing(body: CapBody | Packing, tol: Tolerance) -> Packing:
    if isinstance(body, CapBody):
        return body.caps(tol)
    return body


def separation_margins(packing: Packing, dirs: DirectionSet) -> np.ndarray:
    """``M[i, j] = <-u_j, c_i> - sin r_i``."""
    if len(packing) == 0:
        return np.zeros((0, len(dirs)))
    return packing.centers @ dirs.poles.T - np.sin(packing.radii)[:, None]


def verify_illumination(
    body: CapBody | Packing, dirs: DirectionSet | Sequence, tol: Tolerance = DEFAULT_TOL
) -> IlluminationCertificate:
    """Check the hemisphere-separation criterion for a direction set.

    Every cap must lie inside the open hemisphere opposite some direction and
    those hemispheres must cover the sphere.  The returned certificate is
    invalid when either condition fails; ``failure`` says which, naming the
    worst-margin cap or an uncovered direction.
    """
    if not isinstance(dirs, DirectionSet):
        dirs = DirectionSet(np.asarray(dirs, dtype=float))
    packing = _as_packing(body, tol)
    if dirs.dim != packing.dim:
        raise InvalidInputError(f"directions have dimension {dirs.dim}, body has {packing.dim}")
    M = separation_margins(packing, dirs)
    assignment = np.argmax(M, axis=1) if len(M) else np.zeros(0, dtype=int)
    margins = M[np.arange(len(M)), assignment] if len(M) else np.zeros(0)
    cover = hemispheres_cover(dirs.poles, tol)
    cert = IlluminationCertificate(
        assignment=[int(j) for j in assignment],
        margins=[float(m) for m in margins],
        cover_ok=cover.covered,
        cover_margin=cover.margin,
    )
    if len(margins) and margins.min() < tol.strict:
        cert.failure = "separation"
        cert.worst_cap = int(np.argmin(margins))
    elif not cover.covered:
        cert.failure = "cover"
        cert.witness = cover.witness
    return cert
