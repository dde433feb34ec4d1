"""Six illumination directions for centrally symmetric cap packings on S^2.

The largest cap is rotated to the north pole.  If the three coordinate
great circles miss every cap, the six axis directions work.  Otherwise every
cap touching all three circles has radius pi/4 and sits on the equator, and
turning the frame about the pole until a meridian runs through such a cap
separates everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caps import Cap, Packing, is_centrally_symmetric, validate_packing, view_angle_sin
from .errors import InternalContradiction, InvalidInputError, InvalidPacking, NotCentrallySymmetric
from .illumination import DirectionSet, IlluminationCertificate, greatsphere_separates, verify_illumination
from .sphere import DEFAULT_TOL, Tolerance, angular_distance, rotation_about_axis, rotation_taking

E3 = np.array([0.0, 0.0, 1.0])


@dataclass(eq=False)
class Solution3D:
    rotation: np.ndarray  # maps the input frame to the normalised frame
    directions: DirectionSet
    certificate: IlluminationCertificate
    step: int  # 2: coordinate circles sufficed, 3: frame turned about the pole
    max_cap: int
    turned_cap: int | None = None
    unseparated: tuple = ()  # caps meeting all three coordinate circles of the first frame

    @property
    def frame(self) -> np.ndarray:
        """Orthonormal rows f_1, f_2, f_3 in input coordinates."""
        return self.directions.directions[:3]

    def to_json(self) -> dict:
        return {
            "dim": 3,
            "case": "CoordinateAxesSuffice" if self.step == 2 else "TurnedAboutMaxCap",
            "rotation": self.rotation.tolist(),
            "directions": self.directions.directions.tolist(),
            "certificate": self.certificate.to_json(),
        }


def _sign_normalized(c: np.ndarray, eps: float) -> np.ndarray:
    nz = np.flatnonzero(np.abs(c) > eps)
    return -c if len(nz) and c[nz[0]] < 0 else c


def _lex_key(c: np.ndarray) -> tuple:
    return tuple(np.round(c, 9))


def select_max_cap(packing: Packing, tol: Tolerance = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Index of a largest cap and the sign-normalised centre used for it.

    Among caps within ``tol.band`` of the largest radius, take the
    lexicographically smallest sign-normalised centre; in a centrally
    symmetric packing that centre is itself a cap centre.
    """
    radii = packing.radii
    rmax = radii.max()
    best = None
    for i in np.flatnonzero(radii >= rmax - tol.band):
        c = _sign_normalized(packing.caps[i].center, tol.band)
        if best is None or _lex_key(c) < _lex_key(best[1]):
            best = (int(i), c)
    i, c = best
    if not np.allclose(c, packing.caps[i].center, atol=tol.band):
        # use the antipodal partner, which carries the normalised centre
        d = np.max(np.abs(packing.centers - c), axis=1)
        i = int(np.argmin(d))
    return i, packing.caps[i].center


def _unseparated(caps: list[Cap], normals: np.ndarray, tol: Tolerance) -> list[int]:
    out = []
    for k, cap in enumerate(caps):
        if not any(greatsphere_separates(cap, n, tol) for n in normals):
            out.append(k)
    return out


def solve_central_s2(packing: Packing, tol: Tolerance = DEFAULT_TOL) -> Solution3D:
    if packing.dim != 3:
        raise InvalidInputError(f"expected a packing on S^2, got dimension {packing.dim}")
    if len(packing) == 0:
        raise InvalidInputError("empty packing")
    violation = validate_packing(packing, tol)
    if violation is not None:
        raise InvalidPacking(f"caps {violation.i} and {violation.j} overlap by {violation.overlap:.3e}")
    if not is_centrally_symmetric(packing, tol):
        raise NotCentrallySymmetric("packing is not centrally symmetric")

    imax, cmax = select_max_cap(packing, tol)
    R = rotation_taking(cmax, E3, tol)
    caps = [Cap(R @ c.center, c.radius) for c in packing.caps]
    axes = np.eye(3)

    bad = _unseparated(caps, axes, tol)
    step = 2
    turned = None
    if bad:
        step = 3
        rmax = caps[imax].radius
        for k in bad:
            cap = caps[k]
            if abs(cap.radius - math.pi / 4) > tol.band or abs(rmax - math.pi / 4) > tol.band:
                raise InternalContradiction(
                    f"cap {k} meets all three coordinate circles but r_p={cap.radius!r}, r_max={rmax!r}"
                )
            if abs(cap.center[2]) > tol.band:
                raise InternalContradiction(f"cap {k} meets all three circles off the equator")
        turned = min(bad, key=lambda k: _lex_key(caps[k].center))
        cp = caps[turned].center
        if angular_distance(cp, E3) > math.pi / 2:
            cp = -cp
        phi = math.atan2(cp[1], cp[0])
        # new G_2 has normal at azimuth phi + pi/2, so it runs through c_p
        axes = rotation_about_axis(2, phi).T
        if _unseparated(caps, axes, tol):
            raise InternalContradiction("turned frame still leaves a cap unseparated")

    frame = axes @ R  # rows in input coordinates
    dirs = DirectionSet(np.vstack([frame, -frame]))
    cert = verify_illumination(packing, dirs, tol)
    if not cert.valid:
        raise InternalContradiction(f"constructed directions fail verification ({cert.failure})")
    return Solution3D(R, dirs, cert, step, imax, turned, tuple(bad))


def view_angle_bound(r_max: float, r_p: float) -> float:
    """Upper bound on sin(alpha) for a cap of radius ``r_p`` seen from the centre of the largest cap."""
    return 1.0 / (math.sin(r_max) / math.tan(r_p) + math.cos(r_max))


def view_angle_audit(packing: Packing, tol: Tolerance = DEFAULT_TOL) -> list[tuple[int, float, float]]:
    """Per cap: (index, sin of half view angle from the largest cap's centre, bound).

    The largest cap and its antipode are skipped.
    """
    imax, cmax = select_max_cap(packing, tol)
    rmax = packing.caps[imax].radius
    rows = []
    for k, cap in enumerate(packing.caps):
        d = angular_distance(cap.center, cmax)
        if d < tol.band or d > math.pi - tol.band:
            continue
        rows.append((k, view_angle_sin(cap, cmax, tol), view_angle_bound(rmax, cap.radius)))
    return rows


def degenerate_pair_audit(solution: Solution3D, packing: Packing) -> list[float]:
    """Angular distances between distinct caps that met all three coordinate circles.

    These caps lie on the equator and are spaced by right angles, so every
    distance returned should be pi/2 or pi.
    """
    idx = solution.unseparated
    return [
        angular_distance(packing.caps[a].center, packing.caps[b].center)
        for n, a in enumerate(idx)
        for b in idx[n + 1:]
    ]
