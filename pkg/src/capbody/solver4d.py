"""Eight illumination directions for unconditionally symmetric cap packings on S^3.

Caps that the four coordinate greatspheres fail to separate are k-tangent.
Their tangency pattern, up to a signed permutation of the axes, is one of
four canonical families, and each family comes with a fixed orthonormal set
of separating normals.
"""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .caps import Cap, Packing, classify_k_tangent, is_unconditional, validate_packing
from .errors import (
    InternalContradiction,
    InvalidInputError,
    InvalidPacking,
    NotUnconditional,
    UnrecognizedConfiguration,
)
from .illumination import DirectionSet, IlluminationCertificate, greatsphere_separates, verify_illumination
from .sampling import sphere_grid
from .sphere import DEFAULT_TOL, Tolerance

R2 = 1.0 / math.sqrt(2.0)


class CaseKind(enum.Enum):
    COORDINATE_AXES_SUFFICE = "CoordinateAxesSuffice"
    EIGHT_TWO_TANGENT = "EightTwoTangent"
    SIXTEEN_FOUR_TANGENT = "SixteenFourTangent"
    FOUR_TWO_TANGENT = "FourTwoTangent"
    EIGHT_THREE_TANGENT = "EightThreeTangent"


# tangency axis-sets of the unseparated families in canonical coordinates
CANONICAL_PATTERNS = {
    CaseKind.EIGHT_TWO_TANGENT: frozenset({frozenset({0, 1}), frozenset({2, 3})}),
    CaseKind.SIXTEEN_FOUR_TANGENT: frozenset({frozenset({0, 1, 2, 3})}),
    CaseKind.FOUR_TWO_TANGENT: frozenset({frozenset({0, 1})}),
    CaseKind.EIGHT_THREE_TANGENT: frozenset({frozenset({0, 1, 2})}),
}

_F_PAIRED = np.array([[R2, R2, 0, 0], [R2, -R2, 0, 0], [0, 0, R2, R2], [0, 0, R2, -R2]])
_F_MIXED = np.array([[R2, R2, 0, 0], [R2, -R2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])

CANONICAL_NORMALS = {
    CaseKind.COORDINATE_AXES_SUFFICE: np.eye(4),
    CaseKind.EIGHT_TWO_TANGENT: _F_PAIRED,
    CaseKind.SIXTEEN_FOUR_TANGENT: _F_PAIRED,
    CaseKind.FOUR_TWO_TANGENT: _F_MIXED,
    CaseKind.EIGHT_THREE_TANGENT: _F_MIXED,
}


def signed_permutations(d: int = 4):
    """All 2^d d! signed permutation matrices, identity first."""
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1.0, -1.0), repeat=d):
            P = np.zeros((d, d))
            P[np.arange(d), perm] = signs
            yield P


@dataclass(frozen=True, eq=False)
class CaseId:
    kind: CaseKind
    axis_map: np.ndarray  # signed permutation P with canonical = P @ input

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "axis_map": self.axis_map.astype(int).tolist()}


@dataclass(eq=False)
class Solution4D:
    case: CaseId
    directions: DirectionSet
    certificate: IlluminationCertificate

    @property
    def normals(self) -> np.ndarray:
        return self.directions.directions[:4]

    def to_json(self) -> dict:
        return {
            "dim": 4,
            "case": self.case.kind.value,
            "axis_map": self.case.axis_map.astype(int).tolist(),
            "directions": self.directions.directions.tolist(),
            "certificate": self.certificate.to_json(),
        }


def _check_input(packing: Packing, tol: Tolerance) -> None:
    if packing.dim != 4:
        raise InvalidInputError(f"expected a packing on S^3, got dimension {packing.dim}")
    violation = validate_packing(packing, tol)
    if violation is not None:
        raise InvalidPacking(f"caps {violation.i} and {violation.j} overlap by {violation.overlap:.3e}")
    if not is_unconditional(packing, tol):
        raise NotUnconditional("packing is not symmetric about every coordinate hyperplane")


def unseparated_caps(caps, normals: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> list[int]:
    return [k for k, cap in enumerate(caps) if not any(greatsphere_separates(cap, n, tol) for n in normals)]


def detect_case(packing: Packing, tol: Tolerance = DEFAULT_TOL) -> CaseId:
    _check_input(packing, tol)
    bad = unseparated_caps(packing.caps, np.eye(4), tol)
    if not bad:
        return CaseId(CaseKind.COORDINATE_AXES_SUFFICE, np.eye(4))
    pattern = set()
    for k in bad:
        profile = classify_k_tangent(packing.caps[k], 4, tol)
        if profile is None:
            raise InvalidInputError(f"cap {k} meets every coordinate greatsphere but is not k-tangent")
        pattern.add(profile.tangent_axes)
    pattern = frozenset(pattern)
    for P in signed_permutations(4):
        perm = np.argmax(np.abs(P), axis=1)  # canonical axis a comes from input axis perm[a]
        inv = {int(src): a for a, src in enumerate(perm)}
        mapped = frozenset(frozenset(inv[i] for i in axes) for axes in pattern)
        for kind, canon in CANONICAL_PATTERNS.items():
            if mapped == canon:
                return CaseId(kind, P)
    raise UnrecognizedConfiguration(
        "k-tangent families " + ", ".join(str(sorted(a)) for a in sorted(pattern, key=sorted))
        + " match no known configuration"
    )


def solve_unconditional_s3(packing: Packing, tol: Tolerance = DEFAULT_TOL) -> Solution4D:
    case = detect_case(packing, tol)
    normals = CANONICAL_NORMALS[case.kind] @ case.axis_map  # rows: P^T n
    dirs = DirectionSet(np.vstack([normals, -normals]))
    left = unseparated_caps(packing.caps, normals, tol)
    if left:
        raise InternalContradiction(f"{case.kind.value} normals leave caps {left} unseparated")
    cert = verify_illumination(packing, dirs, tol)
    if not cert.valid:
        raise InternalContradiction(f"constructed directions fail verification ({cert.failure})")
    return Solution4D(case, dirs, cert)


@dataclass(frozen=True, eq=False)
class Stranded:
    point: np.ndarray
    distance: float


def _gap(x: np.ndarray, packing: Packing) -> float:
    return float(kernels.cap_gap(x[None, :], packing.centers, packing.radii)[0])


def _refine(x0: np.ndarray, t0: float, packing: Packing) -> tuple[np.ndarray, float]:
    C, r = packing.centers, packing.radii
    d = len(x0)
    # epigraph form: maximise t with <x, c_i> <= cos(r_i + t), |x| = 1
    cons = [
        {
            "type": "ineq",
            "fun": lambda z: np.cos(r + z[d]) - C @ z[:d],
            "jac": lambda z: np.column_stack([-C, -np.sin(r + z[d])]),
        },
        {"type": "eq", "fun": lambda z: z[:d] @ z[:d] - 1.0, "jac": lambda z: np.append(2 * z[:d], 0.0)},
    ]
    with warnings.catch_warnings():
        # SLSQP clips iterates to the bounds and says so; that is expected here
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(
            lambda z: -z[d],
            np.append(x0, t0),
            jac=lambda z: np.append(np.zeros(d), -1.0),
            constraints=cons,
            bounds=[(-1.0, 1.0)] * d + [(0.0, math.pi - float(r.min()))],
            method="SLSQP",
            options={"ftol": 1e-15, "maxiter": 500},
        )
    x = res.x[:d] / np.linalg.norm(res.x[:d])
    return x, _gap(x, packing)


def stranded_distance(packing: Packing, resolution: int | None = None, starts: int = 8) -> Stranded:
    """Point of the sphere farthest from every cap, and that distance.

    A quasi-uniform grid locates candidates, the best ``starts`` of which are
    polished by SLSQP on the epigraph of the max-min problem.
    """
    if len(packing) == 0:
        raise InvalidInputError("stranded distance of an empty packing is undefined")
    d = packing.dim
    n = resolution or (100_000 if d <= 3 else 1_000_000)
    grid = sphere_grid(n, d)
    gap = kernels.cap_gap(grid, packing.centers, packing.radii)
    best_x, best_t = grid[int(np.argmax(gap))], float(gap.max())
    for i in np.argsort(-gap, kind="stable")[:starts]:
        x, t = _refine(grid[i], float(gap[i]), packing)
        if t > best_t:
            best_x, best_t = x, t
    return Stranded(best_x, best_t)
