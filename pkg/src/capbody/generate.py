"""Random and canned cap packings."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .caps import Cap, Packing
from .errors import GenerationStalled, InvalidInputError
from .sampling import random_unit

MAX_REJECTIONS = 100_000
_BATCH = 512

R2 = 1.0 / math.sqrt(2.0)
R3 = 1.0 / math.sqrt(3.0)


def _signed_orbit(c: np.ndarray) -> np.ndarray:
    """All distinct images of ``c`` under coordinate sign flips."""
    nz = np.flatnonzero(c != 0)
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=len(nz)):
        v = c.copy()
        v[nz] *= signs
        out.append(v)
    return np.array(out) if out else c[None, :]


def _from_orbit(base: np.ndarray, radius: float) -> list[Cap]:
    return [Cap(c, radius) for c in _signed_orbit(np.asarray(base, dtype=float))]


def octahedron_s2(phi: float = math.pi / 4) -> Packing:
    """Six caps of radius pi/4: the two poles and four equatorial caps at azimuths phi + k pi/2."""
    centers = [[0, 0, 1.0], [0, 0, -1.0]]
    centers += [[math.cos(phi + k * math.pi / 2), math.sin(phi + k * math.pi / 2), 0.0] for k in range(4)]
    return Packing(3, tuple(Cap(np.array(c), math.pi / 4) for c in centers))


def eight_two_tangent() -> Packing:
    return Packing(4, tuple(_from_orbit([R2, R2, 0, 0], math.pi / 4) + _from_orbit([0, 0, R2, R2], math.pi / 4)))


def sixteen_four_tangent() -> Packing:
    return Packing(4, tuple(_from_orbit([0.5] * 4, math.pi / 6)))


def four_two_tangent() -> Packing:
    return Packing(4, tuple(_from_orbit([R2, R2, 0, 0], math.pi / 4)))


def eight_three_tangent() -> Packing:
    return Packing(4, tuple(_from_orbit([R3, R3, R3, 0], math.asin(R3))))


CANNED = {
    "octahedron-s2": octahedron_s2,
    "eight-2t": eight_two_tangent,
    "sixteen-4t": sixteen_four_tangent,
    "four-2t": four_two_tangent,
    "eight-3t": eight_three_tangent,
}


def canned(name: str) -> Packing:
    try:
        return CANNED[name]()
    except KeyError:
        raise InvalidInputError(f"unknown canned configuration {name!r}; choose from {sorted(CANNED)}") from None


@dataclass(eq=False)
class Generated:
    packing: Packing
    stalled: bool = False
    rejections: int = 0


def _fits_all(X: np.ndarray, r: float, C: np.ndarray, R: np.ndarray) -> bool:
    # strict inequality keeps random instances off the tangency boundary
    return not len(C) or bool(np.all(X @ C.T < np.cos(R[None, :] + r)))


def _stall(accepted: int, wanted: int) -> None:
    warnings.warn(
        f"generator stalled after {MAX_REJECTIONS} consecutive rejections with {accepted} of {wanted} caps",
        GenerationStalled,
        stacklevel=3,
    )


def _check_radii(radii: tuple[float, float]) -> tuple[float, float]:
    lo, hi = map(float, radii)
    if not 0.0 < lo <= hi < math.pi / 2:
        raise InvalidInputError(f"radius range must satisfy 0 < lo <= hi < pi/2, got {lo}, {hi}")
    return lo, hi


def central_s2(n_caps: int, radii: tuple[float, float] = (0.05, 1.0), seed: int = 0) -> Generated:
    """Rejection-sample antipodal cap pairs until ``n_caps`` caps (rounded down to even) are placed."""
    lo, hi = _check_radii(radii)
    rng = np.random.default_rng(seed)
    C = np.zeros((0, 3))
    R = np.zeros(0)
    misses = 0
    while len(C) + 2 <= n_caps:
        cand = random_unit(rng, 3, _BATCH)
        rad = rng.uniform(lo, hi, _BATCH)
        # test the whole batch at once and keep the first candidate that fits
        fits = np.all(cand @ C.T < np.cos(R[None, :] + rad[:, None]), axis=1) if len(C) else np.ones(_BATCH, bool)
        hit = np.flatnonzero(fits)
        if len(hit) and misses + hit[0] < MAX_REJECTIONS:
            k = hit[0]
            C = np.vstack([C, cand[k], -cand[k]])
            R = np.append(R, [rad[k], rad[k]])
            misses = 0
            continue
        misses += _BATCH
        if misses >= MAX_REJECTIONS:
            _stall(len(C), n_caps)
            return Generated(Packing.from_arrays(C, R), True, misses)
    return Generated(Packing.from_arrays(C, R), False, misses)


def _orthant_points(rng: np.random.Generator, n: int, dim: int, nonzero: int) -> np.ndarray:
    """n random unit vectors in the closed positive orthant with ``nonzero`` positive entries."""
    idx = np.argsort(rng.random((n, dim)), axis=1)[:, :nonzero]
    X = np.zeros((n, dim))
    np.put_along_axis(X, idx, np.abs(rng.normal(size=(n, nonzero))), axis=1)
    return X / np.linalg.norm(X, axis=1)[:, None]


def unconditional_s3(
    n_caps: int,
    radii: tuple[float, float] = (0.05, 0.5),
    seed: int = 0,
    base: Packing | str | None = None,
) -> Generated:
    """Random unconditional packing on S^3.

    Orbits of random nonnegative-orthant caps under coordinate reflections
    are added while the number of added caps stays within ``n_caps``;
    ``base`` (a packing or canned name) is placed first and does not count.
    """
    lo, hi = _check_radii(radii)
    if isinstance(base, str):
        base = canned(base)
    rng = np.random.default_rng(seed)
    C = base.centers if base is not None and len(base) else np.zeros((0, 4))
    R = base.radii if base is not None and len(base) else np.zeros(0)
    added = 0
    misses = 0
    while misses < MAX_REJECTIONS and n_caps - added >= 2:
        # an orbit with m nonzero coordinates has 2^m caps
        m = int(rng.integers(1, min(4, int(math.log2(n_caps - added))) + 1))
        cand = _orthant_points(rng, _BATCH, 4, m)
        rad = rng.uniform(lo, hi, _BATCH)
        # nearest orbit-mates differ in the sign of the smallest coordinate
        smallest = np.min(np.where(cand > 0, cand, np.inf), axis=1)
        ok = 1 - 2 * smallest**2 < np.cos(2 * rad)
        if len(C):
            ok &= np.all(cand @ C.T < np.cos(R[None, :] + rad[:, None]), axis=1)
        hit = np.flatnonzero(ok)
        if len(hit) and misses + hit[0] < MAX_REJECTIONS:
            k = hit[0]
            orbit = _signed_orbit(cand[k])
            if not _fits_all(orbit, rad[k], C, R):
                misses += int(k) + 1
                continue
            C = np.vstack([C, orbit])
            R = np.append(R, np.full(len(orbit), rad[k]))
            added += len(orbit)
            misses = 0
        else:
            misses += _BATCH
    stalled = misses >= MAX_REJECTIONS
    if stalled:
        _stall(added, n_caps)
    return Generated(Packing.from_arrays(C, R), stalled, misses)
