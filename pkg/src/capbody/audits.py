"""Numerical audits of the constants and case analyses behind the solvers."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .caps import k_tangent_radius, ktangent_sets_compatible
from .errors import GenerationStalled
from .generate import canned, central_s2
from .solver3d import degenerate_pair_audit, select_max_cap, solve_central_s2, view_angle_audit
from .solver4d import CANONICAL_NORMALS, stranded_distance
from .sphere import DEFAULT_TOL

THETA_FOUR_TWO = math.asin(1 / math.sqrt(5))
THETA_EIGHT_THREE = math.asin(math.sqrt(2) / math.sqrt(11))


@dataclass(frozen=True)
class AuditRow:
    name: str
    expected: str
    observed: str
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed, "pass": self.passed}


def k_tangent_rows() -> list[AuditRow]:
    want = {2: math.pi / 4, 3: math.asin(1 / math.sqrt(3)), 4: math.pi / 6}
    rows = []
    for k, r in want.items():
        got = k_tangent_radius(k, 4)
        rows.append(AuditRow(f"k-tangent radius k={k}", f"{r:.12f}", f"{got:.12f}", abs(got - r) <= 1e-12))
    return rows


def family_table_rows(d: int = 4) -> list[AuditRow]:
    rows = []
    for k1 in range(2, d + 1):
        for k2 in range(k1, d + 1):
            ok = ktangent_sets_compatible(k1, k2, d)
            want = (k1, k2) == (2, 2)
            rows.append(AuditRow(f"families k1={k1} k2={k2} d={d}", str(want), str(ok), ok == want))
    return rows


def threshold_rows() -> list[AuditRow]:
    # asin is increasing and sin(pi/6)^2 = 1/4, so compare squared sines exactly
    quarter = Fraction(1, 4)
    rows = []
    for name, sq, value in [
        ("four 2-tangent threshold asin(1/sqrt5) < pi/6", Fraction(1, 5), THETA_FOUR_TWO),
        ("eight 3-tangent threshold asin(sqrt(2/11)) < pi/6", Fraction(2, 11), THETA_EIGHT_THREE),
    ]:
        rows.append(AuditRow(name, f"sin^2 {sq} < {quarter}", f"{value:.9f} vs {math.pi / 6:.9f}", sq < quarter))
    return rows


def stranded_rows(resolution: int | None = None) -> list[AuditRow]:
    rows = []
    s = stranded_distance(canned("eight-2t"), resolution)
    rows.append(
        AuditRow("stranded distance, eight 2-tangent", f"{math.pi / 12:.9f}", f"{s.distance:.9f}",
                 abs(s.distance - math.pi / 12) <= 1e-6)
    )
    s = stranded_distance(canned("sixteen-4t"), resolution)
    on_axis = float(np.max(np.abs(s.point))) >= 1 - 1e-6
    rows.append(
        AuditRow("stranded distance, sixteen 4-tangent (at +-e_i)", f"{math.pi / 6:.9f}",
                 f"{s.distance:.9f} at {(np.round(s.point, 6) + 0.0).tolist()}",
                 abs(s.distance - math.pi / 6) <= 1e-6 and on_axis)
    )
    return rows


def grid_scan_rows(h: float = 1e-3) -> list[AuditRow]:
    full_n, full_max, sub_n, sub_max, above = kernels.scan_four_two_tangent(h, THETA_FOUR_TWO)
    rows = [
        AuditRow("four 2-tangent system, grid feasible points", "0", str(full_n), full_n == 0),
        AuditRow("four 2-tangent relaxed system, max r0 below asin(1/sqrt5)", f"< {THETA_FOUR_TWO:.6f}",
                 f"{sub_max:.6f} ({above} points at or above)", above == 0),
    ]
    full_n, full_max, br_n, br_max, above = kernels.scan_eight_three_tangent(h, THETA_EIGHT_THREE)
    rows += [
        AuditRow("eight 3-tangent system, grid feasible points", "0", str(full_n), full_n == 0),
        AuditRow("eight 3-tangent branch, max r0 below asin(sqrt(2/11))", f"< {THETA_EIGHT_THREE:.6f}",
                 f"{br_max:.6f} ({above} points at or above)", above == 0),
    ]
    return rows


def four_two_rejection_count(n: int = 200_000, seed: int = 0) -> int:
    """Random caps with r0 >= asin(1/sqrt5) satisfying every constraint of the four 2-tangent case.

    The cap has a nonnegative centre, packs with the 2-tangent caps at
    (+-1, +-1, 0, 0)/sqrt2, meets F_1, F_2, G_3, G_4 and misses G_1.
    """
    rng = np.random.default_rng(seed)
    x = np.abs(rng.normal(size=(n, 4)))
    x /= np.linalg.norm(x, axis=1)[:, None]
    r0 = rng.uniform(THETA_FOUR_TWO, math.pi / 2, n)
    s = np.sin(r0)
    q = 1 / math.sqrt(2)
    ok = (
        ((x[:, 0] + x[:, 1]) * q <= np.cos(r0 + math.pi / 4))
        & (np.abs(x[:, 0] + x[:, 1]) * q <= s)
        & (np.abs(x[:, 0] - x[:, 1]) * q <= s)
        & (x[:, 2] <= s)
        & (x[:, 3] <= s)
        & (x[:, 0] > s)
    )
    return int(np.count_nonzero(ok))


def orthant_inradius_violations(n: int = 100_000, seed: int = 0) -> int:
    """Random caps of radius below pi/6 that meet all four greatspheres of some solver frame."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(n, 4))
    c /= np.linalg.norm(c, axis=1)[:, None]
    s = np.sin(rng.uniform(0.0, math.pi / 6 - DEFAULT_TOL.band, n))
    bad = 0
    for normals in CANONICAL_NORMALS.values():
        bad += int(np.count_nonzero(np.max(np.abs(c @ normals.T), axis=1) <= s))
    return bad


def view_angle_rows(seeds: range = range(20)) -> list[AuditRow]:
    worst = -math.inf
    case1 = 0
    pairs = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GenerationStalled)
        packings = [central_s2(2 + 2 * (s % 15), (0.05, 1.0), seed=s).packing for s in seeds]
    packings.append(canned("octahedron-s2"))
    for p in packings:
        imax, _ = select_max_cap(p)
        rmax = p.caps[imax].radius
        for _, sin_a, bound in view_angle_audit(p):
            worst = max(worst, sin_a - bound)
            if rmax > math.pi / 4 and sin_a >= math.sqrt(0.5):
                case1 += 1
        sol = solve_central_s2(p)
        for dist in degenerate_pair_audit(sol, p):
            if min(abs(dist - math.pi / 2), abs(dist - math.pi)) > DEFAULT_TOL.band:
                pairs += 1
    return [
        AuditRow("view-angle bound on generated S^2 packings", "<= band", f"{worst:.3e}", worst <= DEFAULT_TOL.band),
        AuditRow("no wide view angle when r_max > pi/4", "0", str(case1), case1 == 0),
        AuditRow("equatorial pi/4 caps spaced by right angles", "0", str(pairs), pairs == 0),
    ]


def run_audits(h: float = 1e-3, resolution: int | None = None) -> list[AuditRow]:
    rows = k_tangent_rows() + family_table_rows() + threshold_rows() + stranded_rows(resolution)
    rows += grid_scan_rows(h)
    n = four_two_rejection_count()
    rows.append(AuditRow("four 2-tangent rejection sampling counterexamples", "0", str(n), n == 0))
    n = orthant_inradius_violations()
    rows.append(AuditRow("caps below pi/6 meeting four orthogonal greatspheres", "0", str(n), n == 0))
    rows += view_angle_rows()
    return rows
