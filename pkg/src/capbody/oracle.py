"""Brute-force ground truth for cap bodies.

Nothing here uses the hemisphere criterion.  Boundary points come from the
radial function of the body, and illumination is tested directly: step a
little along the direction and ask whether the point is strictly inside.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .caps import CapBody
from .errors import InvalidInputError, InvalidPacking, NotOnBoundary
from .illumination import DirectionSet
from .sampling import quasi_random_directions
from .sphere import DEFAULT_TOL, Tolerance, normalize

EPS_LADDER = (1e-3, 1e-5, 1e-7)


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True, eq=False)
class BoundarySample:
    point: np.ndarray
    kind: str  # "sphere" or "spike"
    vertex: Optional[int]
    ray_direction: np.ndarray


@dataclass
class MCReport:
    n: int
    unlit: int
    undecided: int
    worst_margin: float
    seed: int
    refined: int = 0
    worst_point: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.unlit == 0

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "unlit": self.unlit,
            "undecided": self.undecided,
            "worst_margin": float(self.worst_margin),
            "seed": self.seed,
            "refined": self.refined,
        }
        if self.worst_point is not None:
            out["worst_point"] = [float(x) for x in self.worst_point]
        return out


def segment_crosses_ball(v1, v2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the segment [v1, v2] meets the closed unit ball."""
    a = np.asarray(v1, dtype=float)
    b = np.asarray(v2, dtype=float)
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, -float(a @ d) / dd))
    return float(np.linalg.norm(a + t * d)) <= 1.0 + tol.strict


def check_segment_condition(body: CapBody, tol: Tolerance = DEFAULT_TOL) -> None:
    """Raise unless the body is a genuine cap body (every vertex pair's segment meets the ball)."""
    V = body.vertices
    norms = np.linalg.norm(V, axis=1)
    if len(V) and norms.min() <= 1.0 + tol.strict:
        raise InvalidPacking(f"vertex {int(np.argmin(norms))} is not outside the unit ball")
    for i, j in itertools.combinations(range(len(V)), 2):
        if not segment_crosses_ball(V[i], V[j], tol):
            raise InvalidPacking(f"segment between vertices {i} and {j} misses the unit ball")


def radial_exit_search(v, x, tol: float = 1e-12) -> float:
    """Exit distance of the ray through unit ``x`` from conv(B u {v}), by ternary search.

    Maximises ``t<x,v> + sqrt(t^2 <x,v>^2 - t^2 |v|^2 + (1-t)^2)`` over the
    ``t`` in [0, 1] where the radicand is non-negative.
    """
    v = np.asarray(v, dtype=float)
    a = float(np.dot(x, v))
    L2 = float(v @ v)

    def f(t):
        rad = t * t * a * a - t * t * L2 + (1 - t) ** 2
        return t * a + math.sqrt(rad) if rad >= 0 else -math.inf

    # the feasible set of t is an interval starting at 0
    hi = 1.0
    if f(hi) == -math.inf:
        lo_ok, hi_bad = 0.0, 1.0
        while hi_bad - lo_ok > 1e-15:
            mid = 0.5 * (lo_ok + hi_bad)
            if f(mid) == -math.inf:
                hi_bad = mid
            else:
                lo_ok = mid
        hi = lo_ok
    lo = 0.0
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    return max(1.0, f(0.5 * (lo + hi)))


def radial_function(body: CapBody, x) -> float | np.ndarray:
    """Distance from the origin to bd K along unit direction(s) ``x``."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    rho = kernels.radial_function(np.atleast_2d(x), body.vertices)
    return float(rho[0]) if single else rho


def boundary_sample(body: CapBody, x, tol: Tolerance = DEFAULT_TOL) -> BoundarySample:
    x = np.asarray(x, dtype=float)
    rho = radial_function(body, x)
    if rho <= 1.0 + tol.unit:
        return BoundarySample(x.copy(), "sphere", None, x)
    a = body.vertices @ x
    return BoundarySample(rho * x, "spike", int(np.argmax(a)), x)


def membership_margin(body: CapBody, q) -> float | np.ndarray:
    """``min(|q| - 1, min_i min_t |q - t v_i| + t - 1)``; negative inside the body."""
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    m = kernels.membership_margin(np.atleast_2d(q), body.vertices)
    return float(m[0]) if single else m


def membership(body: CapBody, q, tol: Tolerance = DEFAULT_TOL) -> Membership:
    m = membership_margin(body, q)
    if m <= -tol.strict:
        return Membership.INTERIOR
    if m > tol.strict:
        return Membership.EXTERIOR
    return Membership.BOUNDARY


def direct_illuminated(
    body: CapBody,
    s: BoundarySample,
    u,
    eps_ladder: Sequence[float] = EPS_LADDER,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """Is ``s.point + eps * u`` strictly inside the body for some step in the ladder?"""
    if membership(body, s.point, tol) is not Membership.BOUNDARY:
        raise NotOnBoundary(f"{s.point.tolist()} is not on the boundary")
    u = np.asarray(u, dtype=float)
    return any(membership(body, s.point + e * u, tol) is Membership.INTERIOR for e in eps_ladder)


def _boundary_points(body: CapBody, rays: np.ndarray) -> np.ndarray:
    return rays * kernels.radial_function(rays, body.vertices)[:, None]


def _tangent_steps(rng: np.random.Generator, x: np.ndarray, k: int, step: float) -> np.ndarray:
    g = rng.normal(size=(len(x), k, x.shape[1]))
    g -= np.einsum("nkd,nd->nk", g, x)[..., None] * x[:, None, :]
    g /= np.linalg.norm(g, axis=2, keepdims=True)
    y = x[:, None, :] + step[:, None, None] * g
    return y / np.linalg.norm(y, axis=2, keepdims=True)


def mc_verify(
    body: CapBody,
    dirs: DirectionSet | Sequence,
    n: int = 10_000,
    seed: int = 0,
    eps_ladder: Sequence[float] = EPS_LADDER,
    tol: Tolerance = DEFAULT_TOL,
    refine: int = 8,
) -> MCReport:
    """Monte Carlo check that ``dirs`` illuminate every boundary point of ``body``.

    Boundary points are taken along ``n`` quasi-random rays plus the rays
    through the vertices.  Each point gets a rate: the smallest
    ``margin(p + eps u) / eps`` over directions and steps, negative when
    stepping goes inwards.  A point is lit when some step lands strictly
    inside, unlit when it is not lit and its rate exceeds ``tol.band``, and
    undecided otherwise.  If nothing is unlit yet, the ``refine`` least-lit
    rays are pushed further towards unlit regions by a shrinking random
    local search.
    """
    if not isinstance(dirs, DirectionSet):
        dirs = DirectionSet(np.asarray(dirs, dtype=float))
    if dirs.dim != body.dim:
        raise InvalidInputError(f"directions have dimension {dirs.dim}, body has {body.dim}")
    check_segment_condition(body, tol)
    V = body.vertices
    U = dirs.directions
    eps = np.asarray(eps_ladder, dtype=float)

    def scan(points):
        return kernels.illumination_scan(points, U, eps, V, tol.strict)

    rays = quasi_random_directions(n, body.dim, seed)
    points = _boundary_points(body, rays)
    if len(V):
        rays = np.vstack([rays, normalize(V)])
        points = np.vstack([points, V])
    lit, rate = scan(points)

    refined_rays = np.zeros((0, body.dim))
    refined_lit = np.zeros(0, dtype=bool)
    refined_rate = np.zeros(0)
    # refinement only hunts for unlit points, so skip it once one is known
    if refine and n and not np.any(~lit & (rate > tol.band)):
        rng = np.random.default_rng([seed, 1])
        order = np.argsort(-rate[:n], kind="stable")[:refine]
        x = rays[order].copy()
        best = rate[order].copy()
        xlit = lit[order].copy()
        spacing = (4 * np.pi / n) ** (1.0 / (body.dim - 1))
        step = np.full(len(x), 2.0 * spacing)
        k = 16
        for _ in range(80):
            if np.all(step < 1e-8):
                break
            cand = _tangent_steps(rng, x, k, step)
            c_lit, c_rate = scan(_boundary_points(body, cand.reshape(-1, body.dim)))
            c_rate = c_rate.reshape(len(x), k)
            c_lit = c_lit.reshape(len(x), k)
            j = np.argmax(c_rate, axis=1)
            top = c_rate[np.arange(len(x)), j]
            better = top > best
            x[better] = cand[better, j[better]]
            xlit[better] = c_lit[better, j[better]]
            best[better] = top[better]
            step[~better] *= 0.5
        refined_rays, refined_lit, refined_rate = x, xlit, best

    all_rays = np.vstack([rays, refined_rays])
    all_lit = np.concatenate([lit, refined_lit])
    all_rate = np.concatenate([rate, refined_rate])
    open_ = ~all_lit
    unlit = int(np.count_nonzero(open_ & (all_rate > tol.band)))
    undecided = int(np.count_nonzero(open_ & (all_rate <= tol.band)))
    w = int(np.argmax(all_rate)) if len(all_rate) else None
    return MCReport(
        n=n,
        unlit=unlit,
        undecided=undecided,
        worst_margin=float(all_rate[w]) if w is not None else -math.inf,
        seed=seed,
        refined=len(refined_rays),
        worst_point=None if w is None else all_rays[w] * kernels.radial_function(all_rays[w:w + 1], V)[0],
    )
