"""Quasi-uniform point sets on S^{d-1}."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

GOLDEN = (1 + 5**0.5) / 2


def _equal_area(u: np.ndarray, dim: int) -> np.ndarray:
    """Map points of the unit cube [0,1)^{dim-1} to the sphere, preserving measure."""
    if dim == 2:
        t = 2 * np.pi * u[:, 0]
        return np.column_stack([np.cos(t), np.sin(t)])
    if dim == 3:
        z = 1.0 - 2.0 * u[:, 0]
        t = 2 * np.pi * u[:, 1]
        rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        return np.column_stack([rho * np.cos(t), rho * np.sin(t), z])
    if dim == 4:
        # uniform unit quaternions (Shoemake)
        a = np.sqrt(1.0 - u[:, 0])
        b = np.sqrt(u[:, 0])
        t1 = 2 * np.pi * u[:, 1]
        t2 = 2 * np.pi * u[:, 2]
        return np.column_stack([a * np.sin(t1), a * np.cos(t1), b * np.sin(t2), b * np.cos(t2)])
    raise ValueError(f"no equal-area map for dimension {dim}")


def fibonacci_sphere(n: int) -> np.ndarray:
    """Fibonacci lattice of ``n`` points on S^2."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = 2 * np.pi * i / GOLDEN
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def kronecker_cube(n: int, k: int) -> np.ndarray:
    """Additive recurrence with the generalised golden ratio in ``k`` dimensions."""
    # phi_k is the positive root of x^(k+1) = x + 1
    phi = 2.0
    for _ in range(60):
        phi = (1.0 + phi) ** (1.0 / (k + 1))
    alpha = (1.0 / phi) ** np.arange(1, k + 1)
    return (0.5 + np.outer(np.arange(1, n + 1), alpha)) % 1.0


def sphere_grid(n: int, dim: int) -> np.ndarray:
    """Deterministic quasi-uniform grid of ``n`` points on S^{dim-1}."""
    if dim == 3:
        return fibonacci_sphere(n)
    if dim in (2, 4):
        return _equal_area(kronecker_cube(n, dim - 1), dim)
    x = ndtri(np.clip(kronecker_cube(n, dim), 1e-12, 1 - 1e-12))
    return x / np.linalg.norm(x, axis=1)[:, None]


def quasi_random_directions(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """Scrambled Halton points mapped to the sphere; reproducible from ``seed``."""
    k = dim - 1 if dim <= 4 else dim
    u = qmc.Halton(d=k, scramble=True, seed=np.random.default_rng(seed)).random(n)
    if dim <= 4:
        return _equal_area(u, dim)
    x = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    return x / np.linalg.norm(x, axis=1)[:, None]


def random_unit(rng: np.random.Generator, dim: int, size: int | None = None) -> np.ndarray:
    x = rng.normal(size=(size or 1, dim))
    x /= np.linalg.norm(x, axis=1)[:, None]
    return x if size is not None else x[0]

