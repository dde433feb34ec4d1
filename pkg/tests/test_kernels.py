import math
import os
import subprocess
import sys

import numpy as np
import pytest

from capbody import kernels
from capbody.audits import THETA_EIGHT_THREE, THETA_FOUR_TWO
from capbody.sampling import random_unit
from oracles import random_body

BACKENDS = [pytest.param(kernels.python_backend, id="python")]
if kernels.compiled_backend is not None:
    BACKENDS.append(pytest.param(kernels.compiled_backend, id="cython"))
else:  # keep the id visible in the report when the extension is missing
    BACKENDS.append(pytest.param(None, id="cython", marks=pytest.mark.skip(reason="extension not built")))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def _problem(dim, seed=0, n=2000):
    rng = np.random.default_rng([dim, seed])
    body = random_body(rng, 8, dim)
    X = random_unit(rng, dim, n)
    Q = rng.uniform(-1.6, 1.6, size=(n, dim))
    return body, X, Q


@pytest.mark.parametrize("dim", [3, 4])
def test_radial_agrees(backend, dim):
    body, X, _ = _problem(dim)
    ref = kernels.python_backend.radial_function(X, body.vertices)
    assert np.allclose(backend.radial_function(X, body.vertices), ref, rtol=0, atol=1e-12)
    assert np.all(ref >= 1.0)


@pytest.mark.parametrize("dim", [3, 4])
def test_membership_agrees(backend, dim):
    body, X, Q = _problem(dim)
    ref = kernels.python_backend.membership_margin(Q, body.vertices)
    assert np.allclose(backend.membership_margin(Q, body.vertices), ref, rtol=0, atol=1e-12)
    # boundary points have zero margin
    B = X * kernels.python_backend.radial_function(X, body.vertices)[:, None]
    assert np.allclose(backend.membership_margin(B, body.vertices), 0.0, atol=1e-9)


def test_illumination_scan_agrees(backend):
    body, X, _ = _problem(3, n=500)
    B = X * kernels.python_backend.radial_function(X, body.vertices)[:, None]
    U = random_unit(np.random.default_rng(1), 3, 5)
    eps = np.array([1e-3, 1e-5, 1e-7])
    lit_ref, best_ref = kernels.python_backend.illumination_scan(B, U, eps, body.vertices, 1e-9)
    lit, best = backend.illumination_scan(B, U, eps, body.vertices, 1e-9)
    assert np.array_equal(lit, lit_ref)
    assert np.allclose(best, best_ref, atol=1e-6)


@pytest.mark.parametrize("dim", [3, 4])
def test_cap_gap_matches_loop(dim):
    body, X, _ = _problem(dim, n=300)
    caps = body.caps()
    ref = [min(math.acos(np.clip(x @ c.center, -1, 1)) - c.radius for c in caps.caps) for x in X]
    assert np.allclose(kernels.cap_gap(X, caps.centers, caps.radii), ref, atol=1e-12)


def test_scans_agree(backend):
    h = 1e-2
    a = backend.scan_four_two_tangent(h, THETA_FOUR_TWO)
    b = kernels.python_backend.scan_four_two_tangent(h, THETA_FOUR_TWO)
    assert a == b and a[0] == 0
    a = backend.scan_eight_three_tangent(h, THETA_EIGHT_THREE)
    b = kernels.python_backend.scan_eight_three_tangent(h, THETA_EIGHT_THREE)
    assert a == b


def test_empty_vertex_set(backend):
    X = random_unit(np.random.default_rng(2), 3, 10)
    V = np.zeros((0, 3))
    assert np.all(backend.radial_function(X, V) == 1.0)
    assert np.allclose(backend.membership_margin(2 * X, V), 1.0)


def _backend_in_subprocess(env_value):
    env = dict(os.environ)
    env.pop("CAPBODY_PURE_PYTHON", None)
    if env_value is not None:
        env["CAPBODY_PURE_PYTHON"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "import capbody; print(capbody.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_backend_selection():
    assert _backend_in_subprocess("1") == "python"
    want = "cython" if kernels.compiled_backend is not None else "python"
    assert _backend_in_subprocess(None) == want
    assert kernels.BACKEND == want
