import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from capbody.caps import Cap, CapBody, Packing, cap_from_vertex
from capbody.errors import InvalidInputError, VertexInsideBall
from capbody.generate import canned, octahedron_s2
from capbody.illumination import (
    DirectionSet,
    greatsphere_separates,
    hemisphere_separates,
    hemispheres_cover,
    illuminates_sphere_point,
    illuminates_vertex,
    pair_separable_by_one_hemisphere,
    separation_margins,
    verify_illumination,
)
from capbody.sampling import random_unit, sphere_grid
from capbody.solver3d import solve_central_s2
from oracles import best_common_pole, grid_cover_margin

I3 = np.eye(3)
AXES3 = np.vstack([I3, -I3])
R2 = 1 / math.sqrt(2)


def unit3():
    return (
        st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3)
        .map(np.array)
        .filter(lambda v: np.linalg.norm(v) > 0.1)
        .map(lambda v: v / np.linalg.norm(v))
    )


def test_illuminates_vertex_examples():
    v = np.array([0, 0, 2.0])
    assert illuminates_vertex(v, [0, 0, -1])
    assert not illuminates_vertex(v, [1, 0, 0])
    t = math.acos(1 / math.sqrt(2))
    verdict = illuminates_vertex([0, 0, math.sqrt(2)], [math.sin(t), 0, -math.cos(t)])
    assert not verdict and verdict.undecided
    with pytest.raises(VertexInsideBall):
        illuminates_vertex([0, 0, 0.9], [0, 0, -1])


def test_illuminates_sphere_point_examples():
    assert illuminates_sphere_point(I3[2], -I3[2])
    v = illuminates_sphere_point(I3[2], I3[0])
    assert not v and v.undecided
    th = math.pi / 4
    assert illuminates_sphere_point(I3[2], [0, math.sin(th), -math.cos(th)])


def test_hemisphere_separates_examples():
    assert hemisphere_separates(Cap(I3[2], math.pi / 4), I3[2])
    assert not hemisphere_separates(Cap(I3[2], math.pi / 4), I3[0])
    v = hemisphere_separates(Cap(np.full(4, 0.5), math.pi / 6), [R2, R2, 0, 0])
    assert v and v.margin == pytest.approx(R2 - 0.5)


def test_greatsphere_separates_examples():
    assert greatsphere_separates(Cap(I3[2], math.pi / 4), I3[2])
    assert not greatsphere_separates(Cap(I3[2], math.pi / 4), I3[0])
    c = Cap(np.array([R2, R2, 0, 0]), math.pi / 4)
    assert not greatsphere_separates(c, [R2, -R2, 0, 0])
    assert greatsphere_separates(c, [R2, R2, 0, 0])


@settings(max_examples=300, deadline=None)
@given(unit3(), st.floats(1.01, 3.0), unit3())
def test_vertex_and_cap_forms_agree(direction, norm, u):
    v = direction * norm
    a = illuminates_vertex(v, u)
    b = hemisphere_separates(cap_from_vertex(v), -u)
    assume(not a.undecided and not b.undecided)
    assert a.value == b.value


@settings(max_examples=200, deadline=None)
@given(unit3(), unit3(), st.floats(0.05, 1.5), st.floats(0.0, 1.0))
def test_separation_monotone_in_radius(center, pole, r, shrink):
    if hemisphere_separates(Cap(center, r), pole):
        assert hemisphere_separates(Cap(center, max(r * shrink, 1e-3)), pole)


@pytest.mark.parametrize(
    "poles, covered, margin",
    [
        (AXES3, True, 1 / math.sqrt(3)),
        (I3, False, -1 / math.sqrt(3)),
        (np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3), True, 1 / 3),
        (np.vstack([np.eye(4), -np.eye(4)]), True, 0.5),
    ],
)
def test_cover_examples(poles, covered, margin):
    res = hemispheres_cover(poles)
    assert res.covered == covered
    assert res.margin == pytest.approx(margin, abs=1e-12)


def test_cover_witness_is_uncovered():
    res = hemispheres_cover(I3)
    assert np.allclose(res.witness, -np.ones(3) / math.sqrt(3))
    assert np.all(I3 @ res.witness <= 0)


def test_degenerate_cover_is_undecided():
    res = hemispheres_cover(np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0.0]]))
    assert not res.covered and res.undecided


def test_tetrahedron_cover_dense_grid():
    W = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
    G = sphere_grid(100_000, 3)
    assert np.all(np.max(G @ W.T, axis=1) > 0)


@pytest.mark.parametrize("dim", [3, 4])
def test_cover_agrees_with_grid_oracle_small(dim):
    G = sphere_grid(20_000, dim)
    for k in range(20):
        rng = np.random.default_rng([11, dim, k])
        W = random_unit(rng, dim, int(rng.integers(3, 11)))
        res = hemispheres_cover(W)
        if res.undecided:
            continue
        g = grid_cover_margin(W, G, ambiguous=0.3)
        assert res.covered == (g > 0)
        # the exact margin is the true minimum, so no grid point goes below it
        assert g >= res.margin - 1e-9


def test_pair_separable_examples():
    assert not pair_separable_by_one_hemisphere(Cap(I3[0], math.pi / 4), Cap(I3[1], math.pi / 4))
    assert pair_separable_by_one_hemisphere(Cap(I3[0], math.pi / 6), Cap(I3[1], math.pi / 6))
    assert not pair_separable_by_one_hemisphere(Cap(I3[0], math.pi / 4), Cap(-I3[0], math.pi / 4))


def test_pair_separable_bruteforce():
    G = sphere_grid(200_000, 3)
    # equality case: no pole reaches a positive margin for both
    assert best_common_pole(Cap(I3[0], math.pi / 4), Cap(I3[1], math.pi / 4), G) <= 1e-9
    # pole (e1 + e2)/sqrt2 separates two pi/6 caps
    w = (I3[0] + I3[1]) / math.sqrt(2)
    assert w @ I3[0] - 0.5 > 0 and w @ I3[1] - 0.5 > 0
    rng = np.random.default_rng(5)
    for _ in range(200):
        c1, c2 = Cap(random_unit(rng, 3), rng.uniform(0.05, 1.2)), Cap(random_unit(rng, 3), rng.uniform(0.05, 1.2))
        slack = math.pi - c1.radius - c2.radius - math.acos(np.clip(c1.center @ c2.center, -1, 1))
        if abs(slack) < 0.02:
            continue
        assert pair_separable_by_one_hemisphere(c1, c2) == (best_common_pole(c1, c2, G) > 0)


@pytest.mark.parametrize("packing", [Packing.from_arrays(AXES3, [math.pi / 4] * 6), octahedron_s2()])
def test_verify_octahedron_with_solver_directions(packing):
    sol = solve_central_s2(packing)
    cert = verify_illumination(CapBody.from_packing(packing), sol.directions)
    assert cert.valid
    assert min(cert.margins) == pytest.approx(1 - R2, abs=1e-12)


def test_verify_failures_and_success():
    body = CapBody(3, [[0, 0, 2.0]])
    cert = verify_illumination(body, [[0, 0, -1.0]])
    assert not cert.valid and cert.failure == "cover"
    assert cert.margins[0] == pytest.approx(1 - math.sin(math.pi / 3))
    cert = verify_illumination(body, AXES3)
    assert cert.valid and cert.assignment == [5]


def test_verify_names_worst_cap():
    p = octahedron_s2()
    cert = verify_illumination(p, AXES3)
    assert cert.failure == "separation"
    assert cert.worst_cap in range(2, 6)
    assert cert.margins[cert.worst_cap] == pytest.approx(0.0, abs=1e-12)


def test_separation_margins_shape():
    p = canned("sixteen-4t")
    dirs = DirectionSet(np.vstack([np.eye(4), -np.eye(4)]))
    M = separation_margins(p, dirs)
    assert M.shape == (16, 8)
    assert np.allclose(M.max(axis=1), 0.0)


def test_direction_set_validation():
    with pytest.raises(InvalidInputError):
        DirectionSet(np.zeros((0, 3)))
    with pytest.raises(InvalidInputError):
        DirectionSet([[1.0, 1.0, 0.0]])
    with pytest.raises(InvalidInputError):
        verify_illumination(Packing(3, ()), np.eye(4))
    d = DirectionSet.from_json({"directions": [[1.0, 0, 0]]})
    assert DirectionSet.from_json(d.to_json()).directions.tolist() == [[1.0, 0, 0]]


def test_certificate_json():
    cert = verify_illumination(canned("sixteen-4t"), np.vstack([np.eye(4), -np.eye(4)]))
    js = cert.to_json()
    assert js["valid"] is False and js["failure"] == "separation"
    assert set(js) >= {"assignment", "margins", "cover_ok", "cover_margin"}
