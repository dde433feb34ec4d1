import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import capbody.solver4d as s4
from capbody.caps import Cap, Packing
from capbody.errors import (
    InternalContradiction,
    InvalidInputError,
    InvalidPacking,
    NotUnconditional,
    UnrecognizedConfiguration,
)
from capbody.generate import canned
from capbody.illumination import hemispheres_cover
from capbody.solver4d import (
    CaseKind,
    detect_case,
    signed_permutations,
    solve_unconditional_s3,
    stranded_distance,
)

E = np.eye(4)
R2 = 1 / math.sqrt(2)
ALL_P = list(signed_permutations(4))


def check_solution(sol, packing):
    U = sol.directions.directions
    assert U.shape == (8, 4)
    assert np.allclose(U[4:], -U[:4])
    assert np.allclose(U[:4] @ U[:4].T, np.eye(4), atol=1e-12)
    assert sol.certificate.valid
    assert sol.certificate.cover_margin == pytest.approx(0.5)
    assert len(sol.certificate.margins) == len(packing)
    assert min(sol.certificate.margins, default=1.0) > 0


@pytest.mark.parametrize(
    "name, kind",
    [
        ("eight-2t", CaseKind.EIGHT_TWO_TANGENT),
        ("sixteen-4t", CaseKind.SIXTEEN_FOUR_TANGENT),
        ("four-2t", CaseKind.FOUR_TWO_TANGENT),
        ("eight-3t", CaseKind.EIGHT_THREE_TANGENT),
    ],
)
def test_canned_cases(name, kind):
    p = canned(name)
    sol = solve_unconditional_s3(p)
    assert sol.case.kind is kind
    assert np.array_equal(sol.case.axis_map, np.eye(4))
    check_solution(sol, p)


def test_sixteen_four_tangent_margins():
    sol = solve_unconditional_s3(canned("sixteen-4t"))
    # each normal (e_i +- e_j)/sqrt2 meets a cap centre at 1/sqrt2; sin(pi/6) = 1/2
    assert all(m == pytest.approx(R2 - 0.5, abs=1e-12) for m in sol.certificate.margins)


def test_empty_packing_uses_axes():
    sol = solve_unconditional_s3(Packing(4, ()))
    assert sol.case.kind is CaseKind.COORDINATE_AXES_SUFFICE
    assert np.allclose(sol.normals, E)


def test_small_axis_caps_use_axes():
    caps = [Cap(s * E[i], 0.4) for i in range(4) for s in (1, -1)]
    sol = solve_unconditional_s3(Packing(4, tuple(caps)))
    assert sol.case.kind is CaseKind.COORDINATE_AXES_SUFFICE
    check_solution(sol, Packing(4, tuple(caps)))


def test_permuted_four_two_tangent():
    caps = [Cap(np.array([0, a, b, 0.0]), math.pi / 4) for a in (R2, -R2) for b in (R2, -R2)]
    p = Packing(4, tuple(caps))
    sol = solve_unconditional_s3(p)
    assert sol.case.kind is CaseKind.FOUR_TWO_TANGENT
    P = sol.case.axis_map
    # canonical axes 0, 1 come from input axes 1, 2
    assert {int(np.argmax(np.abs(P[a]))) for a in (0, 1)} == {1, 2}
    h = round(R2, 9)
    lines = {tuple(np.round(np.abs(n), 9)) for n in sol.normals}
    assert lines == {(0, h, h, 0), (1, 0, 0, 0), (0, 0, 0, 1)}
    check_solution(sol, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["eight-2t", "sixteen-4t", "four-2t", "eight-3t"]), st.integers(0, len(ALL_P) - 1))
def test_equivariance_under_signed_permutations(name, k):
    Q = ALL_P[k]
    base = canned(name)
    p = Packing.from_arrays(base.centers @ Q.T, base.radii)
    sol = solve_unconditional_s3(p)
    assert sol.case.kind is detect_case(base).kind
    check_solution(sol, p)
    # the canonical pattern is recovered exactly by the reported axis map
    back = Packing.from_arrays(p.centers @ sol.case.axis_map.T, p.radii)
    assert detect_case(back).kind is sol.case.kind
    assert np.array_equal(detect_case(back).axis_map, np.eye(4))


def test_signed_permutations():
    assert len(ALL_P) == 384
    assert np.array_equal(ALL_P[0], np.eye(4))
    for P in ALL_P[::37]:
        assert np.allclose(P @ P.T, np.eye(4))


@pytest.mark.parametrize(
    "packing, exc",
    [
        (Packing(4, (Cap(np.full(4, 0.5), math.pi / 6),)), NotUnconditional),
        (Packing(3, (Cap(E[0, :3], 0.5), Cap(-E[0, :3], 0.5))), InvalidInputError),
        (
            Packing(4, tuple(Cap(s * E[i], 1.0) for i in range(4) for s in (1, -1))),
            InvalidPacking,
        ),
    ],
)
def test_invalid_inputs(packing, exc):
    with pytest.raises(exc):
        solve_unconditional_s3(packing)


def _skip_input_checks(monkeypatch):
    monkeypatch.setattr(s4, "_check_input", lambda packing, tol: None)


def test_overlapping_two_tangent_families_unrecognized(monkeypatch):
    # {0,1} and {1,2} families overlap as caps, so no valid packing reaches this branch
    _skip_input_checks(monkeypatch)
    caps = [Cap(np.array([R2, R2, 0, 0]), math.pi / 4), Cap(np.array([0, R2, R2, 0]), math.pi / 4)]
    with pytest.raises(UnrecognizedConfiguration):
        detect_case(Packing(4, tuple(caps)))


def test_unseparated_non_tangent_cap_rejected(monkeypatch):
    _skip_input_checks(monkeypatch)
    with pytest.raises(InvalidInputError, match="not k-tangent"):
        detect_case(Packing(4, (Cap(np.array([0.6, 0.8, 0, 0]), 1.0),)))


def test_contradiction_is_loud(monkeypatch):
    monkeypatch.setattr(s4, "greatsphere_separates", lambda cap, n, tol=None: False)
    monkeypatch.setattr(s4, "detect_case", lambda p, tol: s4.CaseId(CaseKind.FOUR_TWO_TANGENT, np.eye(4)))
    with pytest.raises(InternalContradiction):
        solve_unconditional_s3(canned("four-2t"))


@pytest.mark.parametrize("kind", list(CaseKind))
def test_canonical_normals_orthonormal_and_covering(kind):
    N = s4.CANONICAL_NORMALS[kind]
    assert np.allclose(N @ N.T, np.eye(4))
    assert hemispheres_cover(np.vstack([N, -N])).covered


@pytest.mark.parametrize("name, want", [("eight-2t", math.pi / 12), ("sixteen-4t", math.pi / 6)])
def test_stranded_distances(name, want):
    s = stranded_distance(canned(name), resolution=200_000)
    assert s.distance == pytest.approx(want, abs=1e-6)
    assert np.linalg.norm(s.point) == pytest.approx(1.0)


def test_sixteen_four_tangent_stranded_at_axis():
    s = stranded_distance(canned("sixteen-4t"), resolution=200_000)
    assert np.sort(np.abs(s.point))[-1] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("dim", [3, 4])
def test_stranded_single_cap(dim):
    c = np.eye(dim)[0]
    s = stranded_distance(Packing(dim, (Cap(c, math.pi / 4),)), resolution=20_000)
    assert s.distance == pytest.approx(3 * math.pi / 4, abs=1e-6)
    assert np.allclose(s.point, -c, atol=1e-4)


def test_stranded_empty_rejected():
    with pytest.raises(InvalidInputError):
        stranded_distance(Packing(4, ()))


def test_solution_json():
    js = solve_unconditional_s3(canned("eight-3t")).to_json()
    assert js["case"] == "EightThreeTangent"
    assert js["axis_map"] == np.eye(4, dtype=int).tolist()
    assert len(js["directions"]) == 8 and js["certificate"]["valid"]
