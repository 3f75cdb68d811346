import time

import numpy as np
import pytest

from oracles import PolygonVolume3D, grid_search_minimizer
from sasaki_forge.cone_model import PRESETS, build_cone, gorenstein_point, preset_cone, volume_functional
from sasaki_forge.errors import (
    EmptyInterior,
    MaxIterationsExceeded,
    UnboundedSlice,
    ValidationError,
    ZeroLeadingComponent,
)
from sasaki_forge.reeb_minimizer import (
    Regularity,
    _tangent_basis,
    classify_regularity,
    fd_gradient,
    initial_reeb,
    minimize_volume,
    tangent_gradient,
    volume_on_hyperplane,
)

DP1_EXACT = np.array([3.0, 4 - np.sqrt(13), 4 - np.sqrt(13)])


@pytest.fixture(scope="module")
def dp1_result():
    return minimize_volume(preset_cone("delpezzo1"))


# -- initial_reeb -------------------------------------------------------------


@pytest.mark.parametrize("name, xi", [("quadrant", (1, 1)), ("simplex3", (1, 1, 1))])
def test_initial_reeb_trivial(name, xi):
    assert np.allclose(initial_reeb(preset_cone(name)).xi, xi)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_initial_reeb_is_interior_and_on_hyperplane(name):
    cone = preset_cone(name)
    xi = np.asarray(initial_reeb(cone))
    beta = np.asarray(gorenstein_point(cone))
    assert np.all(cone.ray_array @ xi > 0)
    assert xi @ beta == pytest.approx(cone.n, rel=1e-12)


def test_initial_reeb_falls_back_to_chebyshev_centre():
    # beta = (1, 0) and 2 beta / |beta|^2 = (2, 0) is orthogonal to the ray (0, 1)
    cone = build_cone(((1, 0), (1, 2)))
    beta = np.asarray(gorenstein_point(cone))
    naive = cone.n * beta / (beta @ beta)
    assert np.min(cone.ray_array @ naive) == 0
    xi = np.asarray(initial_reeb(cone))
    assert np.all(cone.ray_array @ xi > 1e-9)
    assert xi @ beta == pytest.approx(cone.n, rel=1e-12)
    res = minimize_volume(cone)
    assert res.criticality_residual <= 1e-10


def test_empty_interior_for_a_hyperplane_missing_the_dual_cone():
    from fractions import Fraction

    from sasaki_forge.cone_model import GorensteinPoint

    bogus = GorensteinPoint((Fraction(-1), Fraction(-1)))
    with pytest.raises(EmptyInterior):
        initial_reeb(preset_cone("quadrant"), bogus)


# -- minimize_volume ----------------------------------------------------------


def test_quadrant_minimizer():
    res = minimize_volume(preset_cone("quadrant"))
    assert np.allclose(res.xi_star.xi, (1, 1), atol=1e-10)
    assert res.criticality_residual < 1e-10
    assert res.volume == pytest.approx(4.0, rel=1e-12)


def test_simplex_minimizer():
    res = minimize_volume(preset_cone("simplex3"))
    assert np.allclose(res.xi_star.xi, (1, 1, 1), atol=1e-10)
    assert res.volume == pytest.approx(27.0, rel=1e-12)


def test_conifold_minimizer_rational():
    res = minimize_volume(preset_cone("conifold"))
    assert np.allclose(res.xi_star.xi, (3, 1.5, 1.5), atol=1e-9)
    assert res.regularity.kind is Regularity.RATIONAL
    assert res.regularity.integer_direction == (2, 1, 1)


def test_delpezzo1_matches_grid_oracle(dp1_result):
    oracle = grid_search_minimizer(PRESETS["delpezzo1"])
    assert np.max(np.abs(np.asarray(dp1_result.xi_star) - oracle)) < 1e-3
    # and the closed form (3, 4 - sqrt 13, 4 - sqrt 13)
    assert np.allclose(dp1_result.xi_star.xi, DP1_EXACT, atol=1e-9)
    assert dp1_result.regularity.kind is Regularity.IRRATIONAL
    assert dp1_result.regularity.denominator_bound == 10**4


def test_oracle_volume_agrees_with_library():
    vol = PolygonVolume3D(PRESETS["delpezzo1"])
    cone = preset_cone("delpezzo1")
    for xi in ([3, 0.4, 0.4], [3, 0.2, 0.7], [3, 1.0, -0.3]):
        assert vol(xi) == pytest.approx(volume_functional(cone, xi), rel=1e-12)


@pytest.mark.parametrize("name", sorted(PRESETS))
@pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-12])
def test_result_invariants(name, tol):
    cone = preset_cone(name)
    res = minimize_volume(cone, tol=tol)
    beta = np.asarray(gorenstein_point(cone))
    assert res.criticality_residual <= tol
    assert np.asarray(res.xi_star) @ beta == pytest.approx(cone.n, rel=1e-12)
    assert res.tol == tol


@pytest.mark.parametrize("tol", [1e-13, 1e-3, 0.0])
def test_tol_range(tol):
    with pytest.raises(ValidationError):
        minimize_volume(preset_cone("quadrant"), tol=tol)


def test_iteration_cap():
    with pytest.raises(MaxIterationsExceeded):
        minimize_volume(preset_cone("delpezzo1"), tol=1e-12, max_iter=1)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_first_variation_matches_barycenter_criterion(name):
    cone = preset_cone(name)
    tol = 1e-10
    res = minimize_volume(cone, tol=tol)
    basis = _tangent_basis(np.asarray(gorenstein_point(cone)))
    g = fd_gradient(cone, res.xi_star, basis)
    assert np.linalg.norm(g) / res.volume <= 10 * tol
    assert res.criticality_residual <= tol


def test_fd_gradient_agrees_with_barycenter_identity():
    cone = preset_cone("delpezzo1")
    basis = _tangent_basis(np.asarray(gorenstein_point(cone)))
    xi = np.array([3.0, 0.2, 0.7])
    _, g_exact, _ = tangent_gradient(cone, xi, basis)
    g_fd = fd_gradient(cone, xi, basis)
    assert np.allclose(g_fd, g_exact, rtol=1e-7, atol=1e-8)


def test_not_critical_away_from_minimum():
    cone = preset_cone("delpezzo1")
    basis = _tangent_basis(np.asarray(gorenstein_point(cone)))
    g = fd_gradient(cone, np.array([3.0, 0.2, 0.7]), basis)
    assert np.linalg.norm(g) > 1e-2


def test_convexity_probe():
    cone = preset_cone("delpezzo1")
    rng = np.random.default_rng(2024)
    count = 0
    while count < 100:
        a = np.array([3.0, *rng.uniform(-1.5, 2.0, 2)])
        b = np.array([3.0, *rng.uniform(-1.5, 2.0, 2)])
        if not (np.all(cone.ray_array @ a > 0) and np.all(cone.ray_array @ b > 0)):
            continue
        va, vb = volume_functional(cone, a), volume_functional(cone, b)
        vm = volume_functional(cone, 0.5 * (a + b))
        assert vm <= 0.5 * (va + vb) + 1e-9
        count += 1


def test_permutation_of_input_normals_is_bitwise_stable():
    normals = PRESETS["delpezzo1"]
    a = minimize_volume(build_cone(normals))
    b = minimize_volume(build_cone(normals[::-1]))
    c = minimize_volume(build_cone((normals[2], normals[0], normals[3], normals[1])))
    assert a.xi_star.xi == b.xi_star.xi == c.xi_star.xi


@pytest.mark.parametrize("name, perm", [("delpezzo1", (0, 2, 1)), ("conifold", (0, 2, 1)), ("simplex3", (1, 2, 0))])
def test_symmetry_equivariance(name, perm):
    cone = preset_cone(name)
    permuted = {tuple(v[i] for i in perm) for v in cone.normals}
    assert permuted == set(cone.normals)
    xi = np.asarray(minimize_volume(cone).xi_star)
    assert np.allclose(xi[list(perm)], xi, atol=1e-9)


def test_delpezzo1_runtime(dp1_result):
    t0 = time.perf_counter()
    minimize_volume(preset_cone("delpezzo1"))
    assert time.perf_counter() - t0 < 5.0


# -- classify_regularity ------------------------------------------------------


@pytest.mark.parametrize(
    "xi, direction",
    [((1, 1), (1, 1)), ((3, 1.5, 1.5), (2, 1, 1)), ((2, 3), (2, 3)), ((0.7, 0.3, 2.0), (7, 3, 20))],
)
def test_rational_directions(xi, direction):
    r = classify_regularity(xi)
    assert r.kind is Regularity.RATIONAL
    assert r.integer_direction == direction


@pytest.mark.parametrize("xi", [(1, np.sqrt(2)), (3, 4 - np.sqrt(13), 4 - np.sqrt(13)), (1, np.pi, np.e)])
def test_irrational_directions(xi):
    r = classify_regularity(xi, 10**4)
    assert r.kind is Regularity.IRRATIONAL
    assert r.denominator_bound == 10**4


def test_denominator_bound_matters():
    xi = (1, 12345 / 10007)
    assert classify_regularity(xi, 10**3).kind is Regularity.IRRATIONAL
    assert classify_regularity(xi, 10**5).kind is Regularity.RATIONAL


def test_zero_leading_component():
    with pytest.raises(ZeroLeadingComponent):
        classify_regularity((0, 1))


def test_volume_on_hyperplane_rejects_off_plane_points():
    cone = preset_cone("quadrant")
    assert volume_on_hyperplane(cone, (1.5, 0.5)) == pytest.approx(4 / 0.75)
    with pytest.raises(UnboundedSlice):
        volume_on_hyperplane(cone, (1.0, 1.5))


def test_result_json_keys(dp1_result):
    out = dp1_result.to_json()
    assert set(out) == {"xi", "volume", "residual", "regularity", "iterations", "tol"}
    assert out["regularity"]["kind"] == "IrrationalDirection"
