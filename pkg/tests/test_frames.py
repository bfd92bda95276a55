import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from homwill.exceptions import DegenerateProjectionError, NonCommutingPotentialError
from homwill.frames import (
    ConstantPotential,
    HomogeneousSphereData,
    arctan_ratio,
    base_vector,
    frame_plane,
    frame_sphere,
    frame_sphere_polar,
    homogeneity_residual,
    lightcone_project,
    orbit_base_frame,
    orbit_monodromy,
    orbit_point,
    polar_angle,
    sample_plane,
    sphere_immersion,
    torus_periods,
    torus_potential,
    veronese_monodromy,
)
from homwill.linalg import BilinearForm, expm, form_residual
from homwill.so3 import INFINITY, build_irreducible, direct_sum

from helpers import random_loop, random_orthogonal, random_skew

FORM6 = BilinearForm.minkowski(6)
seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def ver3():
    return veronese_monodromy(3)


# commuting potentials -------------------------------------------------------


def test_non_commuting_pair_is_rejected(rng):
    A, B = random_loop(rng, FORM6), random_loop(rng, FORM6)
    with pytest.raises(NonCommutingPotentialError):
        ConstantPotential(A, B)


def test_plane_frame_at_origin_and_group_law():
    pot = torus_potential(1.0, 2.0)
    assert np.array_equal(frame_plane(pot, 0.0, 0.0), np.eye(6))
    F = frame_plane(pot, 0.4, -1.1, 0.3) @ frame_plane(pot, 0.7, 0.5, 0.3)
    assert np.abs(F - frame_plane(pot, 1.1, -0.6, 0.3)).max() < 1e-13


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-1.4, 1.4))
def test_plane_frame_preserves_form(u, v, theta):
    assert form_residual(frame_plane(torus_potential(1.3, 0.7), u, v, theta), FORM6) < 1e-12


@pytest.mark.parametrize("theta", [0.0, 0.6, -1.0])
def test_torus_closes_after_its_periods(theta):
    a, b = 1.0, 1.7
    pot = torus_potential(a, b)
    Tu, Tv = torus_periods(a, b, theta)
    x0 = lightcone_project(frame_plane(pot, 0.3, 0.2, theta))
    for du, dv in ((Tu, 0.0), (0.0, Tv), (Tu, Tv)):
        x = lightcone_project(frame_plane(pot, 0.3 + du, 0.2 + dv, theta))
        assert np.abs(x - x0).max() < 1e-12
    x = lightcone_project(frame_plane(pot, 0.3 + Tu / 2, 0.2, theta))
    assert np.abs(x - x0).max() > 0.1


def test_torus_is_a_clifford_torus():
    pts = sample_plane(torus_potential(), np.random.default_rng(3).uniform(-7, 7, (50, 2)))
    e = np.eye(5)
    f, g = (e[0] + e[1]) / math.sqrt(2), (e[0] - e[1]) / math.sqrt(2)
    assert np.abs(np.linalg.norm(pts, axis=1) - 1).max() < 1e-13
    assert np.abs(pts[:, 2]).max() < 1e-13
    assert np.abs((pts @ f) ** 2 + pts[:, 3] ** 2 - 0.5).max() < 1e-13
    assert np.abs((pts @ g) ** 2 + pts[:, 4] ** 2 - 0.5).max() < 1e-13


# sphere frames ----------------------------------------------------------------


def test_arctan_ratio_series_branch():
    assert arctan_ratio(0.0) == 1.0
    for r in (1e-9, 5e-5, 9.99e-5):
        assert abs(arctan_ratio(r) - math.atan(r) / r) < 1e-15
    assert abs(arctan_ratio(1e-4 * (1 - 1e-12)) - arctan_ratio(1e-4)) < 1e-15


def test_polar_angle_branches():
    assert polar_angle(1j) == pytest.approx(math.pi / 2)
    assert polar_angle(-1j) == pytest.approx(-math.pi / 2)
    assert polar_angle(-1 + 0j) == pytest.approx(math.pi)
    assert polar_angle(2.0) == 0.0


def test_sphere_frame_at_origin_is_identity(ver3):
    assert np.array_equal(frame_sphere(ver3, 0.0), np.eye(ver3.form.dimension))
    assert np.array_equal(frame_sphere_polar(ver3, 0.0), np.eye(ver3.form.dimension))


@pytest.mark.parametrize("z", [0.3, -2.0, 0.5j, 1 - 1j, -3 + 0.2j, 1e-6 - 1e-6j, 40j])
@pytest.mark.parametrize("theta", [0.0, 1.0, 2.5])
def test_polar_and_exponential_forms_agree(ver3, z, theta):
    F = frame_sphere(ver3, z, theta)
    G = frame_sphere_polar(ver3, z, theta)
    assert np.abs(F - G).max() < 1e-11 * max(1.0, np.abs(F).max())


def test_real_axis_frame_reduces_to_single_exponential(ver3):
    u = 0.8
    expected = expm(-2 * math.atan(u) * ver3.A2.value(0.0).real)
    assert np.abs(frame_sphere(ver3, u) - expected).max() < 1e-13


@given(st.complex_numbers(max_magnitude=100), st.floats(-3, 3))
def test_sphere_frame_preserves_form(z, theta):
    data = veronese_monodromy(2)
    assert form_residual(frame_sphere(data, z, theta), data.form) < 1e-9


# projection -------------------------------------------------------------------


def test_projection_of_identity():
    assert np.array_equal(lightcone_project(np.eye(5)), [1, 0, 0, 0])
    assert np.array_equal(lightcone_project(np.eye(5), base_vector(5, -1)), [-1, 0, 0, 0])


@given(seeds, st.floats(0.0, 3.0))
def test_projection_lands_on_unit_sphere(seed, norm):
    rng = np.random.default_rng(seed)
    X = random_skew(rng, FORM6)
    F = expm(X * norm / np.linalg.norm(X))
    assert abs(np.linalg.norm(lightcone_project(F)) - 1) < 1e-10
    assert abs(np.linalg.norm(lightcone_project(F, base_vector(6, -1))) - 1) < 1e-10


def test_degenerate_projection_raises():
    F = np.eye(3)
    F[0, 0] = -1
    with pytest.raises(DegenerateProjectionError):
        lightcone_project(F)


@given(seeds, st.floats(-3, 3))
def test_projection_ignores_stabiliser(seed, t):
    rng = np.random.default_rng(seed)
    F = expm(random_skew(rng, FORM6))
    boost = scipy.linalg.block_diag(expm(t * np.array([[0.0, 1.0], [1.0, 0.0]])), random_orthogonal(rng, 4))
    assert np.abs(lightcone_project(F @ boost) - lightcone_project(F)).max() < 1e-10


# homogeneity and orbit data ---------------------------------------------------


def test_homogeneity(ver3):
    grid = [0.3, 0.5 + 0.2j, -1 + 1j, 2j]
    assert homogeneity_residual(ver3, 0.0, grid) == 0.0
    assert homogeneity_residual(ver3, math.pi / 3, grid) < 1e-10
    assert homogeneity_residual(ver3, 2 * math.pi, grid) < 1e-10
    assert homogeneity_residual(ver3, 1.0, grid, lambda_theta=0.7) < 1e-10


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_veronese_data_satisfies_relations(m):
    data = veronese_monodromy(m)
    assert max(data.commutation_residuals()) < 1e-12
    assert data.a3_in_fixed_algebra() < 1e-14
    assert data.form.dimension == 2 * m + 2
    F0 = data.base_frame
    assert form_residual(F0, data.form) < 1e-12
    assert np.linalg.det(F0) == pytest.approx(1.0)


@pytest.mark.parametrize("m", [1, 2, 4])
def test_orbit_immersion_matches_orbit_map(m):
    rep = build_irreducible(m)
    data = veronese_monodromy(m)
    y0 = np.eye(rep.dim)[-1]
    for z in (0.0, 0.4 - 0.3j, -2 + 1j, 7j, INFINITY):
        assert np.abs(sphere_immersion(data, z) - orbit_point(rep, y0, z)).max() < 1e-10


def test_non_minimal_orbit_is_rejected():
    rep = direct_sum([build_irreducible(1), build_irreducible(2)])
    y0 = np.zeros(8)
    y0[2], y0[7] = 1.0, 1.0
    with pytest.raises(ValueError, match="minimal"):
        orbit_base_frame(rep, y0)
    with pytest.raises(ValueError, match="fixed"):
        orbit_base_frame(build_irreducible(2), np.ones(5))
    with pytest.raises(ValueError):
        orbit_monodromy(build_irreducible(0))


def test_monodromy_json_round_trip(ver3):
    back = HomogeneousSphereData.from_json(ver3.to_json())
    assert np.array_equal(back.A1.coeffs, ver3.A1.coeffs)
    assert np.array_equal(back.A3.entries, ver3.A3.entries)


def test_monodromy_json_validation(ver3):
    obj = ver3.to_json()
    obj["A2"] = ver3.A1.to_json()
    with pytest.raises(ValueError, match="relations"):
        HomogeneousSphereData.from_json(obj)
    HomogeneousSphereData.from_json(obj, validate=False)
    with pytest.raises(ValueError):
        HomogeneousSphereData.from_json({"A1": obj["A1"]})


def test_conjugated_data_still_closes(ver3, rng):
    N = ver3.form.dimension
    g = scipy.linalg.block_diag(np.eye(1), random_orthogonal(rng, 3), random_orthogonal(rng, N - 4))
    assert max(ver3.conjugate_by(g).commutation_residuals()) < 1e-12
