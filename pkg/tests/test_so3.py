import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homwill.exceptions import DecompositionError
from homwill.linalg import expm
from homwill.so3 import (
    INFINITY,
    ambient,
    build_irreducible,
    decompose,
    decompose_profile,
    decompose_report,
    direct_sum,
    is_irreducible_ambient,
    mobius_act,
    moebius,
    su2_element,
    su2_generator,
    trivial,
    weights,
)

from helpers import random_orthogonal


@pytest.mark.parametrize("ell", range(0, 11))
def test_irreducible_relations(ell):
    rep = build_irreducible(ell)
    assert rep.dim == 2 * ell + 1
    assert rep.commutation_residual() < 1e-12
    assert rep.skew_residual() == 0.0
    assert weights(rep) == {k: 1 for k in range(-ell, ell + 1)}
    assert np.abs(rep.casimir() + ell * (ell + 1) * np.eye(rep.dim)).max() < 1e-10


@pytest.mark.parametrize("ell", [1, 3, 6])
def test_full_turn_is_identity(ell):
    rep = build_irreducible(ell)
    for X in rep:
        assert np.abs(expm(2 * math.pi * X) - np.eye(rep.dim)).max() < 1e-12


def test_zero_weight_vector_is_last():
    rho3 = build_irreducible(3).rho3
    assert not rho3[-1].any() and not rho3[:, -1].any()


def test_spin1_acts_as_rotations_of_space():
    rep = build_irreducible(1)
    # spin 1 is the adjoint: generators are real skew 3x3 with unit rotation speed
    for X in rep:
        assert np.allclose(np.sort(np.abs(np.linalg.eigvals(X))), [0, 1, 1])


def test_direct_sum_and_ambient():
    rep = direct_sum([build_irreducible(1), build_irreducible(2)])
    assert weights(rep) == {-2: 1, -1: 2, 0: 2, 1: 2, 2: 1}
    assert decompose(rep) == [2, 1]
    amb = ambient([2])
    assert amb.dim == 6 and not amb.rho1[0].any()
    assert is_irreducible_ambient(amb)
    assert not is_irreducible_ambient(ambient([1, 1]))
    assert not is_irreducible_ambient(direct_sum([trivial(2), build_irreducible(2)]))


def test_decompose_examples():
    assert decompose_profile({0: 3, 1: 2, -1: 2, 2: 1, -2: 1}) == [2, 1, 0]
    assert decompose_profile({0: 1}) == [0]
    with pytest.raises(DecompositionError):
        decompose_profile({1: 1, -1: 1})
    with pytest.raises(DecompositionError):
        decompose_profile({1: 2, -1: 1, 0: 2})


def test_decompose_report_shape():
    rep = decompose_report(ambient([3]))
    assert rep["summands"] == [3, 0] and rep["irreducible_ambient"]


@given(st.lists(st.integers(0, 5), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_decomposition_survives_orthogonal_change_of_basis(spins, seed):
    rep = direct_sum([build_irreducible(l) for l in spins])
    Q = random_orthogonal(np.random.default_rng(seed), rep.dim)
    conj = rep.conjugate(Q)
    assert conj.commutation_residual() < 1e-10
    assert decompose(conj) == sorted(spins, reverse=True)


# Moebius side ---------------------------------------------------------------


def test_su2_generators_close_like_rho():
    T1, T2, T3 = (su2_generator(i) for i in (1, 2, 3))
    assert np.allclose(T1 @ T2 - T2 @ T1, T3)
    assert np.allclose(T2 @ T3 - T3 @ T2, T1)
    assert np.allclose(T3 @ T1 - T1 @ T3, T2)


@pytest.mark.parametrize("index", [1, 2, 3])
@pytest.mark.parametrize("t", [0.0, 0.4, -2.0, 3 * math.pi / 2])
def test_su2_element_is_exponential(index, t):
    assert np.abs(su2_element(index, t) - expm(t * su2_generator(index))).max() < 1e-14


def test_mobius_fixed_points():
    assert mobius_act(3, 1.0, 0) == 0
    assert mobius_act(3, 0.3, INFINITY) == INFINITY
    assert abs(mobius_act(3, 1.2, 2.0) - 2.0 * cmath.exp(-1.2j)) < 1e-14
    assert abs(mobius_act(2, math.pi, 0.0)) > 1e15  # cos(pi/2) is not exactly zero
    assert abs(mobius_act(2, math.pi, INFINITY)) < 1e-15


@pytest.mark.parametrize("index, speed", [(1, -0.5j), (2, -0.5), (3, 0.0)])
def test_mobius_velocity_at_origin(index, speed):
    h = 1e-6
    v = (mobius_act(index, h, 0) - mobius_act(index, -h, 0)) / (2 * h)
    assert abs(v - speed) < 1e-9


@given(st.integers(1, 3), st.floats(-6, 6), st.floats(-6, 6), st.complex_numbers(max_magnitude=50))
def test_mobius_group_law(index, s, t, z):
    lhs = mobius_act(index, s, mobius_act(index, t, z))
    rhs = mobius_act(index, s + t, z)
    if cmath.isinf(lhs) or cmath.isinf(rhs):
        return
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs)) ** 2


def test_moebius_rejects_bad_index():
    with pytest.raises(ValueError):
        su2_element(4, 0.0)
    with pytest.raises(ValueError):
        build_irreducible(-1)
    assert moebius(np.array([[1, 0], [1, 0]]), 0.0) == INFINITY
