import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from homwill.exceptions import LatticeRoundingError, WillmoreConditionError
from homwill.frames import HomogeneousSphereData, orbit_monodromy, veronese_monodromy
from homwill.linalg import BilinearForm, LieMatrix, skew_eigenstructure
from homwill.loops import LaurentLoop
from homwill.so3 import build_irreducible, direct_sum, trivial
from homwill.wu import (
    E0,
    Q1,
    Q2,
    CoefficientSplit,
    NormalizedPotential,
    analyze,
    assemble_split,
    canonicalize_A3,
    check_comm_lemma,
    eval_xi,
    extract_blocks,
    hol_mc,
    hyperbolic_rotation,
    isotropy_residual,
    lorentz_normalize,
    minimality_certificate,
    split_and_potential,
    xi_loop,
)

from helpers import random_orthogonal


@pytest.fixture(scope="module", params=[1, 2, 3, 4, 5])
def veronese_case(request):
    m = request.param
    data = veronese_monodromy(m)
    split, pot = split_and_potential(data.A1, data.A2)
    return m, data, split, pot


def blocks_of(data):
    split = CoefficientSplit.from_loops(data.A1, data.A2)
    return extract_blocks(split, data.A3)


def test_displayed_constants():
    assert Q1.tolist() == [[1, -1j], [-1, 1j]]
    assert Q2.tolist() == [[1, -1j], [1j, 1]]
    assert E0.tolist() == [1, -1j]


# holomorphic part and splitting -------------------------------------------------


def test_hol_mc_degenerate_substitution():
    data = veronese_monodromy(2)
    fake = HomogeneousSphereData(data.A2 * 1j, data.A2, data.A3)
    assert np.abs(hol_mc(fake)[-1] + 2 * data.A2[-1]).max() < 1e-15


def test_hol_mc_of_zero_data():
    form = BilinearForm.minkowski(6)
    zero = LaurentLoop.zeros(form, (4, 2), 1)
    loop = hol_mc(HomogeneousSphereData(zero, zero, LieMatrix(np.zeros((6, 6)), form)))
    assert not np.abs(loop.coeffs).any()


def test_veronese_is_willmore(veronese_case):
    _, data, split, pot = veronese_case
    assert np.linalg.norm(hol_mc(data, check=True)[1]) < 1e-10
    assert split.willmore_residual() < 1e-12
    assert np.abs(pot.beta1_coeff - 2j * split.H1).max() < 1e-12


def test_reflected_data_is_not_willmore():
    data = veronese_monodromy(3)
    bad = HomogeneousSphereData(data.A1.reflected(), data.A2.reflected(), data.A3)
    assert max(bad.commutation_residuals()) < 1e-12
    with pytest.raises(WillmoreConditionError):
        hol_mc(bad, check=True)
    with pytest.raises(WillmoreConditionError):
        split_and_potential(bad.A1, bad.A2)
    report = analyze(bad)
    assert report["willmore"] is False and report["minimal_certificate"] is False


def test_split_reconstructs_loops(veronese_case):
    _, data, split, _ = veronese_case
    A1, A2 = split.loops()
    assert np.array_equal(A1.coeffs, data.A1.coeffs)
    assert np.array_equal(A2.coeffs, data.A2.coeffs)


def test_split_rejects_wide_loops():
    data = veronese_monodromy(2)
    with pytest.raises(ValueError):
        CoefficientSplit.from_loops(data.A1.padded(2) + LaurentLoop.from_dict({2: data.A1[-1] * 0 + 1e-3 * np.eye(6)}, data.form, validate=False), data.A2)


# normalized potential ----------------------------------------------------------


def test_potential_without_constant_part_is_constant():
    split, _ = assemble_split({1: 1}, 0.0, 0.0, a1=[0.7])
    assert np.abs(split.H0).max() == 0 and np.abs(split.L0).max() == 0
    _, pot = split_and_potential(*split.loops())
    X0 = eval_xi(pot, 0.0)
    for z in (1.0, -2 + 3j):
        assert np.array_equal(eval_xi(pot, z), X0)


def test_xi_at_origin_and_grading(veronese_case):
    _, data, _, pot = veronese_case
    assert np.array_equal(eval_xi(pot, 0), pot.beta1_coeff)
    loop = xi_loop(pot, 0.3j, data.form, data.split)
    assert np.array_equal(loop[-1], eval_xi(pot, 0.3j)) and not loop[1].any()


@given(st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_xi_exponential_law(z1, z2):
    data = veronese_monodromy(3)
    _, pot = split_and_potential(data.A1, data.A2)
    g = scipy.linalg.expm(z1 * pot.beta0)
    lhs = eval_xi(pot, z1 + z2)
    rhs = g @ eval_xi(pot, z2) @ np.linalg.inv(g)
    assert np.abs(lhs - rhs).max() < 1e-9 * max(1.0, np.abs(lhs).max())


def test_xi_derivative_at_origin(veronese_case):
    _, _, _, pot = veronese_case
    h = 1e-6
    fd = (eval_xi(pot, h) - eval_xi(pot, -h)) / (2 * h)
    exact = pot.beta0 @ pot.beta1_coeff - pot.beta1_coeff @ pot.beta0
    assert np.abs(fd - exact).max() < 1e-7 * max(1.0, np.abs(exact).max())


def test_xi_is_polynomial(veronese_case):
    _, data, _, pot = veronese_case
    N = data.form.dimension
    terms = [pot.beta1_coeff]
    while np.abs(terms[-1]).max() > 1e-12 and len(terms) <= 2 * N:
        X = terms[-1]
        terms.append(pot.beta0 @ X - X @ pot.beta0)
    assert np.abs(terms[-1]).max() <= 1e-12
    assert len(terms) - 2 <= 2 * (N - 1)
    for z in (0.4, -1 + 0.5j, 2j):
        series = sum(z**k / math.factorial(k) * T for k, T in enumerate(terms))
        assert np.abs(series - eval_xi(pot, z)).max() < 1e-9 * max(1.0, np.abs(series).max())


# commutation identities------------------------------------------------------------


def test_commutation_identities_vanish_on_zero_data():
    z = np.zeros((5, 5))
    split = CoefficientSplit(z, z, z, z, BilinearForm.minkowski(5), (4, 1))
    assert check_comm_lemma(split, z) == (0.0, 0.0, 0.0, 0.0)


def test_commutation_identities_on_veronese(veronese_case):
    _, data, split, _ = veronese_case
    assert max(check_comm_lemma(split, data.A3.entries)) < 1e-9


def test_commutation_identities_detect_scaled_l1(veronese_case):
    m, data, split, _ = veronese_case
    L1 = split.L1
    if m == 1:
        # no normal bundle, so L1 vanishes and scaling it changes nothing
        assert not L1.any()
        return
    scaled = CoefficientSplit(split.H1, split.H0, 2 * L1, split.L0, split.form, split.split)
    expected = 3 * np.linalg.norm(2j * (L1 @ L1.conj() - L1.conj() @ L1))
    r3 = check_comm_lemma(scaled, data.A3.entries)[2]
    assert r3 > 0.1
    assert r3 == pytest.approx(expected, abs=1e-9)


def test_commutation_identities_are_conjugation_invariant(rng):
    data = veronese_monodromy(3)
    good = CoefficientSplit.from_loops(data.A1, data.A2)
    bad = CoefficientSplit(good.H1, good.H0, 2 * good.L1, good.L0, good.form, good.split)
    N = data.form.dimension
    g = scipy.linalg.block_diag(np.eye(1), random_orthogonal(rng, 3), random_orthogonal(rng, N - 4))
    before = check_comm_lemma(bad, data.A3.entries)
    after = check_comm_lemma(bad.conjugate_by(g), g @ data.A3.entries @ g.T)
    assert max(before) > 0.1
    assert np.allclose(before, after, rtol=1e-12, atol=1e-12)


# canonical form of A3 ---------------------------------------------------------


def canonical(levels):
    _, A3 = assemble_split(levels, 0.0, 2.0)
    return A3.entries


def test_canonical_input_is_fixed():
    A = canonical({0: 1, 1: 2, 3: 1})
    Ac, C, dims = canonicalize_A3(A)
    assert np.abs(C - np.eye(A.shape[0])).max() < 1e-12
    assert np.abs(Ac - A).max() < 1e-12
    assert dims == {0: 2, 1: 4, 3: 2}


def test_single_level_two_block():
    A = np.zeros((6, 6))
    A[2:4, 2:4] = [[0, 1], [-1, 0]]
    A[4:, 4:] = 2 * np.array([[0, 1], [-1, 0]])
    assert canonicalize_A3(A)[2] == {2: 2}
    split, _ = assemble_split({2: 1}, 0.0, 2.0, c1=[0.5])
    blocks = extract_blocks(split, A)
    assert blocks.multiplicities == {0: 0, 1: 0, 2: 1}


def test_spin2_multiplicities_certify_irreducibility():
    blocks = blocks_of(veronese_monodromy(2))
    assert blocks.multiplicities == {0: 0, 1: 0, 2: 1}
    assert blocks.spatial_multiplicities == {0: 0, 1: 1, 2: 1}
    assert blocks.irreducible


def test_flat_normal_direction_breaks_irreducibility():
    rep = direct_sum([build_irreducible(2), trivial(1)])
    data = orbit_monodromy(rep, np.eye(6)[4])
    blocks = blocks_of(data)
    assert blocks.multiplicities[0] == 1 and not blocks.irreducible
    assert max(blocks.shape_residuals.values()) < 1e-9


@given(st.integers(0, 2**32 - 1), st.dictionaries(st.integers(0, 4), st.integers(1, 2), min_size=1, max_size=3))
def test_canonicalization_recovers_scrambled_form(seed, levels):
    rng = np.random.default_rng(seed)
    A = canonical(levels)
    n = A.shape[0] - 4
    O = scipy.linalg.block_diag(np.eye(4), random_orthogonal(rng, n))
    scrambled = O @ A @ O.T
    Ac, C, dims = canonicalize_A3(scrambled)
    assert dims == {j: 2 * k for j, k in levels.items()}
    assert np.abs(Ac - A).max() < 1e-9
    assert np.array_equal(C[:4, :4], np.eye(4)) and not C[:4, 4:].any()
    assert np.abs(C @ C.T - np.eye(n + 4)).max() < 1e-12
    assert skew_eigenstructure(Ac[4:, 4:]) == skew_eigenstructure(scrambled[4:, 4:])


def test_canonicalization_rejects_off_lattice_and_bad_shape():
    A = canonical({1: 1}).copy()
    A[4:, 4:] *= 1.5
    with pytest.raises(LatticeRoundingError):
        canonicalize_A3(A)
    B = canonical({1: 1}).copy()
    B[2:4, 2:4] = 0
    with pytest.raises(ValueError):
        canonicalize_A3(B)


# block data -----------------------------------------------------------------


def test_veronese_block_shapes(veronese_case):
    m, data, _, _ = veronese_case
    blocks = blocks_of(data)
    assert max(blocks.shape_residuals.values()) < 1e-9
    assert isotropy_residual(blocks) < 1e-9
    assert abs(blocks.identity_residual()) < 1e-10
    assert abs(blocks.c) ** 2 - abs(blocks.a) ** 2 == pytest.approx(m * (m + 1) / 2)
    if m >= 2:
        assert np.abs(blocks.c1) ** 2 == pytest.approx([(m - 1) * (m + 2) / 16])


def test_alternative_identity_form_leaves_residual_on_veronese():
    residuals = [blocks_of(veronese_monodromy(m)).printed_identity_residual() for m in (2, 3, 4, 5)]
    assert residuals == pytest.approx([1.0, 2.5, 4.5, 7.0])


def test_isotropy_examples():
    assert isotropy_residual(np.zeros((4, 3))) == 0.0
    B1 = np.zeros((4, 1), complex)
    B1[2:, 0] = E0
    assert isotropy_residual(B1) == 0.0
    B1[0, 0] = 1.0
    assert isotropy_residual(B1) > 0


@given(
    st.integers(0, 2**32 - 1),
    st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 1),
)
def test_synthetic_blocks_round_trip(seed, n0, n1, n2, n3):
    rng = np.random.default_rng(seed)
    cplx = lambda k: rng.normal(size=k) + 1j * rng.normal(size=k)  # noqa: E731
    levels = {j: k for j, k in enumerate((n0, n1, n2, n3)) if k}
    q = {j: rng.normal(size=(levels[j], levels[j + 1])) + 0j for j in levels if j + 1 in levels}
    a, c = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    a1, b, bhat, c1 = cplx(n1), cplx(n0), cplx(n0), cplx(n2)
    split, A3 = assemble_split(levels, a, c, a1, b, bhat, c1, q)
    blocks = extract_blocks(split, A3)
    assert blocks.a == pytest.approx(a) and blocks.c == pytest.approx(c)
    for got, want in ((blocks.a1, a1), (blocks.b, b), (blocks.bhat, bhat), (blocks.c1, c1)):
        assert np.allclose(got, want, atol=1e-12)
    for j, coeffs in q.items():
        assert np.allclose(blocks.q[j], coeffs, atol=1e-12)
    assert max(blocks.shape_residuals.values()) < 1e-12
    s_b = np.sum(np.abs(b) ** 2 + np.abs(bhat) ** 2)
    expected = abs(c) ** 2 - abs(a) ** 2 - 1 - 8 * np.sum(np.abs(c1) ** 2) + 4 * s_b
    assert blocks.identity_residual() == pytest.approx(expected)


# Lorentz normalisation and the certificate ---------------------------------------


def test_zero_a_needs_no_boost():
    split, A3 = assemble_split({}, 0.0, 2.0)
    blocks = extract_blocks(split, A3)
    t, out = lorentz_normalize(blocks)
    assert t == 0.0 and out is blocks


def test_identity_residual_example():
    split, A3 = assemble_split({}, 3.0, 5.0)
    blocks = extract_blocks(split, A3)
    assert blocks.identity_residual() == pytest.approx(15.0)
    assert blocks.printed_identity_residual() == pytest.approx(15.0)


def test_boost_kills_a():
    split, A3 = assemble_split({2: 1}, 3.0, 5.0, c1=[0.4j])
    t, out = lorentz_normalize(extract_blocks(split, A3))
    assert math.tanh(t) == pytest.approx(-0.6)
    assert abs(out.a) < 1e-12
    assert abs(out.c) == pytest.approx(4.0)


def test_lorentz_normalize_errors():
    with pytest.raises(ValueError, match=r"\|c\|"):
        lorentz_normalize(extract_blocks(*assemble_split({}, 5.0, 3.0)))
    with pytest.raises(ValueError, match="not real"):
        lorentz_normalize(extract_blocks(*assemble_split({}, 1j, 3.0)))


def test_lorentz_normalize_is_idempotent(veronese_case):
    _, data, _, _ = veronese_case
    t1, once = lorentz_normalize(blocks_of(data))
    t2, twice = lorentz_normalize(once)
    assert t2 == 0.0 and twice is once
    assert hyperbolic_rotation(t1, 4)[0, 1] == pytest.approx(math.sinh(t1))


def test_certificate_examples():
    z = np.zeros((6, 6), complex)
    assert minimality_certificate(NormalizedPotential(z, z))
    leak = z.copy()
    leak[0, 3] = 1e-3
    assert not minimality_certificate(NormalizedPotential(leak, z))
    assert not minimality_certificate(NormalizedPotential(z, leak.T))


def test_normalized_veronese_is_certified_minimal(veronese_case):
    m, data, _, _ = veronese_case
    blocks = blocks_of(data)
    assert not minimality_certificate(blocks.potential)
    _, normal = lorentz_normalize(blocks)
    assert minimality_certificate(normal.potential, normal.split)


def test_analyze_report(veronese_case):
    m, data, _, _ = veronese_case
    rep = analyze(data)
    assert rep["willmore"] and rep["minimal_certificate"] and rep["irreducible"]
    assert rep["a_normalized"] < 1e-12
    assert len(rep["comm_residuals"]) == 4 and len(rep["xi_samples"]) == 4


@pytest.mark.parametrize("m", [2, 3])
def test_normalized_data_projects_to_a_minimal_surface(m):
    from homwill.frames import frame_sphere, lightcone_project
    from homwill.geometry import SurfaceGrid, measure
    from homwill.wu import normalize_monodromy

    data = veronese_monodromy(m)
    normal = normalize_monodromy(data)
    assert max(normal.commutation_residuals()) < 1e-9
    rep = analyze(normal)
    assert rep["lorentz_t"] == 0.0 and rep["minimal_certificate"]

    def surface(d):
        imm = lambda z: np.array([[lightcone_project(frame_sphere(d, w)) for w in row] for row in z])  # noqa: E731
        return measure(SurfaceGrid.from_map(imm, (-0.3, 0.3, -0.3, 0.3), 0.01))

    assert surface(normal).minimality < 1e-3
    assert surface(data).minimality > 0.1
