"""Normalized potentials of homogeneous Willmore spheres and their block structure.

Given loops ``A1 = l^-1 H1 + H0 + l conj(H1)`` and ``A2 = l^-1 L1 + L0 + l conj(L1)``
the holomorphic part of the Maurer-Cartan form is ``-A2 + i A1``; it has no
``l^1`` term exactly when ``L1 = -i H1``.  The normalized potential is then

    xi(z) = exp(z beta0) (l^-1 beta1) exp(-z beta0),
    beta0 = -L0 + i H0,   beta1 = -L1 + i H1 = 2i H1.

After conjugating ``A3`` into the canonical form ``diag(0_2, S, 1 S, 2 S, ...)``
by an element of the fixed group, the blocks of ``L1`` and ``beta0`` take the
rigid shapes built from ``Q1``, ``Q2`` and ``e0`` below; :class:`BlockData`
records the coefficients together with residuals against those shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import LatticeRoundingError, WillmoreConditionError
from .frames import HomogeneousSphereData
from .linalg import BilinearForm, LieMatrix, expm
from .loops import LaurentLoop, degree_window_check

Q1 = np.array([[1, -1j], [-1, 1j]])
Q2 = np.array([[1, -1j], [1j, 1]])
E0 = np.array([1, -1j])
S = np.array([[0.0, 1.0], [-1.0, 0.0]])
I11 = np.diag([-1.0, 1.0])
I13 = np.diag([-1.0, 1.0, 1.0, 1.0])

WILLMORE_TOL = 1e-9


def _fro(X) -> float:
    X = np.asarray(X)
    return float(np.linalg.norm(X)) if X.size else 0.0


def _comm(X, Y):
    return X @ Y - Y @ X


# splitting --------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSplit:
    H1: np.ndarray
    H0: np.ndarray
    L1: np.ndarray
    L0: np.ndarray
    form: BilinearForm
    split: tuple[int, int]

    @classmethod
    def from_loops(cls, A1: LaurentLoop, A2: LaurentLoop) -> "CoefficientSplit":
        for name, loop in (("A1", A1), ("A2", A2)):
            if not degree_window_check(loop):
                raise ValueError(f"{name} has powers of lambda outside -1..1")
        H0, L0 = A1[0], A2[0]
        if max(np.abs(H0.imag).max(initial=0), np.abs(L0.imag).max(initial=0)) > 1e-10:
            raise ValueError("constant coefficients must be real")
        return cls(A1[-1].copy(), H0.real.copy(), A2[-1].copy(), L0.real.copy(), A1.form, A1.split)

    def willmore_residual(self) -> float:
        """``|L1 + i H1|``, which vanishes for Willmore data."""
        return _fro(self.L1 + 1j * self.H1)

    def loops(self) -> tuple[LaurentLoop, LaurentLoop]:
        mk = lambda c1, c0: LaurentLoop.from_dict({-1: c1, 0: c0, 1: c1.conj()}, self.form, self.split, validate=False)  # noqa: E731
        return mk(self.H1, self.H0), mk(self.L1, self.L0)

    def conjugate_by(self, g: np.ndarray) -> "CoefficientSplit":
        gi = np.linalg.inv(g)
        c = lambda X: g @ X @ gi  # noqa: E731
        return replace(self, H1=c(self.H1), H0=c(self.H0).real, L1=c(self.L1), L0=c(self.L0).real)


@dataclass(frozen=True)
class NormalizedPotential:
    """``xi(z) = l^-1 exp(z beta0) beta1_coeff exp(-z beta0)``."""

    beta0: np.ndarray
    beta1_coeff: np.ndarray


def hol_mc(data: HomogeneousSphereData, check: bool = False, tol: float = 1e-10) -> LaurentLoop:
    """The loop ``-A2 + i A1``; with ``check`` a surviving ``l^1`` coefficient raises."""
    loop = LaurentLoop(((-1.0) * data.A2 + 1j * data.A1).coeffs, data.form, data.split)
    if check and np.linalg.norm(loop[1]) > tol:
        raise WillmoreConditionError(f"lambda^1 coefficient of -A2 + iA1 has norm {np.linalg.norm(loop[1]):.3e}")
    return loop


def split_and_potential(A1: LaurentLoop, A2: LaurentLoop, tol: float = WILLMORE_TOL):
    split = CoefficientSplit.from_loops(A1, A2)
    res = split.willmore_residual()
    if res > tol:
        raise WillmoreConditionError(f"|L1 + i H1| = {res:.3e} exceeds {tol:.1e}: not Willmore data")
    beta1 = -split.L1 + 1j * split.H1
    scale = max(1.0, _fro(split.H1))
    if _fro(beta1 - 2j * split.H1) > 4 * tol * scale:
        raise WillmoreConditionError("beta1 differs from 2i H1")
    return split, NormalizedPotential(-split.L0 + 1j * split.H0, beta1)


def eval_xi(pot: NormalizedPotential, z: complex) -> np.ndarray:
    """The ``l^-1`` coefficient of ``xi(z)``."""
    g = expm(z * pot.beta0)
    return g @ pot.beta1_coeff @ expm(-z * pot.beta0)


def xi_loop(pot: NormalizedPotential, z: complex, form: BilinearForm, split) -> LaurentLoop:
    X = eval_xi(pot, z)
    return LaurentLoop(np.stack([X, np.zeros_like(X), np.zeros_like(X)]), form, split)


def check_comm_lemma(split: CoefficientSplit, A3) -> tuple[float, float, float, float]:
    """Residuals of the four identities forced by the so(3) relations.

    1. ``[A3, L1] = -i L1`` and ``[A3, [A3, L1]] = -L1``
    2. the same for ``beta0 = -L0 + i H0``
    3. ``[H0, L0] + 2i [L1, conj L1] = A3``
    4. ``[conj L1, beta0] = 0``
    """
    A = np.asarray(A3)
    L1, b0 = split.L1, -split.L0 + 1j * split.H0

    def eigen(X):
        AX = _comm(A, X)
        return max(_fro(AX + 1j * X), _fro(_comm(A, AX) + X))

    return (
        eigen(L1),
        eigen(b0),
        _fro(_comm(split.H0, split.L0) + 2j * _comm(L1, L1.conj()) - A),
        _fro(_comm(L1.conj(), b0)),
    )


# canonical form of A3 ---------------------------------------------------------


def _minkowski_block_residual(A3: np.ndarray) -> float:
    target = np.zeros((4, 4))
    target[2:, 2:] = S
    return float(np.abs(A3[:4, :4] - target).max())


def canonicalize_A3(A3, lattice_tol: float = 1e-8):
    """Conjugate the so(n) block of ``A3`` to ``diag(0 S, 1 S, 2 S, ...)``.

    Levels ``j`` come from the eigenvalues ``j^2`` of ``-A^2``.  Inside each
    level the pairs ``(p, -A p / j)`` are built from the standard basis
    vectors in index order, so equal levels keep their original order.

    Returns ``(A3_canonical, C, dims)`` with ``A3_canonical = C A3 C^-1``,
    ``C = diag(I_4, O^t)`` and ``dims[j]`` the dimension of level ``j``.
    """
    A = np.asarray(A3, dtype=float)
    if np.abs(A[:4, 4:]).max(initial=0.0) > lattice_tol or np.abs(A[4:, :4]).max(initial=0.0) > lattice_tol:
        raise ValueError("A3 is not block diagonal")
    if _minkowski_block_residual(A) > lattice_tol:
        raise ValueError("leading 4x4 block of A3 must be diag(0, 0, S)")
    B = A[4:, 4:]
    n = B.shape[0]
    if n == 0:
        return A.copy(), np.eye(4), {}
    evals, evecs = np.linalg.eigh(-B @ B)
    # compare squares: a square root would blow 1e-16 noise at level 0 up to 1e-8
    levels = np.rint(np.sqrt(np.clip(evals, 0.0, None))).astype(int)
    bad = np.abs(evals - levels**2) > lattice_tol * max(1.0, evals.max())
    if bad.any():
        root = math.sqrt(max(evals[bad][0], 0.0))
        raise LatticeRoundingError(f"A3 has eigenvalue {root:.6g}i off the integer lattice")
    columns: list[np.ndarray] = []
    dims: dict[int, int] = {}
    for j in sorted(set(levels.tolist())):
        W = evecs[:, levels == j]
        dims[j] = W.shape[1]
        chosen: list[np.ndarray] = []
        for i in range(n):
            if len(chosen) == W.shape[1]:
                break
            v = W @ W[i]
            for q in chosen:
                v = v - (q @ v) * q
            norm = np.linalg.norm(v)
            if norm < 1e-6:
                continue
            p = v / norm
            if j == 0:
                chosen.append(p)
                continue
            q = -B @ p / j
            q = q - sum((c @ q) * c for c in chosen) - (p @ q) * p
            chosen += [p, q / np.linalg.norm(q)]
        columns += chosen
    O = np.array(columns).T
    C = np.eye(4 + n)
    C[4:, 4:] = O.T
    return C @ A @ C.T, C, dims


# block data -----------------------------------------------------------------


@dataclass(frozen=True)
class BlockData:
    """Block coefficients of ``L1`` and ``beta0`` in the canonical frame of ``A3``.

    ``n[j]`` counts the normal 2-planes on which ``A3`` acts with speed ``j``
    for ``j >= 1``; ``n[0]`` counts normal directions fixed by ``A3``, which
    need not pair up.  ``spatial_multiplicities`` also counts the tangent
    plane at level 1.
    """

    split: CoefficientSplit
    A3: np.ndarray
    conjugator: np.ndarray
    dims: dict[int, int]
    a: complex
    c: complex
    a1: np.ndarray
    b: np.ndarray
    bhat: np.ndarray
    c1: np.ndarray
    q: dict[int, np.ndarray]
    shape_residuals: dict[str, float] = field(default_factory=dict)

    @property
    def n(self) -> dict[int, int]:
        return {j: d if j == 0 else d // 2 for j, d in self.dims.items()}

    @property
    def multiplicities(self) -> dict[int, int]:
        """``n_j`` for ``0 <= j <= max level``, zeros included."""
        top = max(max(self.dims, default=1), 1)
        n = self.n
        return {j: n.get(j, 0) for j in range(0, top + 1)}

    @property
    def spatial_multiplicities(self) -> dict[int, int]:
        out = self.multiplicities
        out[1] = out.get(1, 0) + 1
        return out

    @property
    def irreducible(self) -> bool:
        return self.dims.get(0, 0) == 0

    @property
    def B1(self) -> np.ndarray:
        return self.split.L1[:4, 4:]

    @property
    def beta0(self) -> np.ndarray:
        return -self.split.L0 + 1j * self.split.H0

    @property
    def potential(self) -> NormalizedPotential:
        return NormalizedPotential(self.beta0, -self.split.L1 + 1j * self.split.H1)

    def identity_residual(self) -> float:
        """``|c|^2 - |a|^2 - 1 - 8 sum|c1|^2 + 4 sum(|b|^2 + |bhat|^2)``.

        Read off the tangent block of ``[H0, L0] + 2i [L1, conj L1] = A3``.
        """
        s_b = float(np.sum(np.abs(self.b) ** 2) + np.sum(np.abs(self.bhat) ** 2))
        s_c = float(np.sum(np.abs(self.c1) ** 2))
        return abs(self.c) ** 2 - abs(self.a) ** 2 - 1.0 - 8.0 * s_c + 4.0 * s_b

    def printed_identity_residual(self) -> float:
        """Residual of the variant ``|c|^2 - |a|^2 = 1 + 2 sum(|b|^2 + |bhat|^2 + 2|c1|^2)``."""
        s = float(np.sum(np.abs(self.b) ** 2 + np.abs(self.bhat) ** 2) + 2 * np.sum(np.abs(self.c1) ** 2))
        return abs(self.c) ** 2 - abs(self.a) ** 2 - 1.0 - 2.0 * s


def _level_slices(dims: dict[int, int]) -> dict[int, slice]:
    out, start = {}, 4
    for j in sorted(dims):
        out[j] = slice(start, start + dims[j])
        start += dims[j]
    return out


def _pattern_fit(block: np.ndarray, pattern: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares coefficients ``x_k`` with ``block[:, 2k:2k+2] ~ x_k pattern``."""
    width = pattern.shape[1] if pattern.ndim == 2 else 1
    pat = pattern.reshape(2, width)
    k = block.shape[1] // width
    coeffs = np.array([np.vdot(pat, block[:, width * i: width * (i + 1)]) / np.vdot(pat, pat) for i in range(k)])
    fitted = np.concatenate([c * pat for c in coeffs], axis=1) if k else block
    return coeffs, _fro(block - fitted)


def extract_blocks(split: CoefficientSplit, A3, lattice_tol: float = 1e-8) -> BlockData:
    """Canonicalize ``A3``, conjugate the split accordingly and read off all blocks."""
    A3c, C, dims = canonicalize_A3(A3, lattice_tol)
    sp = split.conjugate_by(C)
    sl = _level_slices(dims)
    B1 = sp.L1[:4, 4:]
    beta0 = -sp.L0 + 1j * sp.H0
    res: dict[str, float] = {}
    empty = np.zeros(0, complex)

    def cols(j):
        return B1[:, sl[j].start - 4: sl[j].stop - 4] if j in sl else np.zeros((4, 0), complex)

    res["B1j_off_level_1"] = math.hypot(*[0.0] + [_fro(cols(j)[:2]) for j in dims if j != 1])
    res["B2j_off_levels_0_2"] = math.hypot(*[0.0] + [_fro(cols(j)[2:]) for j in dims if j not in (0, 2)])
    a1, r = _pattern_fit(cols(1)[:2], Q1) if 1 in dims else (empty, 0.0)
    res["B11_shape"] = r
    if 0 in dims:
        be, r = _pattern_fit(cols(0)[2:], E0)
        b, bhat = be[0::2], be[1::2]
    else:
        b, bhat, r = empty, empty, 0.0
    res["B20_shape"] = r
    c1, r = _pattern_fit(cols(2)[2:], Q2) if 2 in dims else (empty, 0.0)
    res["B22_shape"] = r
    R00 = beta0[0:2, 2:4]
    a, c = complex(R00[0, 0]), complex(R00[1, 0])
    res["R00_shape"] = _fro(R00 - np.array([[a, -1j * a], [c, -1j * c]]))
    res["R11_R22"] = math.hypot(_fro(beta0[0:2, 0:2]), _fro(beta0[2:4, 2:4]))
    q: dict[int, np.ndarray] = {}
    off = 0.0
    for j in sl:
        for l in sl:
            if l < j:
                continue
            blk = beta0[sl[j], sl[l]]
            if l == j + 1:
                coeffs = np.array([[np.vdot(Q2, blk[2 * s: 2 * s + 2, 2 * t: 2 * t + 2]) / 4 for t in range(dims[l] // 2)]
                                   for s in range(dims[j] // 2)]).reshape(dims[j] // 2, dims[l] // 2)
                q[j] = coeffs
                fitted = np.kron(coeffs, Q2) if coeffs.size else blk
                off = math.hypot(off, _fro(blk - fitted))
            else:
                off = math.hypot(off, _fro(blk))
    res["Rjl_shape"] = off
    return BlockData(sp, A3c, C, dims, a, c, a1, b, bhat, c1, q, res)


def isotropy_residual(blocks_or_B1) -> float:
    """``|B1^t I_{1,3} B1|`` (bilinear, no conjugation)."""
    B1 = blocks_or_B1.B1 if isinstance(blocks_or_B1, BlockData) else np.asarray(blocks_or_B1)
    return _fro(B1.T @ I13 @ B1)


def hyperbolic_rotation(t: float, dim: int) -> np.ndarray:
    T = np.eye(dim)
    ch, sh = math.cosh(t), math.sinh(t)
    T[:2, :2] = [[ch, sh], [sh, ch]]
    return T


def lorentz_normalize(blocks: BlockData, tol: float = 1e-9) -> tuple[float, BlockData]:
    """Boost in the ``(e0, e1)`` plane killing the ``a`` entry: ``tanh t = -a/c``."""
    a, c = blocks.a, blocks.c
    if abs(c) <= abs(a):
        raise ValueError(f"|c| = {abs(c):.6g} <= |a| = {abs(a):.6g}; not data of a Willmore sphere")
    ratio = a / c
    if abs(ratio.imag) > tol:
        raise ValueError(f"a/c = {ratio} is not real")
    if abs(a) <= tol * abs(c):
        return 0.0, blocks
    t = math.atanh(-ratio.real)
    T = hyperbolic_rotation(t, blocks.A3.shape[0])
    sp = blocks.split.conjugate_by(T)
    A3 = T @ blocks.A3 @ np.linalg.inv(T)
    out = extract_blocks(sp, LieMatrix(A3.real, sp.form, tol=1e-8))
    return t, out


def timelike_leak(pot: NormalizedPotential) -> float:
    """Largest entry in the timelike row or column of ``beta0`` and ``beta1``."""
    return max(
        float(np.abs(X[0]).max(initial=0.0)) for X in (pot.beta0, pot.beta1_coeff, pot.beta0.T, pot.beta1_coeff.T)
    )


def minimality_certificate(pot: NormalizedPotential, split: CoefficientSplit | None = None, tol: float = 1e-9) -> bool:
    """True iff the potential lives in the complexified spatial so(n+3).

    Conjugation by ``exp(z beta0)`` preserves that subalgebra, so it suffices
    to look at ``beta0`` and ``beta1``.  With ``split`` the loop coefficients
    themselves are checked too.
    """
    if timelike_leak(pot) > tol:
        return False
    if split is not None:
        for X in (split.H0, split.L0, split.H1, split.L1):
            if max(np.abs(X[0]).max(initial=0.0), np.abs(X[:, 0]).max(initial=0.0)) > tol:
                return False
    return True


def normalize_monodromy(data: HomogeneousSphereData) -> HomogeneousSphereData:
    """Sphere data conjugated into the canonical frame of ``A3`` and boosted to ``a = 0``."""
    blocks = extract_blocks(CoefficientSplit.from_loops(data.A1, data.A2), data.A3)
    t, _ = lorentz_normalize(blocks)
    return data.conjugate_by(hyperbolic_rotation(t, data.form.dimension) @ blocks.conjugator)


# synthetic block data -------------------------------------------------------


def assemble_split(
    normal_levels: dict[int, int],
    a: complex,
    c: complex,
    a1=(),
    b=(),
    bhat=(),
    c1=(),
    q: dict[int, np.ndarray] | None = None,
) -> tuple[CoefficientSplit, LieMatrix]:
    """Split and canonical ``A3`` with prescribed block coefficients.

    ``normal_levels[j]`` is the number of normal 2-planes at level ``j``;
    coefficient arrays must have matching lengths (``q[j]`` has shape
    ``(n_j, n_{j+1})``).  ``H1 = i L1`` so the result is Willmore-shaped.
    """
    dims = {j: 2 * k for j, k in sorted(normal_levels.items()) if k}
    n = sum(dims.values())
    N = 4 + n
    sl = _level_slices(dims)
    A3 = np.zeros((N, N))
    A3[2:4, 2:4] = S
    for j, s in sl.items():
        A3[s, s] = j * np.kron(np.eye(dims[j] // 2), S)
    B1 = np.zeros((4, n), complex)

    def put(rows, j, blocks):
        if not len(blocks):
            return
        s = sl[j]
        B1[rows, s.start - 4: s.stop - 4] = np.concatenate(blocks, axis=1)

    put(slice(0, 2), 1, [x * Q1 for x in a1])
    put(slice(2, 4), 0, [np.stack([bb * E0, bh * E0], axis=1) for bb, bh in zip(b, bhat)])
    put(slice(2, 4), 2, [x * Q2 for x in c1])
    L1 = np.zeros((N, N), complex)
    L1[:4, 4:] = B1
    L1[4:, :4] = -B1.T @ I13
    beta0 = np.zeros((N, N), complex)
    R00 = np.array([[a, -1j * a], [c, -1j * c]])
    beta0[0:2, 2:4] = R00
    beta0[2:4, 0:2] = -R00.T @ I11
    for j, coeffs in (q or {}).items():
        blk = np.kron(np.asarray(coeffs), Q2)
        beta0[sl[j], sl[j + 1]] = blk
        beta0[sl[j + 1], sl[j]] = -blk.T
    form = BilinearForm.minkowski(N)
    split = CoefficientSplit(1j * L1, beta0.imag, L1, -beta0.real, form, (4, n))
    return split, LieMatrix(A3, form)


# pipeline -------------------------------------------------------------------


def analyze(data: HomogeneousSphereData, xi_points=(0.0, 0.5, 0.5j, -1.0 + 1.0j), tol: float = WILLMORE_TOL) -> dict:
    """Every residual of the pipeline on one data set, without thresholds.

    A failed Willmore condition is reported (``willmore`` false) rather than raised.
    """
    split = CoefficientSplit.from_loops(data.A1, data.A2)
    hol = hol_mc(data)
    out = {
        "L1_plus_iH1": split.willmore_residual(),
        "hol_mc_lambda1": float(np.linalg.norm(hol[1])),
        "comm_residuals": list(check_comm_lemma(split, data.A3)),
    }
    blocks = extract_blocks(split, data.A3)
    out.update(
        A3_multiplicities={str(j): k for j, k in blocks.multiplicities.items()},
        A3_spatial_multiplicities={str(j): k for j, k in blocks.spatial_multiplicities.items()},
        irreducible=blocks.irreducible,
        block_shape_residuals=dict(blocks.shape_residuals),
        isotropy=isotropy_residual(blocks),
        a=[blocks.a.real, blocks.a.imag],
        c=[blocks.c.real, blocks.c.imag],
        identity_residual=blocks.identity_residual(),
        printed_identity_residual=blocks.printed_identity_residual(),
    )
    out["willmore"] = out["L1_plus_iH1"] <= tol
    if not out["willmore"]:
        out.update(minimal_certificate=False, lorentz_t=None, xi_samples=[])
        return out
    try:
        t, normal = lorentz_normalize(blocks)
    except ValueError as exc:
        out.update(minimal_certificate=False, lorentz_t=None, lorentz_error=str(exc), xi_samples=[])
        return out
    pot = normal.potential
    out["lorentz_t"] = t
    out["a_normalized"] = abs(normal.a)
    out["timelike_leak"] = timelike_leak(pot)
    out["minimal_certificate"] = minimality_certificate(pot, normal.split)
    samples = []
    for z in xi_points:
        X = eval_xi(pot, complex(z))
        samples.append({"z": [float(np.real(z)), float(np.imag(z))], "norm": float(np.linalg.norm(X))})
    out["xi_samples"] = samples
    return out
