"""Signature-aware matrix core.

Matrices of so(k) and so(1, k) are handled as plain numpy arrays together
with a :class:`BilinearForm`.  :class:`LieMatrix` bundles the two and checks
membership on construction; the free functions accept either a
:class:`LieMatrix` or a bare array.

The Minkowski convention is timelike-first: ``G = diag(-1, +1, ..., +1)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.linalg

from .exceptions import FormMismatchError, LatticeRoundingError, MembershipError

MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class BilinearForm:
    """Diagonal form with ``timelike`` leading entries equal to -1."""

    dimension: int
    timelike: int = 0

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.timelike not in (0, 1):
            raise ValueError("timelike count must be 0 or 1")

    @property
    def matrix(self) -> np.ndarray:
        g = np.ones(self.dimension)
        g[: self.timelike] = -1.0
        return np.diag(g)

    @property
    def signs(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    @classmethod
    def minkowski(cls, dimension: int) -> "BilinearForm":
        return cls(dimension, 1)

    @classmethod
    def euclidean(cls, dimension: int) -> "BilinearForm":
        return cls(dimension, 0)


def skew_residual(X: np.ndarray, form: BilinearForm) -> float:
    """Infinity norm of ``X^t G + G X``."""
    G = form.matrix
    return float(np.abs(X.T @ G + G @ X).max(initial=0.0))


@dataclass(frozen=True)
class LieMatrix:
    """An element of so(k) or so(1, k), possibly complexified."""

    entries: np.ndarray
    form: BilinearForm
    tol: float = field(default=MEMBERSHIP_TOL, compare=False, repr=False)

    def __post_init__(self):
        X = np.asarray(self.entries)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {X.shape}")
        if X.shape[0] != self.form.dimension:
            raise FormMismatchError(
                f"matrix of size {X.shape[0]} with form of dimension {self.form.dimension}"
            )
        if not np.all(np.isfinite(X)):
            raise ValueError("non-finite entries")
        res = skew_residual(X, self.form)
        if res > self.tol:
            raise MembershipError(f"X^t G + G X has norm {res:.3e} > {self.tol:.1e}")
        X = X.copy()
        X.flags.writeable = False
        object.__setattr__(self, "entries", X)

    @property
    def dim(self) -> int:
        return self.form.dimension

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def to_json(self) -> dict:
        return matrix_to_json(self.entries, self.form.timelike)

    @classmethod
    def from_json(cls, obj: dict) -> "LieMatrix":
        X, timelike = matrix_from_json(obj)
        return cls(X, BilinearForm(X.shape[0], timelike))


MatrixLike = Union[LieMatrix, np.ndarray]


def _unwrap(X: MatrixLike):
    if isinstance(X, LieMatrix):
        return X.entries, X.form
    return np.asarray(X), None


def commutator(X: MatrixLike, Y: MatrixLike) -> MatrixLike:
    """``XY - YX``; returns a LieMatrix when both inputs are LieMatrix."""
    A, fa = _unwrap(X)
    B, fb = _unwrap(Y)
    if A.shape != B.shape:
        raise FormMismatchError(f"shapes {A.shape} and {B.shape} differ")
    if fa is not None and fb is not None and fa != fb:
        raise FormMismatchError(f"forms {fa} and {fb} differ")
    C = A @ B - B @ A
    if fa is not None and fb is not None:
        # bracket of two tol-members is a member up to ~2|A||B| tol
        slack = max(MEMBERSHIP_TOL, 4 * (np.abs(A).max() + np.abs(B).max()) * max(X.tol, Y.tol))
        return LieMatrix(C, fa, tol=slack)
    return C


# Pade(13) coefficients and scaling threshold from Higham (2005).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm(X: MatrixLike) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the [13/13] Pade approximant.

    Deterministic: the scaling exponent depends only on the 1-norm of ``X``.
    Works for real and complex input.
    """
    A, _ = _unwrap(X)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("expm: non-finite entries")
    n = A.shape[0]
    dtype = np.result_type(A.dtype, np.float64)
    A = A.astype(dtype, copy=False)
    norm1 = np.abs(A).sum(axis=0).max(initial=0.0)
    if norm1 == 0.0:
        return np.eye(n, dtype=dtype)
    s = max(0, int(np.ceil(np.log2(norm1 / _THETA13))))
    A = A / 2.0**s
    b = _PADE13
    ident = np.eye(n, dtype=dtype)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def form_residual(F: np.ndarray, form: BilinearForm) -> float:
    """Infinity norm of ``F^t G F - G``; zero for elements of O(G)."""
    G = form.matrix
    return float(np.abs(F.T @ G @ F - G).max())


def eigenvalues_from_schur(X: np.ndarray) -> np.ndarray:
    """Eigenvalues of a real matrix read off the diagonal blocks of its real Schur form."""
    T, _ = scipy.linalg.schur(np.asarray(X, dtype=float), output="real")
    n = T.shape[0]
    out = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 0.0:
            a, b, c, d = T[i, i], T[i, i + 1], T[i + 1, i], T[i + 1, i + 1]
            mean = 0.5 * (a + d)
            disc = 0.25 * (a - d) ** 2 + b * c
            root = np.sqrt(complex(disc))
            out.extend([mean + root, mean - root])
            i += 2
        else:
            out.append(complex(T[i, i]))
            i += 1
    return np.array(out)


def skew_eigenstructure(X: MatrixLike, lattice_tol: float = 1e-8) -> dict[int, int]:
    """Integer weights of a rotation generator.

    Every eigenvalue must be within ``lattice_tol`` of ``ik`` for an integer
    ``k``; the result maps ``k`` to its multiplicity, sorted by ``k``.
    """
    A, _ = _unwrap(X)
    if np.iscomplexobj(A):
        if np.abs(A.imag).max(initial=0.0) > lattice_tol:
            raise ValueError("skew_eigenstructure expects a real matrix")
        A = A.real
    counts: Counter = Counter()
    for ev in eigenvalues_from_schur(A):
        k = int(np.rint(ev.imag))
        if abs(ev - 1j * k) > lattice_tol:
            raise LatticeRoundingError(
                f"eigenvalue {ev:.6g} is {abs(ev - 1j * k):.2e} away from i*Z"
            )
        counts[k] += 1
    return dict(sorted(counts.items()))


def matrix_to_json(X: np.ndarray, timelike: int = 0) -> dict:
    X = np.asarray(X)
    flat = X.reshape(-1)
    return {
        "dim": int(X.shape[0]),
        "timelike": int(timelike),
        "entries": [[float(np.real(x)), float(np.imag(x))] for x in flat],
    }


def matrix_from_json(obj: dict) -> tuple[np.ndarray, int]:
    """Parse the shared matrix schema; returns ``(array, timelike)``.

    The array is real when every imaginary part is exactly zero.
    """
    try:
        n = int(obj["dim"])
        timelike = int(obj.get("timelike", 0))
        pairs = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if pairs.shape != (n * n, 2):
        raise ValueError(f"expected {n * n} [re, im] pairs, got array of shape {pairs.shape}")
    if timelike not in (0, 1):
        raise ValueError("timelike must be 0 or 1")
    X = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n)
    if np.all(pairs[:, 1] == 0.0):
        X = X.real.copy()
    return X, timelike
