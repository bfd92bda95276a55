"""Matrix-valued Laurent polynomials in the loop parameter.

A :class:`LaurentLoop` stores its coefficients densely over a symmetric
window ``k = -d, ..., d`` as an array of shape ``(2d + 1, N, N)``.  On the
unit circle ``lambda = exp(i theta)``.

The twist is the involution ``X -> P X P`` with ``P = diag(I_4, -I_n)``:
even coefficients must be block diagonal (the fixed algebra ``k``), odd ones
block off-diagonal (``p``).  The reality condition ``C_{-k} = conj(C_k)``
makes values on the unit circle real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import FormMismatchError, RealityError
from .linalg import BilinearForm, LieMatrix, matrix_from_json, matrix_to_json, skew_residual

VANISH_TOL = 1e-10


def block_diagonal_part(X: np.ndarray, split: tuple[int, int]) -> np.ndarray:
    """Projection onto the fixed algebra of the twist."""
    p = split[0]
    K = np.zeros_like(X)
    K[..., :p, :p] = X[..., :p, :p]
    K[..., p:, p:] = X[..., p:, p:]
    return K


def off_diagonal_part(X: np.ndarray, split: tuple[int, int]) -> np.ndarray:
    return X - block_diagonal_part(X, split)


@dataclass(frozen=True)
class LaurentLoop:
    coeffs: np.ndarray
    form: BilinearForm
    split: tuple[int, int]

    def __post_init__(self):
        C = np.asarray(self.coeffs, dtype=complex)
        if C.ndim != 3 or C.shape[0] % 2 != 1 or C.shape[1] != C.shape[2]:
            raise ValueError(f"coefficient array must have shape (2d+1, N, N), got {C.shape}")
        N = C.shape[1]
        if N != self.form.dimension or sum(self.split) != N:
            raise FormMismatchError(f"size {N} incompatible with {self.form} / split {self.split}")
        C = C.copy()
        C.flags.writeable = False
        object.__setattr__(self, "coeffs", C)
        object.__setattr__(self, "split", tuple(int(s) for s in self.split))

    # construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, coeffs: dict, form: BilinearForm, split=None, validate=True, tol=VANISH_TOL):
        """Build from ``{k: matrix}``; missing ``-k`` entries are filled in by conjugation."""
        split = split or (4, form.dimension - 4)
        N = form.dimension
        full = {int(k): np.asarray(v, dtype=complex) for k, v in coeffs.items()}
        for k in list(full):
            if -k not in full:
                full[-k] = full[k].conj()
        d = max((abs(k) for k in full), default=0)
        C = np.zeros((2 * d + 1, N, N), dtype=complex)
        for k, v in full.items():
            C[k + d] = v
        loop = cls(C, form, split)
        if validate:
            loop.check(tol)
        return loop

    @classmethod
    def constant(cls, X, form: BilinearForm | None = None, split=None) -> "LaurentLoop":
        if isinstance(X, LieMatrix):
            form = X.form
            X = X.entries
        X = np.asarray(X)
        form = form or BilinearForm.minkowski(X.shape[0])
        split = split or (4, form.dimension - 4)
        return cls(X[None, :, :], form, split)

    @classmethod
    def zeros(cls, form: BilinearForm, split=None, degree: int = 0) -> "LaurentLoop":
        split = split or (4, form.dimension - 4)
        N = form.dimension
        return cls(np.zeros((2 * degree + 1, N, N), complex), form, split)

    # access ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def coefficient(self, k: int) -> np.ndarray:
        d = self.degree
        if abs(k) > d:
            return np.zeros((self.dim, self.dim), complex)
        return self.coeffs[k + d]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.coefficient(k)

    def padded(self, degree: int) -> "LaurentLoop":
        if degree < self.degree:
            raise ValueError("cannot pad to a smaller degree")
        pad = degree - self.degree
        C = np.pad(self.coeffs, ((pad, pad), (0, 0), (0, 0)))
        return LaurentLoop(C, self.form, self.split)

    def trimmed(self, tol: float = 0.0) -> "LaurentLoop":
        """Drop outer coefficient pairs whose norms are at most ``tol``."""
        d = self.degree
        while d > 0:
            outer = max(np.linalg.norm(self.coefficient(d)), np.linalg.norm(self.coefficient(-d)))
            if outer > tol:
                break
            d -= 1
        lo = self.degree - d
        return LaurentLoop(self.coeffs[lo: lo + 2 * d + 1], self.form, self.split)

    # invariants -----------------------------------------------------------

    def reality_residual(self) -> float:
        C = self.coeffs
        return float(np.abs(C - C[::-1].conj()).max(initial=0.0))

    def twist_residual(self) -> float:
        d = self.degree
        worst = 0.0
        for k in range(-d, d + 1):
            X = self.coefficient(k)
            wrong = off_diagonal_part(X, self.split) if k % 2 == 0 else block_diagonal_part(X, self.split)
            worst = max(worst, float(np.abs(wrong).max(initial=0.0)))
        return worst

    def skew_residual(self) -> float:
        return max(skew_residual(X, self.form) for X in self.coeffs)

    def check(self, tol: float = VANISH_TOL) -> None:
        """Raise :class:`RealityError` if reality, twist or skewness fail."""
        for name, res in (
            ("reality", self.reality_residual()),
            ("twist", self.twist_residual()),
            ("skewness", self.skew_residual()),
        ):
            if res > tol:
                raise RealityError(f"{name} condition violated: residual {res:.3e} > {tol:.1e}")

    # algebra ------------------------------------------------------------

    def _compatible(self, other: "LaurentLoop") -> None:
        if self.form != other.form or self.split != other.split:
            raise FormMismatchError(
                f"loops over ({self.form}, {self.split}) and ({other.form}, {other.split})"
            )

    def __add__(self, other: "LaurentLoop") -> "LaurentLoop":
        self._compatible(other)
        d = max(self.degree, other.degree)
        return LaurentLoop(self.padded(d).coeffs + other.padded(d).coeffs, self.form, self.split)

    def __sub__(self, other: "LaurentLoop") -> "LaurentLoop":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "LaurentLoop":
        return LaurentLoop(scalar * self.coeffs, self.form, self.split)

    __rmul__ = __mul__

    def __neg__(self) -> "LaurentLoop":
        return (-1.0) * self

    def conjugate_by(self, g: np.ndarray) -> "LaurentLoop":
        """Coefficientwise ``g C g^{-1}``; ``g`` should lie in the fixed group."""
        ginv = np.linalg.inv(g)
        return LaurentLoop(g @ self.coeffs @ ginv, self.form, self.split)

    def reflected(self) -> "LaurentLoop":
        """The loop ``lambda -> A(1/lambda)``; keeps reality, twist and all pointwise brackets."""
        return LaurentLoop(self.coeffs[::-1], self.form, self.split)

    def max_norm(self) -> float:
        return float(max(np.linalg.norm(X) for X in self.coeffs))

    def __call__(self, theta: float) -> np.ndarray:
        return self.value(theta)

    def value(self, theta: float) -> np.ndarray:
        """Complex value at ``lambda = exp(i theta)`` without the reality check."""
        d = self.degree
        phases = np.exp(1j * theta * np.arange(-d, d + 1))
        return np.tensordot(phases, self.coeffs, axes=1)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "split": list(self.split),
            "coeffs": {str(k): matrix_to_json(self.coefficient(k), self.form.timelike) for k in range(self.degree + 1)},
        }

    @classmethod
    def from_json(cls, obj: dict, strict: bool = False, tol: float = VANISH_TOL) -> "LaurentLoop":
        """Parse the loop schema.

        Normally only ``k >= 0`` is stored.  With ``strict=True`` both halves
        must be present and satisfy ``C_{-k} = conj(C_k)`` exactly.
        """
        try:
            d = int(obj["degree"])
            split = tuple(int(s) for s in obj["split"])
            raw = {int(k): v for k, v in obj["coeffs"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed loop object: {exc}") from exc
        if len(split) != 2:
            raise ValueError("split must have two entries")
        mats = {}
        timelike = None
        for k, v in raw.items():
            if abs(k) > d:
                raise ValueError(f"coefficient {k} outside degree window {d}")
            X, t = matrix_from_json(v)
            timelike = t if timelike is None else timelike
            mats[k] = X
        if timelike is None:
            raise ValueError("loop has no coefficients")
        N = next(iter(mats.values())).shape[0]
        form = BilinearForm(N, timelike)
        if strict:
            for k in range(-d, d + 1):
                if k not in mats:
                    raise ValueError(f"strict mode: coefficient {k} missing")
            for k in range(1, d + 1):
                if not np.array_equal(np.asarray(mats[-k], complex), np.asarray(mats[k], complex).conj()):
                    raise RealityError(f"strict mode: coefficient {-k} is not the conjugate of {k}")
        elif any(k < 0 for k in mats):
            raise ValueError("non-strict mode stores only k >= 0; use strict=True for both halves")
        C = np.zeros((2 * d + 1, N, N), complex)
        for k, X in mats.items():
            C[k + d] = X
            if not strict and k > 0:
                C[-k + d] = np.asarray(X).conj()
        loop = cls(C, form, split)
        loop.check(tol)
        return loop


def bracket(A: LaurentLoop, B: LaurentLoop) -> LaurentLoop:
    """Commutator of two loops by Laurent convolution of the coefficients."""
    A._compatible(B)
    da, db = A.degree, B.degree
    d = da + db
    N = A.dim
    C = np.zeros((2 * d + 1, N, N), complex)
    for i in range(-da, da + 1):
        X = A.coefficient(i)
        if not X.any():
            continue
        for j in range(-db, db + 1):
            Y = B.coefficient(j)
            C[i + j + d] += X @ Y - Y @ X
    return LaurentLoop(C, A.form, A.split)


def evaluate(A: LaurentLoop, theta: float, tol: float = 1e-10) -> LieMatrix:
    """Real value ``sum_k A_k exp(ik theta)`` as a :class:`LieMatrix`.

    Raises :class:`RealityError` if the imaginary part exceeds ``tol``.
    """
    V = A.value(theta)
    imag = float(np.abs(V.imag).max(initial=0.0))
    if imag > tol:
        raise RealityError(f"value has imaginary residue {imag:.3e}")
    return LieMatrix(V.real, A.form, tol=max(tol, 1e-10))


def degree_window_check(A: LaurentLoop, tol: float = VANISH_TOL) -> bool:
    """True iff only the powers lambda^-1, lambda^0, lambda^1 survive."""
    return all(
        np.linalg.norm(A.coefficient(k)) <= tol
        for k in range(-A.degree, A.degree + 1)
        if abs(k) > 1
    )
