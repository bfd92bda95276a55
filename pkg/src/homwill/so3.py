"""Real representations of so(3) and the Moebius action of SU(2).

The generators follow the relations

    [T3, T2] = -T1,   [T3, T1] = T2,   [T1, T2] = T3,

with ``T3 = diag(-i, i)/2`` so that on the Riemann sphere ``exp(t T3).z =
exp(-it) z``.  In every representation built here the image of ``T3`` has
eigenvalues ``ik`` with integer ``k``.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .exceptions import DecompositionError
from .linalg import skew_eigenstructure

INFINITY = complex(math.inf, 0.0)


@dataclass(frozen=True)
class So3Triple:
    """Images ``(rho1, rho2, rho3)`` of the so(3) generators as real skew matrices."""

    rho1: np.ndarray
    rho2: np.ndarray
    rho3: np.ndarray

    def __post_init__(self):
        for name in ("rho1", "rho2", "rho3"):
            X = np.asarray(getattr(self, name), dtype=float).copy()
            X.flags.writeable = False
            object.__setattr__(self, name, X)
        if not (self.rho1.shape == self.rho2.shape == self.rho3.shape):
            raise ValueError("generators have different shapes")

    @property
    def dim(self) -> int:
        return self.rho1.shape[0]

    def __iter__(self):
        return iter((self.rho1, self.rho2, self.rho3))

    def commutation_residual(self) -> float:
        r1, r2, r3 = self
        c = lambda a, b: a @ b - b @ a  # noqa: E731
        return float(max(
            np.abs(c(r3, r2) + r1).max(initial=0.0),
            np.abs(c(r3, r1) - r2).max(initial=0.0),
            np.abs(c(r1, r2) - r3).max(initial=0.0),
        ))

    def skew_residual(self) -> float:
        return float(max(np.abs(r + r.T).max(initial=0.0) for r in self))

    def casimir(self) -> np.ndarray:
        r1, r2, r3 = self
        return r1 @ r1 + r2 @ r2 + r3 @ r3

    def conjugate(self, g: np.ndarray) -> "So3Triple":
        ginv = np.linalg.inv(g)
        return So3Triple(*(g @ r @ ginv for r in self))


def _complex_spin(ell: int):
    ks = np.arange(-ell, ell + 1)
    n = 2 * ell + 1
    raise_op = np.zeros((n, n))
    for i, k in enumerate(ks[:-1]):
        raise_op[i + 1, i] = math.sqrt(ell * (ell + 1) - k * (k + 1))
    lower_op = raise_op.T
    jx = (raise_op + lower_op) / 2
    jy = (raise_op - lower_op) / 2j
    jz = np.diag(ks).astype(float)
    return ks, (-1j * jx, -1j * jy, -1j * jz)


def build_irreducible(ell: int) -> So3Triple:
    """Real spin-``ell`` representation on R^(2 ell + 1).

    The basis pairs the weight vectors ``|k>`` and ``|-k>`` into
    ``(|k> + (-1)^k |-k>)/sqrt 2`` and ``i(|k> - (-1)^k |-k>)/sqrt 2``, ordered
    by descending ``k`` with the zero weight vector last.  In this basis
    ``rho3 = diag(ell S, ..., 1 S, 0)`` with ``S = [[0, 1], [-1, 0]]``.
    ``ell = 0`` gives the one-dimensional trivial representation.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    ks, rho = _complex_spin(ell)
    n = 2 * ell + 1
    pos = {int(k): i for i, k in enumerate(ks)}
    cols = []
    for k in range(ell, 0, -1):
        v = np.zeros(n, complex)
        w = np.zeros(n, complex)
        sign = (-1) ** k
        v[pos[k]], v[pos[-k]] = 1.0, sign
        w[pos[k]], w[pos[-k]] = 1j, -1j * sign
        cols += [v / math.sqrt(2), w / math.sqrt(2)]
    zero = np.zeros(n, complex)
    zero[pos[0]] = 1.0
    cols.append(zero)
    U = np.array(cols).T
    real = [U.conj().T @ r @ U for r in rho]
    # the recombined basis is fixed by the real structure, so this is exact
    assert max(np.abs(r.imag).max(initial=0.0) for r in real) < 1e-12
    return So3Triple(*(r.real for r in real))


def trivial(dim: int = 1) -> So3Triple:
    Z = np.zeros((dim, dim))
    return So3Triple(Z, Z, Z)


def direct_sum(parts: Sequence[So3Triple]) -> So3Triple:
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    gens = [list(p) for p in parts]
    return So3Triple(*(scipy.linalg.block_diag(*(g[j] for g in gens)) for j in range(3)))


def ambient(spins: Sequence[int]) -> So3Triple:
    """Representation on R^(1 + sum(2l+1)): a trivial timelike line plus the given spins."""
    return direct_sum([trivial(1)] + [build_irreducible(l) for l in spins])


def weights(rep: So3Triple, lattice_tol: float = 1e-8) -> dict[int, int]:
    return skew_eigenstructure(rep.rho3, lattice_tol)


def decompose_profile(profile: dict[int, int]) -> list[int]:
    """Irreducible spins with the given rho3 weight multiplicities, largest first.

    Peels off the top weight repeatedly: a spin-``l`` summand contributes one
    to every weight ``|k| <= l``.
    """
    remaining = Counter({int(k): int(m) for k, m in profile.items() if m})
    for k in list(remaining):
        if remaining[k] != remaining[-k]:
            raise DecompositionError(f"weights {k} and {-k} have different multiplicities")
    spins: list[int] = []
    while remaining:
        top = max(abs(k) for k in remaining)
        count = remaining[top]
        for k in range(-top, top + 1):
            if remaining[k] < count:
                raise DecompositionError(f"profile {dict(profile)} is not an so(3) weight profile")
            remaining[k] -= count
            if remaining[k] == 0:
                del remaining[k]
        spins.extend([top] * count)
    return spins


def decompose(rep: So3Triple, lattice_tol: float = 1e-8) -> list[int]:
    return decompose_profile(weights(rep, lattice_tol))


def is_irreducible_ambient(rep: So3Triple, lattice_tol: float = 1e-8) -> bool:
    """Irreducibility test on the spatial part of an ambient representation.

    The representation acts on R^(n+4) with a trivial timelike direction; it
    is irreducible on R^(n+3) exactly when weight 0 has multiplicity 2.
    """
    return weights(rep, lattice_tol).get(0, 0) == 2


def decompose_report(rep: So3Triple, lattice_tol: float = 1e-8) -> dict:
    profile = weights(rep, lattice_tol)
    return {
        "multiplicities": [[k, m] for k, m in profile.items()],
        "summands": decompose_profile(profile),
        "irreducible_ambient": profile.get(0, 0) == 2,
    }


# Moebius action -------------------------------------------------------------


def su2_element(index: int, t: float) -> np.ndarray:
    """``exp(t T_index)`` as a 2x2 complex matrix."""
    c, s = math.cos(t / 2), math.sin(t / 2)
    if index == 1:
        return np.array([[c, -1j * s], [-1j * s, c]])
    if index == 2:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if index == 3:
        return np.array([[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]])
    raise ValueError(f"generator index must be 1, 2 or 3, got {index}")


def su2_generator(index: int) -> np.ndarray:
    if index == 1:
        return 0.5 * np.array([[0, -1j], [-1j, 0]])
    if index == 2:
        return 0.5 * np.array([[0, -1], [1, 0]], dtype=complex)
    if index == 3:
        return 0.5 * np.array([[-1j, 0], [0, 1j]])
    raise ValueError(f"generator index must be 1, 2 or 3, got {index}")


def is_infinite(z) -> bool:
    return cmath.isinf(complex(z))


def moebius(g: np.ndarray, z) -> complex:
    """Fractional linear action of a 2x2 matrix, evaluated projectively."""
    (a, b), (c, d) = g
    if is_infinite(z):
        num, den = a, c
    else:
        z = complex(z)
        num, den = a * z + b, c * z + d
    if den == 0:
        return INFINITY
    return complex(num / den)


def mobius_act(index: int, t: float, z) -> complex:
    """``exp(t T_index) . z`` on the extended complex plane."""
    return moebius(su2_element(index, t), z)
