"""Extended frames of homogeneous Willmore surfaces.

Two families are covered:

* translation-homogeneous planes, whose frame is ``exp(u A(lambda) + v B(lambda))``
  for a commuting pair of loops (:class:`ConstantPotential`);
* homogeneous spheres, described by the images ``A1(lambda), A2(lambda), A3``
  of the so(3) generators (:class:`HomogeneousSphereData`).

:func:`orbit_monodromy` produces sphere data from a minimal so(3)-orbit by
reading off the Killing fields of the conformal Gauss map at ``z = 0``.
Immersions are recovered with :func:`lightcone_project`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateProjectionError, NonCommutingPotentialError
from .linalg import BilinearForm, LieMatrix, expm
from .loops import (
    LaurentLoop,
    block_diagonal_part,
    bracket,
    degree_window_check,
    off_diagonal_part,
)
from .so3 import So3Triple, build_irreducible, is_infinite

COMMUTE_TOL = 1e-10


@dataclass(frozen=True)
class ConstantPotential:
    """Commuting pair of loops; the Maurer-Cartan form is ``A du + B dv``."""

    A: LaurentLoop
    B: LaurentLoop
    tol: float = field(default=COMMUTE_TOL, compare=False)

    def __post_init__(self):
        res = self.commutator_residual()
        if res > self.tol:
            raise NonCommutingPotentialError(
                f"[A(lambda), B(lambda)] has coefficient norm {res:.3e} > {self.tol:.1e}"
            )
        for name in ("A", "B"):
            if not degree_window_check(getattr(self, name), self.tol):
                raise ValueError(f"{name} has powers of lambda outside -1..1")

    def commutator_residual(self) -> float:
        return bracket(self.A, self.B).max_norm()


@dataclass(frozen=True)
class HomogeneousSphereData:
    """Monodromy of an so(3)-homogeneous sphere: ``A1(lambda), A2(lambda)`` and ``A3``.

    ``base_frame`` optionally records the frame at ``z = 0`` the data was read
    from (ambient coordinates); it plays no role in the algebra.
    """

    A1: LaurentLoop
    A2: LaurentLoop
    A3: LieMatrix
    base_frame: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def form(self) -> BilinearForm:
        return self.A1.form

    @property
    def split(self) -> tuple[int, int]:
        return self.A1.split

    @property
    def A3_loop(self) -> LaurentLoop:
        return LaurentLoop.constant(self.A3.entries, self.form, self.split)

    def commutation_residuals(self) -> tuple[float, float, float]:
        """Coefficient norms of ``[A3,A2]+A1``, ``[A3,A1]-A2`` and ``[A1,A2]-A3``."""
        A3 = self.A3_loop
        return (
            (bracket(A3, self.A2) + self.A1).max_norm(),
            (bracket(A3, self.A1) - self.A2).max_norm(),
            (bracket(self.A1, self.A2) - A3).max_norm(),
        )

    def a3_in_fixed_algebra(self) -> float:
        return float(np.abs(off_diagonal_part(self.A3.entries, self.split)).max(initial=0.0))

    def check(self, tol: float = 1e-9) -> None:
        worst = max(self.commutation_residuals())
        if worst > tol:
            raise ValueError(f"so(3) relations fail as Laurent identities: residual {worst:.3e}")
        if self.a3_in_fixed_algebra() > tol:
            raise ValueError("A3 is not block diagonal")
        for name in ("A1", "A2"):
            if not degree_window_check(getattr(self, name), tol):
                raise ValueError(f"{name} has powers of lambda outside -1..1")

    def conjugate_by(self, g: np.ndarray) -> "HomogeneousSphereData":
        ginv = np.linalg.inv(g)
        A3 = g @ self.A3.entries @ ginv
        return HomogeneousSphereData(
            self.A1.conjugate_by(g),
            self.A2.conjugate_by(g),
            LieMatrix(A3.real, self.form, tol=1e-9),
        )

    def to_json(self) -> dict:
        return {"A1": self.A1.to_json(), "A2": self.A2.to_json(), "A3": self.A3.to_json()}

    @classmethod
    def from_json(cls, obj: dict, validate: bool = True) -> "HomogeneousSphereData":
        try:
            A1 = LaurentLoop.from_json(obj["A1"])
            A2 = LaurentLoop.from_json(obj["A2"])
            A3 = LieMatrix.from_json(obj["A3"])
        except KeyError as exc:
            raise ValueError(f"monodromy object lacks {exc}") from exc
        if np.iscomplexobj(A3.entries):
            raise ValueError("A3 must be real")
        data = cls(A1, A2, A3)
        if validate:
            data.check()
        return data


# frames ---------------------------------------------------------------------


def frame_plane(pot: ConstantPotential, u: float, v: float, theta: float = 0.0) -> np.ndarray:
    """``exp(u A + v B)`` at ``lambda = exp(i theta)``."""
    X = u * pot.A.value(theta) + v * pot.B.value(theta)
    return expm(X.real)


def arctan_ratio(r: float) -> float:
    """``arctan(r) / r`` with the removable singularity at 0 filled in."""
    if r < 1e-4:
        r2 = r * r
        return sum((-1) ** k * r2**k / (2 * k + 1) for k in range(7))
    return math.atan(r) / r


def frame_sphere(data: HomogeneousSphereData, z: complex, theta: float = 0.0) -> np.ndarray:
    """``exp(-2 arctan(r)/r (u A2 + v A1))`` at ``lambda = exp(i theta)``."""
    z = complex(z)
    u, v = z.real, z.imag
    factor = -2.0 * arctan_ratio(abs(z))
    X = factor * (u * data.A2.value(theta) + v * data.A1.value(theta))
    return expm(X.real)


def polar_angle(z: complex) -> float:
    """Angle in (-pi, pi]: ``arccos(u/r)`` above the real axis, its negative below."""
    r = abs(z)
    c = min(1.0, max(-1.0, z.real / r))
    return math.acos(c) if z.imag >= 0 else -math.acos(c)


def frame_sphere_polar(data: HomogeneousSphereData, z: complex, theta: float = 0.0) -> np.ndarray:
    """The same frame as a conjugated rotation: ``e^{-t A3} e^{-2 arctan(r) A2} e^{t A3}``."""
    z = complex(z)
    r = abs(z)
    if r == 0.0:
        return np.eye(data.form.dimension)
    t = polar_angle(z)
    A3 = data.A3.entries
    middle = expm(-2.0 * math.atan(r) * data.A2.value(theta).real)
    return expm(-t * A3) @ middle @ expm(t * A3)


def base_vector(dim: int, sign: int = 1) -> np.ndarray:
    v = np.zeros(dim)
    v[0], v[1] = 1.0, float(sign)
    return v


def lightcone_project(F: np.ndarray, v0: np.ndarray | None = None, tol: float = 1e-12) -> np.ndarray:
    """Point of S^(n+2) given by the null line ``F v0`` (default ``v0 = e_0 + e_1``).

    Returns the spatial part divided by the timelike component.  Use
    ``base_vector(dim, -1)`` for the dual null vector.
    """
    F = np.asarray(F)
    if v0 is None:
        v0 = base_vector(F.shape[0])
    x = F @ v0
    if np.iscomplexobj(x):
        x = x.real
    if x[0] <= tol:
        raise DegenerateProjectionError(f"timelike component {x[0]:.3e} <= {tol:.1e}")
    return x[1:] / x[0]


def homogeneity_residual(
    data: HomogeneousSphereData, theta_hat: float, grid, lambda_theta: float = 0.0
) -> float:
    """Max distance between y(e^{i t} z) and exp(-t A3) y(z) over ``grid``."""
    R = expm(-theta_hat * data.A3.entries)
    rot = np.exp(1j * theta_hat)
    worst = 0.0
    for z in grid:
        y = lightcone_project(frame_sphere(data, z, lambda_theta))
        y_rot = lightcone_project(frame_sphere(data, rot * z, lambda_theta))
        x = R @ np.concatenate([[1.0], y])
        worst = max(worst, float(np.linalg.norm(y_rot - x[1:] / x[0])))
    return worst


# monodromy of so(3) orbits --------------------------------------------------


def orbit_point(rep: So3Triple, y0: np.ndarray, z) -> np.ndarray:
    """``y(r e^{it}) = e^{-t rho3} e^{-2 arctan(r) rho2} y0``; equivariant under the Moebius action."""
    if is_infinite(z):
        return expm(-math.pi * rep.rho2) @ y0
    z = complex(z)
    r = abs(z)
    t = math.atan2(z.imag, z.real)
    return expm(-t * rep.rho3) @ (expm(-2.0 * math.atan(r) * rep.rho2) @ y0)


def _embed(rho: np.ndarray) -> np.ndarray:
    N = rho.shape[0] + 1
    X = np.zeros((N, N))
    X[1:, 1:] = rho
    return X


def orbit_base_frame(rep: So3Triple, y0: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Frame of the conformal Gauss map at ``z = 0`` of the orbit through ``y0``.

    Columns: ``(Y+N)/sqrt 2, (Y-N)/sqrt 2, Y_u, Y_v, psi_1, ..., psi_n`` with
    ``Y = e^{-w}(1, y)`` the canonical lift.  The orbit must be minimal at
    ``y0``; then the central sphere is spanned by ``e_0, y, y_u, y_v`` and the
    conformal factor is stationary at the origin.
    """
    y0 = np.asarray(y0, dtype=float)
    y0 = y0 / np.linalg.norm(y0)
    if np.linalg.norm(rep.rho3 @ y0) > tol:
        raise ValueError("y0 must be fixed by rho3 (the stabiliser of z = 0)")
    dim = rep.dim
    yu = -2.0 * rep.rho2 @ y0
    yv = -2.0 * rep.rho1 @ y0
    ell = float(np.linalg.norm(yu))
    if ell < tol:
        raise ValueError("orbit is not immersed at z = 0")
    if abs(np.linalg.norm(yv) - ell) > tol * ell or abs(yu @ yv) > tol * ell**2:
        raise ValueError("orbit is not conformal at z = 0")
    lap = 4.0 * (rep.rho1 @ rep.rho1 + rep.rho2 @ rep.rho2) @ y0
    mean_curv = 0.5 * lap / ell**2 + y0
    if np.linalg.norm(mean_curv) > tol * max(1.0, ell):
        raise ValueError(
            f"orbit has mean curvature {np.linalg.norm(mean_curv):.3e} at z = 0; only minimal orbits are supported"
        )

    def amb(t, x):
        return np.concatenate([[t], x])

    Y = amb(1.0, y0) / ell
    N = 0.5 * ell * amb(1.0, -y0)
    cols = [(Y + N) / math.sqrt(2), (Y - N) / math.sqrt(2), amb(0.0, yu / ell), amb(0.0, yv / ell)]
    tangent = np.array([y0, yu / ell, yv / ell])
    normals: list[np.ndarray] = []
    for i in range(dim):
        w = np.eye(dim)[i] - tangent.T @ (tangent @ np.eye(dim)[i])
        for q in normals:
            w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm > 1e-8:
            normals.append(w / nrm)
    cols += [amb(0.0, q) for q in normals]
    return np.array(cols).T


def orbit_monodromy(rep: So3Triple, y0: np.ndarray | None = None, check: bool = True) -> HomogeneousSphereData:
    """Loop data ``A1(lambda), A2(lambda), A3`` of the orbit of ``y0`` under ``rep``.

    With ``P_j = F0^{-1} X_j F0`` (``X_j`` the generators acting on the
    spatial coordinates) the fixed-algebra parts are lambda-independent and
    the p-parts split into the dz and dz-bar components of the Maurer-Cartan
    form.  The generator vector fields at the origin are ``-i/2`` (T1) and
    ``-1/2`` (T2), which gives

        H1 = (P1_p + i P2_p) / 2,    L1 = (P2_p - i P1_p) / 2.
    """
    if y0 is None:
        kernel = [i for i in range(rep.dim) if not rep.rho3[:, i].any() and not rep.rho3[i, :].any()]
        if not kernel:
            raise ValueError("rho3 has no zero-weight basis vector; pass y0 explicitly")
        y0 = np.eye(rep.dim)[kernel[-1]]
    F0 = orbit_base_frame(rep, y0)
    N = rep.dim + 1
    form = BilinearForm.minkowski(N)
    split = (4, N - 4)
    G = form.matrix
    F0inv = G @ F0.T @ G
    P1, P2, P3 = (F0inv @ _embed(r) @ F0 for r in rep)
    H0 = block_diagonal_part(P1, split)
    L0 = block_diagonal_part(P2, split)
    p1 = off_diagonal_part(P1, split)
    p2 = off_diagonal_part(P2, split)
    H1 = 0.5 * (p1 + 1j * p2)
    L1 = 0.5 * (p2 - 1j * p1)
    A1 = LaurentLoop.from_dict({-1: H1, 0: H0, 1: H1.conj()}, form, split, validate=check, tol=1e-9)
    A2 = LaurentLoop.from_dict({-1: L1, 0: L0, 1: L1.conj()}, form, split, validate=check, tol=1e-9)
    A3 = LieMatrix(P3, form, tol=1e-9)
    data = HomogeneousSphereData(A1, A2, A3, base_frame=F0)
    if check:
        data.check()
    return data


def veronese_monodromy(m: int) -> HomogeneousSphereData:
    """Sphere data of the Boruvka-Veronese orbit: the zero-weight orbit of spin ``m``."""
    return orbit_monodromy(build_irreducible(m))


# examples and sampling --------------------------------------------------------


def plane_rotation(dim: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Generator ``x y^t - y x^t`` rotating the plane ``x, y`` (spatial vectors, timelike slot 0)."""
    return np.outer(x, y) - np.outer(y, x)


def torus_potential(a: float = 1.0, b: float = 1.0) -> ConstantPotential:
    """Commuting pair in so(1,5) whose orbit is a flat Clifford torus in S^3.

    With ``f, g = (e1 +- e2)/sqrt 2`` the loops are
    ``(a/2)(l^-1 + l) R(f, e4)`` and ``(b/2)(l^-1 + l) R(g, e5)``, which sit in
    the odd part of the twisted algebra.  At ``l = e^{i theta}`` the orbit of
    ``e0 + e1`` closes after ``u -> u + 2 pi/(a cos theta)`` and
    ``v -> v + 2 pi/(b cos theta)``.
    """
    form = BilinearForm.minkowski(6)
    e = np.eye(6)
    f = (e[1] + e[2]) / math.sqrt(2)
    g = (e[1] - e[2]) / math.sqrt(2)
    RA = 0.5 * a * plane_rotation(6, f, e[4])
    RB = 0.5 * b * plane_rotation(6, g, e[5])
    A = LaurentLoop.from_dict({-1: RA, 1: RA}, form, (4, 2))
    B = LaurentLoop.from_dict({-1: RB, 1: RB}, form, (4, 2))
    return ConstantPotential(A, B)


def torus_periods(a: float, b: float, theta: float = 0.0) -> tuple[float, float]:
    ct = math.cos(theta)
    return 2 * math.pi / (a * ct), 2 * math.pi / (b * ct)


def sphere_immersion(data: HomogeneousSphereData, z, theta: float = 0.0, ambient: bool = True) -> np.ndarray:
    """Point ``y(z)`` of the surface; ``ambient`` applies the recorded base frame when present."""
    if is_infinite(z):
        F = frame_sphere_polar(data, 1e300, theta)
    else:
        F = frame_sphere(data, z, theta)
    if ambient and data.base_frame is not None:
        F = data.base_frame @ F
    return lightcone_project(F)


def sample_plane(pot: ConstantPotential, points, theta: float = 0.0) -> np.ndarray:
    return np.array([lightcone_project(frame_plane(pot, u, v, theta)) for u, v in points])


def sample_sphere(data: HomogeneousSphereData, points, theta: float = 0.0, ambient: bool = True) -> np.ndarray:
    return np.array([sphere_immersion(data, complex(u, v), theta, ambient) for u, v in points])
