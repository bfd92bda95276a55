"""Numerical differential geometry of sampled conformal immersions into spheres.

Samples live on a regular grid over a rectangular chart.  All derivatives are
second-order central differences; a sample needs two neighbours on each side
before it contributes (curvature uses second differences of ``log E``).

Fine grids do not fit in memory at once, so immersions given as maps are
evaluated in strips of rows with a two-row halo.  Whole spheres are covered
by two stereographic charts glued with a smooth partition of unity in
``log|z|``; see :func:`sphere_atlas`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre

from .exceptions import CoverageError, ImmersionError

HALO = 2
STRIP_ROWS = 128
DEGENERATE_METRIC = 1e-12


# Boruvka-Veronese spheres ---------------------------------------------------


def stereographic_inverse(z: np.ndarray) -> np.ndarray:
    """Unit vectors ``(2u, 2v, |z|^2 - 1) / (1 + |z|^2)``; infinite z goes to the north pole."""
    z = np.asarray(z, dtype=complex)
    inf = np.isinf(z)
    zz = np.where(inf, 0.0, z)
    r2 = np.abs(zz) ** 2
    p = np.stack([2 * zz.real, 2 * zz.imag, r2 - 1.0], axis=-1) / (1.0 + r2)[..., None]
    p[inf] = (0.0, 0.0, 1.0)
    return p


def real_spherical_harmonics(degree: int, p: np.ndarray) -> np.ndarray:
    """Orthonormal real harmonics of the given degree at unit vectors ``p``.

    Components are ordered by order ``k = -degree, ..., degree``: negative
    orders carry the sine part, positive orders the cosine part.  Uses
    ``P_l^k(t) (1-t^2)^(k/2) e^{ik phi} = d^k P_l/dt^k (t) (x + iy)^k``, which
    keeps everything polynomial in the Cartesian coordinates.
    """
    p = np.asarray(p, dtype=float)
    x, y, t = p[..., 0], p[..., 1], p[..., 2]
    leg = np.zeros(degree + 1)
    leg[degree] = 1.0
    out = np.empty(p.shape[:-1] + (2 * degree + 1,))
    xy = np.ones(x.shape, dtype=complex)
    for k in range(degree + 1):
        norm = math.sqrt((2 * degree + 1) / (4 * math.pi) * math.factorial(degree - k) / math.factorial(degree + k))
        radial = legendre.legval(t, legendre.legder(leg, k)) if k else legendre.legval(t, leg)
        if k == 0:
            out[..., degree] = norm * radial
        else:
            out[..., degree + k] = math.sqrt(2) * norm * radial * xy.real
            out[..., degree - k] = math.sqrt(2) * norm * radial * xy.imag
        xy = xy * (x + 1j * y)
    return out


def veronese(m: int, z) -> np.ndarray:
    """Boruvka-Veronese sphere of degree ``m`` in S^(2m); vectorized over ``z``, which may be infinite."""
    if m < 1:
        raise ValueError("degree must be at least 1")
    scale = math.sqrt((2 * m + 1) / (4 * math.pi))
    return real_spherical_harmonics(m, stereographic_inverse(z)) / scale


def veronese_curvature(m: int) -> float:
    return 2.0 / (m * (m + 1))


def antipode(z):
    """``-1 / conj(z)`` with 0 and infinity exchanged."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = -1.0 / np.conj(z)
    w = np.where(z == 0, complex(np.inf, 0), w)
    return np.where(np.isinf(z), 0.0, w)


def antipodal_residual(immersion: Callable, samples, parity: int) -> float:
    """Max of ``|y(-1/conj z) - parity * y(z)|`` over the samples."""
    z = np.asarray(samples, dtype=complex)
    return float(np.linalg.norm(immersion(antipode(z)) - parity * immersion(z), axis=-1).max())


def antipodal_check(m: int, samples) -> float:
    """Antipodal residual of the degree-``m`` Veronese sphere against the parity ``(-1)^m``."""
    return antipodal_residual(lambda z: veronese(m, z), samples, (-1) ** m)


def antipodal_parity(immersion: Callable, samples) -> tuple[int, float]:
    """The sign in ``{+1, -1}`` with the smaller antipodal residual, and that residual."""
    plus = antipodal_residual(immersion, samples, 1)
    minus = antipodal_residual(immersion, samples, -1)
    return (1, plus) if plus <= minus else (-1, minus)


# sampled surfaces -----------------------------------------------------------


@dataclass(frozen=True)
class SurfaceGrid:
    """Immersion sampled at ``u0 + i h, v0 + j h`` on the chart ``[u0,u1] x [v0,v1]``.

    Give either ``samples`` of shape ``(nu, nv, d)`` or an ``immersion``
    mapping complex arrays ``u + iv`` to arrays of shape ``(..., d)``; the
    latter is evaluated lazily strip by strip.  ``weight`` optionally maps
    ``z`` to quadrature weights (a partition of unity for atlases).
    """

    chart: tuple[float, float, float, float]
    h: float
    samples: np.ndarray | None = field(default=None, repr=False)
    immersion: Callable | None = field(default=None, repr=False)
    weight: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("spacing must be positive")
        if (self.samples is None) == (self.immersion is None):
            raise ValueError("give exactly one of samples and immersion")
        object.__setattr__(self, "chart", tuple(float(c) for c in self.chart))
        if self.samples is not None:
            Y = np.asarray(self.samples, dtype=float)
            if Y.ndim != 3 or Y.shape[:2] != self.shape:
                raise ValueError(f"samples must have shape {self.shape + ('d',)}, got {Y.shape}")
            if np.abs(np.linalg.norm(Y, axis=-1) - 1.0).max() > 1e-12:
                raise ValueError("samples must be unit vectors")
            object.__setattr__(self, "samples", Y)

    @property
    def shape(self) -> tuple[int, int]:
        u0, u1, v0, v1 = self.chart
        return int(round((u1 - u0) / self.h)) + 1, int(round((v1 - v0) / self.h)) + 1

    def coords(self, rows: slice = slice(None)) -> np.ndarray:
        u0, _, v0, _ = self.chart
        nu, nv = self.shape
        u = u0 + self.h * np.arange(nu)[rows]
        v = v0 + self.h * np.arange(nv)
        return u[:, None] + 1j * v[None, :]

    def block(self, rows: slice) -> np.ndarray:
        if self.samples is not None:
            return self.samples[rows]
        return np.asarray(self.immersion(self.coords(rows)), dtype=float)

    @classmethod
    def from_map(cls, immersion: Callable, chart, h: float, weight: Callable | None = None, materialize: bool = False):
        grid = cls(tuple(chart), h, immersion=immersion, weight=weight)
        if materialize:
            return cls(grid.chart, h, samples=grid.block(slice(None)), weight=weight)
        return grid


def _orthonormal_columns(vectors: Sequence[np.ndarray]) -> list[np.ndarray]:
    basis: list[np.ndarray] = []
    for v in vectors:
        w = v.copy()
        for q in basis:
            w -= np.einsum("...i,...i->...", w, q)[..., None] * q
        basis.append(w / np.linalg.norm(w, axis=-1, keepdims=True))
    return basis


def _strip_fields(Y: np.ndarray, h: float) -> dict[str, np.ndarray]:
    """Metric, mean curvature vector norm and Gauss curvature on ``Y[2:-2, 2:-2]``."""
    C = Y[1:-1, 1:-1]
    yu = (Y[2:, 1:-1] - Y[:-2, 1:-1]) / (2 * h)
    yv = (Y[1:-1, 2:] - Y[1:-1, :-2]) / (2 * h)
    lap = (Y[2:, 1:-1] + Y[:-2, 1:-1] + Y[1:-1, 2:] + Y[1:-1, :-2] - 4 * C) / h**2
    E = np.einsum("...i,...i->...", yu, yu)
    F = np.einsum("...i,...i->...", yu, yv)
    G = np.einsum("...i,...i->...", yv, yv)
    if E.min(initial=np.inf) <= DEGENERATE_METRIC:
        raise ImmersionError(f"metric coefficient E = {E.min():.3e} degenerates")
    core = (slice(1, -1), slice(1, -1))
    Hvec = (0.5 * lap / E[..., None] + C)[core]
    for q in _orthonormal_columns([C[core], yu[core], yv[core]]):
        Hvec -= np.einsum("...i,...i->...", Hvec, q)[..., None] * q
    logE = np.log(E)
    lap_omega = 0.5 * (logE[2:, 1:-1] + logE[:-2, 1:-1] + logE[1:-1, 2:] + logE[1:-1, :-2] - 4 * logE[core]) / h**2
    E, F, G = E[core], F[core], G[core]
    return {
        "E": E,
        "conformality": np.maximum(np.abs(E - G), np.abs(F)) / E,
        "H": np.linalg.norm(Hvec, axis=-1),
        "K": -lap_omega / E,
    }


def iter_fields(grid: SurfaceGrid, strip_rows: int = STRIP_ROWS):
    """Yield ``(row slice, z block, fields)`` over the interior in row order."""
    nu, nv = grid.shape
    if nu <= 2 * HALO or nv <= 2 * HALO:
        raise ValueError(f"grid {nu}x{nv} has no interior")
    for r0 in range(HALO, nu - HALO, strip_rows):
        r1 = min(r0 + strip_rows, nu - HALO)
        fields = _strip_fields(grid.block(slice(r0 - HALO, r1 + HALO)), grid.h)
        z = grid.coords(slice(r0, r1))[:, HALO:nv - HALO]
        yield slice(r0, r1), z, fields


def collect_field(grid: SurfaceGrid, name: str) -> np.ndarray:
    return np.concatenate([f[name] for _, _, f in iter_fields(grid)], axis=0)


def conformality_defect(grid: SurfaceGrid) -> float:
    """Max over the interior of ``max(|E - G|, |F|) / E``."""
    return max(float(f["conformality"].max()) for _, _, f in iter_fields(grid))


def mean_curvature_field(grid: SurfaceGrid) -> np.ndarray:
    return collect_field(grid, "H")


def mean_curvature_defect(grid: SurfaceGrid) -> float:
    return max(float(f["H"].max()) for _, _, f in iter_fields(grid))


def gauss_curvature(grid: SurfaceGrid) -> np.ndarray:
    """``K = -e^{-2w} Lap w`` with ``e^{2w} = E`` on the interior samples."""
    return collect_field(grid, "K")


@dataclass
class GeometryReport:
    conformality: float = 0.0
    minimality: float = 0.0
    K_mean: float = 0.0
    K_std: float = 0.0
    K_min: float = math.inf
    K_max: float = -math.inf
    area: float = 0.0
    total_curvature: float = 0.0
    willmore_energy: float = 0.0
    coverage: float = 0.0
    samples: int = 0

    def to_json(self) -> dict:
        return {k: float(v) if isinstance(v, float) else v for k, v in self.__dict__.items()}


def _sphere_density(z: np.ndarray) -> np.ndarray:
    return 4.0 / (1.0 + np.abs(z) ** 2) ** 2


def measure(grids: SurfaceGrid | Sequence[SurfaceGrid], strip_rows: int = STRIP_ROWS) -> GeometryReport:
    """One pass over every grid collecting all pointwise defects and integrals.

    Maxima and curvature statistics are taken over samples with positive
    weight.  Integrals use the rectangle rule with the grid weights, which is
    the trapezoidal rule whenever the weights vanish near the chart boundary.
    ``coverage`` is the weighted area of the parameter domain measured on the
    round unit sphere through stereographic projection.
    """
    if isinstance(grids, SurfaceGrid):
        grids = [grids]
    rep = GeometryReport()
    s1 = s2 = 0.0
    for grid in grids:
        cell = grid.h**2
        for _, z, f in iter_fields(grid, strip_rows):
            w = np.ones(z.shape) if grid.weight is None else grid.weight(z)
            live = w > 0
            if not live.any():
                continue
            K = f["K"]
            rep.conformality = max(rep.conformality, float(f["conformality"][live].max()))
            rep.minimality = max(rep.minimality, float(f["H"][live].max()))
            rep.K_min = min(rep.K_min, float(K[live].min()))
            rep.K_max = max(rep.K_max, float(K[live].max()))
            rep.samples += int(live.sum())
            s1 += float(K[live].sum())
            s2 += float((K[live] ** 2).sum())
            dA = w * f["E"] * cell
            rep.area += float(dA.sum())
            rep.total_curvature += float((K * dA).sum())
            rep.willmore_energy += float(((f["H"] ** 2 - K + 1.0) * dA).sum())
            rep.coverage += float((w * _sphere_density(z)).sum() * cell)
    if rep.samples:
        rep.K_mean = s1 / rep.samples
        rep.K_std = math.sqrt(max(s2 / rep.samples - rep.K_mean**2, 0.0))
    return rep


def area(grids) -> float:
    return measure(grids).area


def gauss_bonnet(grids) -> float:
    """Quadrature of ``integral K dA``; close to 4 pi for a sphere atlas."""
    return measure(grids).total_curvature


def willmore_energy(grids, min_coverage: float | None = 0.999) -> float:
    """Quadrature of ``(|H|^2 - K + 1) dA``.

    With ``min_coverage`` set, the grids must cover at least that fraction of
    the 4 pi solid angle (stereographic measure), else :class:`CoverageError`.
    Pass ``None`` for fundamental domains of tori and other non-spherical charts.
    """
    rep = measure(grids)
    if min_coverage is not None and rep.coverage < min_coverage * 4 * math.pi:
        raise CoverageError(f"charts cover {rep.coverage / (4 * math.pi):.4f} of the sphere, need {min_coverage}")
    return rep.willmore_energy


# two-chart atlas ------------------------------------------------------------


def smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def inner_weight(z: np.ndarray, delta: float) -> np.ndarray:
    """1 well inside the unit circle, 0 well outside; ``f(t) + f(-t) = 1`` in ``t = log|z|``."""
    r = np.abs(z)
    with np.errstate(divide="ignore"):
        t = np.log(r)
    return smooth_step((delta - t) / (2 * delta))


def sphere_atlas(immersion: Callable, h: float, delta: float = 0.05) -> list[SurfaceGrid]:
    """Two grids covering the Riemann sphere: ``z`` near 0 and ``w = 1/z`` near infinity."""
    R = math.exp(delta) + (HALO + 2) * h
    R = math.ceil(R / h) * h
    chart = (-R, R, -R, R)

    def outer(w):
        w = np.asarray(w, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(w == 0, complex(np.inf, 0), 1.0 / np.where(w == 0, 1.0, w))
        return immersion(z)

    weight = lambda z: inner_weight(z, delta)  # noqa: E731
    return [
        SurfaceGrid(chart, h, immersion=immersion, weight=weight),
        SurfaceGrid(chart, h, immersion=outer, weight=weight),
    ]


def veronese_atlas(m: int, h: float, delta: float = 0.05) -> list[SurfaceGrid]:
    return sphere_atlas(lambda z: veronese(m, z), h, delta)


# export ---------------------------------------------------------------------


def export_fields_csv(grid: SurfaceGrid, path) -> int:
    """Write ``u, v, K, |H|`` for every interior sample; returns the row count."""
    rows = 0
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["u", "v", "K", "H_norm"])
        for _, z, f in iter_fields(grid):
            for zz, K, H in zip(z.ravel(), f["K"].ravel(), f["H"].ravel()):
                out.writerow([repr(float(zz.real)), repr(float(zz.imag)), repr(float(K)), repr(float(H))])
                rows += 1
    return rows
