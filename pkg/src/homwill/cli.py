"""Command-line front end: ``homwill {rep,veronese,frame,verify,wu,solvable}``.

Every run writes one JSON report.  Each check carries its value, threshold,
a short description and PASS/FAIL; the exit status is

    0  all checks pass
    1  some threshold fails
    2  bad configuration or input that does not match the JSON schemas
    3  numerical failure (degenerate metric, projection, eigenvalue lattice)

Reports go to ``--out``, else to ``$HOMWILL_OUT_DIR/<subcommand>.json``, else stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import frames, geometry, so3, solvable, wu
from .exceptions import (
    CoverageError,
    DegenerateProjectionError,
    FormMismatchError,
    ImmersionError,
    LatticeRoundingError,
    MembershipError,
    RealityError,
)
from .linalg import form_residual
from .loops import LaurentLoop

OUT_DIR_ENV = "HOMWILL_OUT_DIR"
SUBCOMMANDS = ("rep", "veronese", "frame", "verify", "wu", "solvable")

DEFAULT_TOLS = {
    "commutation": 1e-12,
    "casimir": 1e-10,
    "conformality": 1e-5,
    "minimality": 1e-3,
    "curvature": 1e-3,
    "gauss_bonnet": 1e-2,
    "willmore": 0.2,
    "antipodal": 1e-10,
    "form": 1e-9,
    "frame_agreement": 1e-10,
    "homogeneity": 1e-8,
    "periodicity": 1e-9,
    "structure": 1e-8,
    "solvable": 1e-12,
    # second-order stencils: a grid of spacing h is allowed c * h^2 on top
    "conformality_h2": 25.0,
    "minimality_h2": 5.0,
    "curvature_h2": 10.0,
}
VERIFY_ITEMS = ("conformality", "minimality", "curvature", "gauss_bonnet", "willmore", "antipodal")


class SchemaError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    tolerances: dict = field(default_factory=dict)
    grid: int = 64
    chart: tuple = (-1.0, 1.0, -1.0, 1.0)
    input: str | None = None
    out: str | None = None
    csv: str | None = None
    seed: int = 0
    m: int | None = None
    spin: list = field(default_factory=list)
    ambient: bool = False
    irreducible: bool = False
    lambda_theta: float = 0.0
    verify: tuple = VERIFY_ITEMS
    p: int = 2
    example: str | None = None
    normalize: bool = False
    save_monodromy: str | None = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise SchemaError(f"unknown subcommand {self.subcommand!r}")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLS:
                raise SchemaError(f"unknown tolerance {name!r}; known: {', '.join(sorted(DEFAULT_TOLS))}")
            if not value > 0:
                raise SchemaError(f"tolerance {name} must be positive")
        if self.grid < 8:
            raise SchemaError("grid resolution must be at least 8")
        if len(self.chart) != 4 or self.chart[0] >= self.chart[1] or self.chart[2] >= self.chart[3]:
            raise SchemaError("chart must be u0,u1,v0,v1 with u0 < u1 and v0 < v1")
        bad = set(self.verify) - set(VERIFY_ITEMS)
        if bad:
            raise SchemaError(f"unknown verify items {sorted(bad)}")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLS[name]))

    def grid_tol(self, name: str, h: float) -> float:
        """``max(tol, c h^2)`` with ``c`` the ``<name>_h2`` allowance."""
        return max(self.tol(name), self.tol(f"{name}_h2") * h * h)


class Report:
    def __init__(self, config: RunConfig):
        self.config = config
        self.checks: list[dict] = []
        self.result: dict = {}

    def check(self, name: str, value, threshold, description: str, relation: str = "<=") -> bool:
        if relation == "<=":
            ok = bool(value <= threshold)
        elif relation == "==":
            ok = bool(value == threshold)
        else:
            raise ValueError(relation)
        self.checks.append({
            "name": name,
            "check": description,
            "value": _plain(value),
            "threshold": _plain(threshold),
            "relation": relation,
            "status": "PASS" if ok else "FAIL",
        })
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "PASS" for c in self.checks)

    def to_json(self) -> dict:
        cfg = {k: _plain(v) for k, v in self.config.__dict__.items() if k not in ("out",)}
        return {
            "subcommand": self.config.subcommand,
            "config": cfg,
            "result": _plain(self.result),
            "checks": self.checks,
            "status": "PASS" if self.passed else "FAIL",
        }


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


# subcommands -------------------------------------------------------------------


def run_rep(cfg: RunConfig, rep: Report) -> None:
    if not cfg.spin:
        raise SchemaError("rep needs --spin")
    spatial = so3.direct_sum([so3.build_irreducible(l) for l in cfg.spin])
    full = so3.direct_sum([so3.trivial(1), spatial]) if cfg.ambient else spatial
    rep.result["summands"] = so3.decompose(spatial)
    rep.result["multiplicities"] = [[k, v] for k, v in so3.weights(full).items()]
    rep.check("commutation", full.commutation_residual(), cfg.tol("commutation"), "so(3) commutation relations of the generators")
    if len(cfg.spin) == 1:
        l = cfg.spin[0]
        cas = float(np.abs(spatial.casimir() + l * (l + 1) * np.eye(spatial.dim)).max())
        rep.check("casimir", cas, cfg.tol("casimir"), "Casimir equals -l(l+1) I on an irreducible")
    if cfg.ambient:
        irr = so3.is_irreducible_ambient(full)
        rep.result["irreducible_ambient"] = irr
        if cfg.irreducible:
            rep.check("irreducible_ambient", irr, True, "weight 0 has multiplicity 2 on the ambient space", "==")
    elif cfg.irreducible:
        rep.check("irreducible", len(rep.result["summands"]) == 1, True, "single irreducible summand", "==")


def _veronese_checks(cfg: RunConfig, rep: Report, m: int) -> None:
    h = 2.2 / (cfg.grid - 1)
    need_geometry = set(cfg.verify) - {"antipodal"}
    if need_geometry:
        atlas = geometry.veronese_atlas(m, h)
        g = geometry.measure(atlas)
        K0 = geometry.veronese_curvature(m)
        rep.result.update(
            h=h,
            conformality=g.conformality,
            minimality=g.minimality,
            K_mean=g.K_mean,
            K_std=g.K_std,
            K_spread=g.K_max - g.K_min,
            area=g.area,
            gauss_bonnet=g.total_curvature,
            willmore_energy=g.willmore_energy,
            coverage=g.coverage / (4 * math.pi),
        )
        if g.coverage < 0.999 * 4 * math.pi:
            raise CoverageError(f"atlas covers {g.coverage / (4 * math.pi):.4f} of the sphere")
        if "conformality" in cfg.verify:
            rep.check("conformality", g.conformality, cfg.grid_tol("conformality", h),
                      "max(|E-G|,|F|)/E over the atlas")
        if "minimality" in cfg.verify:
            rep.check("minimality", g.minimality, cfg.grid_tol("minimality", h), "max |H| of the Boruvka-Veronese sphere")
        if "curvature" in cfg.verify:
            rep.check("K_spread", g.K_max - g.K_min, cfg.grid_tol("curvature", h), "Gauss curvature is constant")
            rep.check("K_mean", abs(g.K_mean - K0), cfg.grid_tol("curvature", h), f"mean Gauss curvature equals 2/(m(m+1)) = {K0:.12g}")
        if "gauss_bonnet" in cfg.verify:
            rep.check("gauss_bonnet", abs(g.total_curvature - 4 * math.pi), cfg.tol("gauss_bonnet"), "integral of K dA equals 4 pi")
        if "willmore" in cfg.verify:
            rep.check("willmore", abs(g.willmore_energy - (g.area - 4 * math.pi)), cfg.tol("willmore"),
                      "Willmore energy equals area - 4 pi for a minimal sphere")
    if "antipodal" in cfg.verify:
        rng = np.random.default_rng(cfg.seed)
        z = rng.normal(size=1000) + 1j * rng.normal(size=1000)
        parity, res = geometry.antipodal_parity(lambda w: geometry.veronese(m, w), z)
        rep.result["antipodal_parity"] = parity
        rep.result["antipodal_residual"] = res
        rep.check("antipodal_parity", parity, (-1) ** m, "y(-1/conj z) = (-1)^m y(z)", "==")
        rep.check("antipodal_residual", res, cfg.tol("antipodal"), "residual of the antipodal symmetry")


def run_veronese(cfg: RunConfig, rep: Report) -> None:
    if cfg.m is None or cfg.m < 1:
        raise SchemaError("veronese needs --m >= 1")
    rep.result["m"] = cfg.m
    _veronese_checks(cfg, rep, cfg.m)
    if cfg.csv:
        h = 2.2 / (cfg.grid - 1)
        rep.result["csv_rows"] = geometry.export_fields_csv(geometry.veronese_atlas(cfg.m, h)[0], cfg.csv)


def _read_json(path: str | None):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not JSON: {exc}") from exc


def _load_sphere_data(cfg: RunConfig) -> frames.HomogeneousSphereData:
    obj = _read_json(cfg.input)
    if obj is not None:
        if "A1" not in obj:
            raise SchemaError("monodromy JSON needs keys A1, A2, A3")
        try:
            return frames.HomogeneousSphereData.from_json(obj, validate=False)
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(str(exc)) from exc
    if cfg.m is None:
        raise SchemaError("give --input or --m")
    data = frames.veronese_monodromy(cfg.m)
    if cfg.save_monodromy:
        _write(cfg.save_monodromy, data.to_json())
    return data


def _grid_points(cfg: RunConfig) -> list[tuple[float, float]]:
    u0, u1, v0, v1 = cfg.chart
    us = np.linspace(u0, u1, cfg.grid)
    vs = np.linspace(v0, v1, cfg.grid)
    return [(float(u), float(v)) for u in us for v in vs]


def _mesh(points, samples, theta) -> dict:
    return {"grid": [list(p) for p in points], "points": np.asarray(samples).tolist(), "lambda_theta": theta}


def run_frame(cfg: RunConfig, rep: Report) -> None:
    pts = _grid_points(cfg)
    th = cfg.lambda_theta
    obj = _read_json(cfg.input)
    if cfg.example == "torus" or (obj is not None and "A" in obj):
        if obj is not None and "A" in obj:
            try:
                pot = frames.ConstantPotential(LaurentLoop.from_json(obj["A"]), LaurentLoop.from_json(obj["B"]))
            except KeyError as exc:
                raise SchemaError(f"potential JSON lacks {exc}") from exc
        else:
            pot = frames.torus_potential()
        Fs = [frames.frame_plane(pot, u, v, th) for u, v in pts]
        rep.check("form", max(form_residual(F, pot.A.form) for F in Fs), cfg.tol("form"), "frame preserves the Minkowski form")
        (ua, va), (ub, vb) = pts[1], pts[-2]
        law = float(np.abs(frames.frame_plane(pot, ua + ub, va + vb, th)
                           - frames.frame_plane(pot, ua, va, th) @ frames.frame_plane(pot, ub, vb, th)).max())
        rep.check("group_law", law, cfg.tol("form"), "F(p+q) = F(p) F(q) for a commuting potential")
        if cfg.example == "torus":
            Tu, Tv = frames.torus_periods(1.0, 1.0, th)
            close = max(
                float(np.linalg.norm(frames.lightcone_project(frames.frame_plane(pot, u + Tu, v + Tv, th))
                                     - frames.lightcone_project(frames.frame_plane(pot, u, v, th))))
                for u, v in pts[:: max(1, len(pts) // 16)]
            )
            rep.check("periodicity", close, cfg.tol("periodicity"), "orbit closes after the lattice periods")
        samples = [frames.lightcone_project(F) for F in Fs]
    else:
        data = _load_sphere_data(cfg)
        try:
            data.check()
        except ValueError as exc:
            rep.check("monodromy", 1.0, 0.0, f"so(3) relations of the monodromy data: {exc}")
            return
        if cfg.normalize:
            data = wu.normalize_monodromy(data)
        Fs = [frames.frame_sphere(data, complex(u, v), th) for u, v in pts]
        rep.check("form", max(form_residual(F, data.form) for F in Fs), cfg.tol("form"), "frame preserves the Minkowski form")
        agree = max(float(np.abs(F - frames.frame_sphere_polar(data, complex(u, v), th)).max()) for F, (u, v) in zip(Fs, pts))
        rep.check("polar_agreement", agree, cfg.tol("frame_agreement"), "polar and exponential forms of the frame agree")
        rep.check("origin", float(np.abs(frames.frame_sphere(data, 0.0, th) - np.eye(data.form.dimension)).max()), 0.0,
                  "frame is the identity at z = 0")
        hom = frames.homogeneity_residual(data, math.pi / 3, [complex(u, v) for u, v in pts[:: max(1, len(pts) // 16)]], th)
        rep.check("homogeneity", hom, cfg.tol("homogeneity"), "y(e^{it} z) = exp(-t A3) y(z)")
        samples = [frames.lightcone_project(F) for F in Fs]
    rep.result["mesh"] = _mesh(pts, samples, th)
    if cfg.csv:
        _write_mesh_csv(cfg.csv, pts, samples)


def _write_mesh_csv(path, pts, samples) -> None:
    samples = np.asarray(samples)
    header = "u,v," + ",".join(f"x{i + 1}" for i in range(samples.shape[1]))
    np.savetxt(path, np.column_stack([np.asarray(pts), samples]), delimiter=",", header=header, comments="", fmt="%.17g")


def _grid_from_mesh(obj: dict) -> geometry.SurfaceGrid:
    if isinstance(obj, dict) and "result" in obj:
        obj = obj["result"]
    if isinstance(obj, dict) and "mesh" in obj:
        obj = obj["mesh"]
    try:
        grid = np.asarray(obj["grid"], dtype=float)
        pts = np.asarray(obj["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"mesh JSON needs grid and points: {exc}") from exc
    if grid.ndim != 2 or grid.shape[1] != 2 or pts.ndim != 2 or len(pts) != len(grid):
        raise SchemaError("mesh grid/points have inconsistent shapes")
    us, vs = np.unique(grid[:, 0]), np.unique(grid[:, 1])
    if len(us) * len(vs) != len(grid):
        raise SchemaError("mesh grid is not a full rectangular lattice")
    h = float(us[1] - us[0]) if len(us) > 1 else 0.0
    if h <= 0 or np.abs(np.diff(us) - h).max() > 1e-9 * h or np.abs(np.diff(vs) - h).max() > 1e-9 * h:
        raise SchemaError("mesh grid must be uniform with equal spacing in u and v")
    order = np.lexsort((grid[:, 1], grid[:, 0]))
    Y = pts[order].reshape(len(us), len(vs), -1)
    try:
        return geometry.SurfaceGrid((us[0], us[-1], vs[0], vs[-1]), h, samples=Y)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def run_verify(cfg: RunConfig, rep: Report) -> None:
    obj = _read_json(cfg.input)
    if obj is None:
        if cfg.m is None:
            raise SchemaError("verify needs --input mesh.json or --m")
        rep.result["m"] = cfg.m
        _veronese_checks(cfg, rep, cfg.m)
        return
    grid = _grid_from_mesh(obj)
    g = geometry.measure(grid)
    rep.result.update(
        conformality=g.conformality,
        minimality=g.minimality,
        K_mean=g.K_mean,
        K_std=g.K_std,
        willmore_energy=g.willmore_energy,
        gauss_bonnet=g.total_curvature,
        area=g.area,
    )
    if "conformality" in cfg.verify:
        rep.check("conformality", g.conformality, cfg.grid_tol("conformality", grid.h), "max(|E-G|,|F|)/E on the mesh")
    if "minimality" in cfg.verify:
        rep.check("minimality", g.minimality, cfg.grid_tol("minimality", grid.h), "max |H| on the mesh")
    if cfg.csv:
        rep.result["csv_rows"] = geometry.export_fields_csv(grid, cfg.csv)


def run_wu(cfg: RunConfig, rep: Report) -> None:
    data = _load_sphere_data(cfg)
    tol = cfg.tol("structure")
    rels = data.commutation_residuals()
    rep.check("so3_relations", max(rels), tol, "[A3,A2] = -A1, [A3,A1] = A2, [A1,A2] = A3 as Laurent identities")
    if max(rels) > tol:
        return
    out = wu.analyze(data)
    rep.result.update(out)
    rep.check("L1_plus_iH1", out["L1_plus_iH1"], tol, "Willmore condition L1 = -i H1")
    rep.check("hol_mc_lambda1", out["hol_mc_lambda1"], tol, "holomorphic part -A2 + iA1 has no lambda^1 term")
    names = ("[A3,L1] = -iL1", "[A3,beta0] = -i beta0", "[H0,L0] + 2i[L1,conj L1] = A3", "[conj L1, beta0] = 0")
    for k, (name, v) in enumerate(zip(names, out["comm_residuals"]), 1):
        rep.check(f"comm_{k}", v, tol, name)
    rep.check("isotropy", out["isotropy"], tol, "B1^t I_{1,3} B1 = 0")
    for name, v in out["block_shape_residuals"].items():
        rep.check(f"block_{name}", v, tol, "block shape forced by the eigenvalue relations")
    rep.check("identity_residual", abs(out["identity_residual"]), tol, "|c|^2 - |a|^2 = 1 + 8 sum|c1|^2 - 4 sum(|b|^2 + |bhat|^2)")
    rep.check("minimal_certificate", out["minimal_certificate"], True, "normalized potential takes values in so(n+3)", "==")


def run_solvable(cfg: RunConfig, rep: Report) -> None:
    if cfg.p < 2:
        raise SchemaError("solvable needs --p >= 2")
    alg = solvable.build_solvable(cfg.p)
    out = solvable.verify_structure(alg)
    tol = cfg.tol("solvable")
    rep.result.update(out)
    for key, desc in (
        ("span_closure", "pairwise brackets lie in the span"),
        ("ideal_closure", "[S,S] lies in N"),
        ("E_N_relation", "[E,N] = N"),
        ("abelian", "N is abelian"),
        ("nilpotent", "N_i^3 = 0"),
    ):
        rep.check(key, out[key], tol, desc)
    rep.check("solvable", out["solvable"], True, "derived series reaches 0", "==")
    rep.check("dimension", out["dimension"], cfg.p, "dim S = p", "==")
    res, flags = solvable.halfplane_bracket_check(solvable.SIGMA3, solvable.NU)
    rep.result["halfplane_bracket"] = {"residual": res, "flags": flags}
    rep.check("halfplane_bracket", res, tol, "[sigma3, nu] = 2 nu in the defining action")


RUNNERS = {
    "rep": run_rep,
    "veronese": run_veronese,
    "frame": run_frame,
    "verify": run_verify,
    "wu": run_wu,
    "solvable": run_solvable,
}


# argument handling -------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homwill", description="Homogeneous Willmore surfaces: constructions and checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags override it")
    common.add_argument("--tol", action="append", type=_tol_pair, default=None, metavar="NAME=VALUE")
    common.add_argument("--grid", type=int, help="samples per side")
    common.add_argument("--chart", type=_float_list, help="u0,u1,v0,v1")
    common.add_argument("--out", help="report path")
    common.add_argument("--csv", help="CSV export path")
    common.add_argument("--seed", type=int)
    common.add_argument("--input", help="input JSON")
    common.add_argument("--m", type=int, help="Veronese degree")
    common.add_argument("--lambda-theta", dest="lambda_theta", type=float)
    common.add_argument("--verify", help="comma list of checks or 'all'")

    p = sub.add_parser("rep", parents=[common], help="build and decompose so(3) representations")
    p.add_argument("--spin", type=_int_list, help="comma-separated spins of the spatial summands")
    p.add_argument("--ambient", action="store_true", default=None, help="prepend the trivial timelike line")
    p.add_argument("--irreducible", action="store_true", default=None, help="require irreducibility")

    sub.add_parser("veronese", parents=[common], help="geometry of a Boruvka-Veronese sphere")

    p = sub.add_parser("frame", parents=[common], help="sample extended frames and project to the sphere")
    p.add_argument("--example", choices=["torus"])
    p.add_argument("--normalize", action="store_true", default=None, help="boost monodromy data to a=0 first")
    p.add_argument("--save-monodromy", dest="save_monodromy")

    sub.add_parser("verify", parents=[common], help="geometry checks on a mesh or a Veronese sphere")

    p = sub.add_parser("wu", parents=[common], help="normalized potential and block structure")
    p.add_argument("--save-monodromy", dest="save_monodromy")

    p = sub.add_parser("solvable", parents=[common], help="solvable subalgebra of so(1,p)")
    p.add_argument("--p", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        obj = _read_json(args.config)
        if not isinstance(obj, dict):
            raise SchemaError("config file must hold a JSON object")
        values.update(obj)
    for key, value in vars(args).items():
        if key in ("config", "tol") or value is None:
            continue
        values[key] = value
    tols = dict(values.pop("tolerances", {}) or {})
    if args.tol:
        tols.update(dict(args.tol))
    verify = values.pop("verify", None)
    if isinstance(verify, str):
        verify = VERIFY_ITEMS if verify == "all" else tuple(v.strip() for v in verify.split(",") if v.strip())
    elif verify is not None:
        verify = tuple(verify)
    values["subcommand"] = args.subcommand
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise SchemaError(f"unknown config keys {sorted(unknown)}")
    if "chart" in values:
        values["chart"] = tuple(float(c) for c in values["chart"])
    if "spin" in values and isinstance(values["spin"], int):
        values["spin"] = [values["spin"]]
    try:
        return RunConfig(tolerances=tols, **({"verify": verify} if verify else {}), **values)
    except TypeError as exc:
        raise SchemaError(str(exc)) from exc


def _write(path, obj) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(out: str | None, subcommand: str, payload: dict) -> None:
    target = out
    if target is None and os.environ.get(OUT_DIR_ENV):
        target = os.path.join(os.environ[OUT_DIR_ENV], f"{subcommand}.json")
    if target is None:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _write(target, payload)


def _glue_chart(argv: list[str]) -> list[str]:
    """``--chart -1,1,-1,1`` would read as a flag; rewrite it as ``--chart=-1,1,-1,1``."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--chart":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--chart={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_chart(argv))
    cfg = None
    try:
        cfg = config_from_args(args)
        report = Report(cfg)
        RUNNERS[cfg.subcommand](cfg, report)
    except (SchemaError, FormMismatchError, MembershipError, RealityError) as exc:
        _emit(args.out, args.subcommand, {"subcommand": args.subcommand, "status": "ERROR", "error": f"schema: {exc}"})
        print(f"homwill: {exc}", file=sys.stderr)
        return 2
    except (ImmersionError, DegenerateProjectionError, LatticeRoundingError, CoverageError, np.linalg.LinAlgError) as exc:
        _emit(args.out, args.subcommand, {"subcommand": args.subcommand, "status": "ERROR", "error": f"numerical: {exc}"})
        print(f"homwill: {exc}", file=sys.stderr)
        return 3
    _emit(cfg.out, cfg.subcommand, report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
