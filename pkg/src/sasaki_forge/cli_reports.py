"""Command-line front end and reproducible JSON/CSV reports.

Subcommands::

    cone-analyze     rays, Gorenstein point and the initial Reeb slice
    reeb-minimize    critical Reeb vector, volume, regularity
    profile-ke       KE profile, e^{c0}, optional grid CSV
    profile-soliton  soliton profile (mu required when kappa <= 2)
    verify           residual / positivity / round-trip suite for a profile
    asymptotics      decay orders of the Calabi-Yau metric against the cone
    full-pipeline    cone -> Reeb -> D-homothetic bookkeeping -> profile -> checks

Grid CSV columns: ``tau, phi, dphi, d2phi, residual`` (profile commands),
``tau, res_T, res_t`` (verify), ``t, tau, F, phi`` (``--coords``).

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .cone_model import (
    PRESETS,
    MomentCone,
    barycenter,
    cone_from_json,
    fraction_str,
    gorenstein_point,
    preset_cone,
    slice_polytope,
    volume_functional,
)
from .coordinates import (
    coordinate_map,
    coordinate_rows,
    default_anchor,
    scaling_constant_e_c0,
    t_of_tau,
    tau_of_t,
    zero_section_limit,
)
from .curvature_check import asymptotic_decay, d_homothetic, max_scaled_residual, residual_table
from .errors import SasakiForgeError, ValidationError
from .profiles import (
    Profile,
    ProfileKE,
    eval_phi,
    growth_class,
    growth_coefficient,
    ke_profile,
    residual,
    soliton_profile,
)
from .reeb_minimizer import _tangent_basis, fd_gradient, initial_reeb, minimize_volume

TASKS = (
    "cone-analyze",
    "reeb-minimize",
    "profile-ke",
    "profile-soliton",
    "verify",
    "asymptotics",
    "full-pipeline",
)
DEFAULT_TOL = 1e-10
VERIFY_GRID = (1e-6, 1e6, 200)


# ---------------------------------------------------------------------------
# deterministic serialization


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    return json.dumps(obj)


def dumps(report) -> str:
    """JSON with sorted keys and every float printed to 17 significant digits."""
    return _encode(_plain(report), 2, 0) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(float(x), ".17g") for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    task: str
    preset: str | None = None
    normals_file: str | None = None
    m: int | None = None
    p: int | None = None
    k: int | None = None
    kappa: float | None = None
    mu: float | None = None
    tol: float = DEFAULT_TOL
    grid: tuple[float, float, int] | None = None
    coords: bool = False
    out: str | None = None
    format: str = "json"
    extras: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ValidationError(f"unknown task {self.task!r}")
        if self.preset is not None and self.preset not in PRESETS:
            raise ValidationError(f"preset must be one of {sorted(PRESETS)}")
        if not 1e-12 <= self.tol <= 1e-4:
            raise ValidationError(f"--tol {self.tol} outside [1e-12, 1e-4]")
        if self.format not in ("json", "csv", "both"):
            raise ValidationError("--format must be json, csv or both")

    def inputs(self) -> dict:
        out = {"task": self.task}
        for key in ("preset", "normals_file", "m", "p", "k", "kappa", "mu", "tol", "grid"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val) if isinstance(val, tuple) else val
        return out


def parse_grid(text: str) -> tuple[float, float, int]:
    """``lo:hi:n`` -> n equal subintervals (n + 1 points, both ends included)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValidationError(f"--grid expects lo:hi:n, got {text!r}") from None
    if n < 1 or not hi > lo or lo < 0:
        raise ValidationError(f"--grid needs 0 <= lo < hi and n >= 1, got {text!r}")
    return lo, hi, n


def _grid_points(grid) -> np.ndarray:
    lo, hi, n = grid
    return np.linspace(lo, hi, n + 1)


def _load_cone(cfg: RunConfig) -> MomentCone:
    if cfg.normals_file:
        with open(cfg.normals_file) as fh:
            return cone_from_json(json.load(fh))
    if cfg.preset:
        return preset_cone(cfg.preset)
    raise ValidationError("give --preset or --normals-file")


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(cfg, n) is None]
    if missing:
        raise ValidationError(f"{cfg.task} requires {', '.join(missing)}")


# ---------------------------------------------------------------------------
# report sections


def cone_section(cone: MomentCone) -> dict:
    beta = gorenstein_point(cone)
    xi0 = initial_reeb(cone, beta)
    poly = slice_polytope(cone, xi0)
    return {
        "dim": cone.n,
        "normals": [list(v) for v in cone.normals],
        "rays": [list(r) for r in cone.rays],
        "beta": beta.to_json(),
        "initial_reeb": list(xi0.xi),
        "initial_slice_vertices": poly.vertices,
        "initial_volume": volume_functional(cone, xi0),
        "initial_barycenter": barycenter(poly),
    }


def reeb_section(cone: MomentCone, tol: float) -> dict:
    res = minimize_volume(cone, tol=tol)
    beta = np.asarray(gorenstein_point(cone))
    grad = fd_gradient(cone, res.xi_star, _tangent_basis(beta))
    out = res.to_json()
    out["fd_gradient_norm"] = float(np.linalg.norm(grad))
    out["pairing_with_beta"] = float(np.asarray(res.xi_star) @ beta)
    return out


def profile_section(profile: Profile) -> dict:
    phi0, d1, d2 = eval_phi(profile, 0.0)
    e_c0 = scaling_constant_e_c0(profile)
    out = profile.to_json()
    out.update({
        "phi_at_0": phi0,
        "dphi_at_0": d1,
        "growth_class": growth_class(profile).value,
        "growth_coefficient": growth_coefficient(profile),
        "anchor_tau0": default_anchor(profile.m),
        "e_c0": e_c0,
        "zero_section_limit": list(zero_section_limit(profile)),
    })
    return out


def grid_rows(profile: Profile, taus) -> list[tuple]:
    phi, d1, d2 = eval_phi(profile, np.asarray(taus, dtype=float))
    res = residual(profile, np.asarray(taus, dtype=float))
    return list(zip(taus, phi, d1, d2, res))


def verification_section(profile: Profile) -> dict:
    lo, hi, n = VERIFY_GRID
    taus = np.geomspace(lo, hi, n)
    cmap = coordinate_map(profile)
    round_trip = max(
        abs(tau_of_t(cmap, t_of_tau(cmap, x)) / x - 1.0) for x in np.geomspace(1e-6, 1e4, 25)
    )
    phi0, d1, _ = eval_phi(profile, 0.0)
    pos_grid = np.geomspace(1e-8, 1e6, 400)
    e_c0 = scaling_constant_e_c0(profile)
    x = 1e-8
    limit_ratio = eval_phi(profile, x)[0] / math.exp(2 * t_of_tau(cmap, x))
    return {
        "curvature_residual_max_scaled": max_scaled_residual(profile, taus),
        "ode_residual_max_scaled": float(np.max(np.abs(residual(profile, taus)) / (1 + taus) ** 2)),
        "residual_grid": {"lo": lo, "hi": hi, "n": n, "spacing": "log"},
        "residual_tolerance": 1e-10,
        "phi_min_on_positivity_grid": float(np.min(eval_phi(profile, pos_grid)[0])),
        "boundary_phi0": phi0,
        "boundary_dphi0_minus_2": d1 - 2.0,
        "round_trip_max_rel_error": round_trip,
        "round_trip_tolerance": 1e-9,
        "e_c0": e_c0,
        "limit_law_ratio_at_1e-8": limit_ratio,
        "limit_law_error": abs(limit_ratio - 2 * e_c0),
    }


def _profile_from_cfg(cfg: RunConfig, soliton: bool) -> Profile:
    if cfg.m is None:
        raise ValidationError(f"{cfg.task} requires --m")
    if not soliton:
        _require(cfg, "p", "k")
        return ke_profile(cfg.m, cfg.p, cfg.k)
    if cfg.kappa is not None:
        kappa = cfg.kappa
    elif cfg.p is not None and cfg.k is not None:
        kappa = 2.0 * cfg.p / cfg.k
    else:
        raise ValidationError(f"{cfg.task} requires --kappa or --p/--k")
    if kappa <= 2 and cfg.mu is None:
        raise ValidationError(
            f"kappa={kappa:g} <= 2 (expanding/steady): pass --mu with a value mu < 0"
        )
    return soliton_profile(cfg.m, kappa, cfg.mu)


def full_pipeline(cfg: RunConfig) -> dict:
    """cone -> beta -> xi* -> regularity -> D-homothetic kappa -> profile -> checks."""
    _require(cfg, "p", "k")
    cone = _load_cone(cfg)
    m = cone.m if cfg.m is None else cfg.m
    if m != cone.m:
        raise ValidationError(f"--m {m} does not match the cone (complex dimension {cone.m + 1})")
    report = {"cone": cone_section(cone), "reeb": reeb_section(cone, cfg.tol)}

    p, k = cfg.p, cfg.k
    kappa = Fraction(2 * p, k)
    a = Fraction(p, k * (m + 1))
    to_se = d_homothetic(kappa, a)
    back = d_homothetic(to_se.kappa_out, 1 / a)
    xi_star = np.asarray(report["reeb"]["xi"])
    report["d_homothetic"] = {
        "kappa": kappa,
        "a": a,
        "kappa_sasaki_einstein": to_se.kappa_out,
        "kappa_back": back.kappa_out,
        "eta_einstein_reeb": float(a) * xi_star,
    }

    if k >= p:
        profile: Profile = ke_profile(m, p, k)
    else:
        profile = soliton_profile(m, float(kappa), None)
    report["profile"] = profile_section(profile)
    report["verification"] = verification_section(profile)
    if k >= p and cfg.mu is not None:
        sol = soliton_profile(m, float(kappa), cfg.mu)
        report["soliton"] = profile_section(sol)
        report["soliton_verification"] = verification_section(sol)
    if k == p:
        report["asymptotics"] = asymptotic_decay(m).to_json()
    return report


def _dispatch(cfg: RunConfig) -> tuple[dict, tuple | None]:
    """Compute the report body and an optional ``(header, rows)`` CSV."""
    csv_out = None
    if cfg.task == "cone-analyze":
        body = {"cone": cone_section(_load_cone(cfg))}
    elif cfg.task == "reeb-minimize":
        cone = _load_cone(cfg)
        body = {"cone": {"dim": cone.n, "normals": [list(v) for v in cone.normals],
                         "beta": gorenstein_point(cone).to_json()},
                "reeb": reeb_section(cone, cfg.tol)}
    elif cfg.task in ("profile-ke", "profile-soliton"):
        profile = _profile_from_cfg(cfg, soliton=cfg.task == "profile-soliton")
        body = {"profile": profile_section(profile)}
        if cfg.coords:
            lo, hi, n = cfg.grid or (-3.0, 3.0, 60)
            cmap = coordinate_map(profile)
            csv_out = (("t", "tau", "F", "phi"), coordinate_rows(cmap, np.linspace(lo, hi, n + 1)))
        elif cfg.grid:
            csv_out = (("tau", "phi", "dphi", "d2phi", "residual"),
                       grid_rows(profile, _grid_points(cfg.grid)))
    elif cfg.task == "verify":
        soliton = cfg.kappa is not None or cfg.mu is not None or (
            cfg.p is not None and cfg.k is not None and cfg.k < cfg.p)
        profile = _profile_from_cfg(cfg, soliton=soliton)
        body = {"profile": profile_section(profile), "verification": verification_section(profile)}
        taus = np.geomspace(*VERIFY_GRID[:2], VERIFY_GRID[2])
        csv_out = (("tau", "res_T", "res_t"), residual_table(profile, taus))
    elif cfg.task == "asymptotics":
        _require(cfg, "m")
        body = {"asymptotics": asymptotic_decay(cfg.m).to_json()}
    else:
        body = full_pipeline(cfg)
    return body, csv_out


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one task; returns the process exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
        body, csv_out = _dispatch(cfg)
    except SasakiForgeError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1

    report = {
        "provenance": {"package": "sasaki_forge", "version": __version__, "inputs": cfg.inputs()},
        **body,
    }
    text = dumps(report)
    csv_body = csv_text(*csv_out) if csv_out is not None else None
    want_json = cfg.format in ("json", "both")
    want_csv = cfg.format in ("csv", "both") or (csv_body is not None and cfg.out is not None)

    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        if want_json:
            (out / "report.json").write_text(text)
        if want_csv and csv_body is not None:
            (out / "grid.csv").write_text(csv_body)
    else:
        if want_json:
            stdout.write(text)
        if cfg.format in ("csv", "both") and csv_body is not None:
            stdout.write(csv_body)
    return 0


# ---------------------------------------------------------------------------
# argparse


def _grid_arg(text: str):
    try:
        return parse_grid(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sasaki-forge",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="task", required=True, parser_class=_Parser)
    for task in TASKS:
        sp = sub.add_parser(task)
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--normals-file", help='JSON {"dim": n, "normals": [[...], ...]}')
        sp.add_argument("--m", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--kappa", type=float)
        sp.add_argument("--mu", type=float)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--grid", type=_grid_arg, metavar="LO:HI:N",
                        help="N equal steps from LO to HI (N+1 rows)")
        sp.add_argument("--coords", action="store_true",
                        help="emit t, tau, F, phi columns instead of the profile grid")
        sp.add_argument("--out", metavar="DIR")
        sp.add_argument("--format", choices=("json", "csv", "both"), default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1, --help / --version exit 0
        return exc.code
    cfg = RunConfig(
        task=args.task, preset=args.preset, normals_file=args.normals_file,
        m=args.m, p=args.p, k=args.k, kappa=args.kappa, mu=args.mu, tol=args.tol,
        grid=args.grid, coords=args.coords, out=args.out, format=args.format,
    )
    return run(cfg)
