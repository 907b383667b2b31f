"""Command line front end.

Subcommands:

* ``spiral``     integrate the curvature ODE, reconstruct the curve, export CSV
* ``build``      generate a hypersurface and export an OBJ slice + JSON descriptor
* ``invariants`` tabulate the Moebius invariants at sample points (CSV)
* ``verify``     run the verification suite (JSON + markdown report)
* ``rigidity``   closure experiment around the half-plane equilibrium

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .checks import (
    CONVENTION_BY_NAME,
    build_family,
    inner_scheme,
    outer_scheme,
    rigidity_scan,
    run_suite,
    sample_points,
    spiral_trajectory,
)
from .config import RunConfig, load_config
from .errors import ConfigError, MobiusFlatError
from .fd import FDScheme
from .meshes import export_obj_slice
from .moebius import fields_from_immersion, moebius_data, moebius_scalar
from .spiral import (
    IntegratorControls,
    SpiralParams,
    SpiralState,
    export_csv,
    integrate_spiral,
    reconstruct_curve,
)
from .zoo import torus_immersion

FAMILY_EPSILON = {"cylinder": 0, "cone": 1, "rotational": -1}


def _controls(cfg: RunConfig) -> IntegratorControls:
    return IntegratorControls(
        s_max=cfg.s_max,
        step=cfg.step,
        kappa_floor=cfg.kappa_floor,
        kappa_ceiling=cfg.kappa_ceiling,
    )


def _build_surface(cfg: RunConfig):
    if cfg.family == "torus":
        return torus_immersion(cfg.torus_r, cfg.n), None
    eps = FAMILY_EPSILON[cfg.family]
    traj = spiral_trajectory(
        cfg.n, eps, cfg.R, cfg.kappa0, cfg.kappa_s0, cfg.s_max, cfg.step, cfg.spiral_variant
    )
    return build_family(traj, cfg.n), traj


def cmd_spiral(cfg: RunConfig, out: str, convention: str) -> int:
    params = SpiralParams(cfg.n, cfg.epsilon, cfg.R, variant=cfg.spiral_variant)
    traj = integrate_spiral(
        params, SpiralState(0.0, cfg.kappa0, cfg.kappa_s0), _controls(cfg)
    )
    traj = reconstruct_curve(traj)
    path = os.path.join(out, "trajectory.csv")
    export_csv(traj, path)
    print(
        f"spiral: {traj.s.size} samples to s = {traj.s_end:.6g} "
        f"({traj.termination}); first-integral drift {traj.first_integral_drift():.3e}"
    )
    print(f"wrote {path}")
    return 0


def cmd_build(cfg: RunConfig, out: str, convention: str) -> int:
    imm, _ = _build_surface(cfg)
    axes = tuple(int(a) for a in cfg.slice_axes.split(","))
    ambient: tuple | str = "auto"
    if cfg.obj_axes.strip() != "auto":
        ambient = tuple(int(a) for a in cfg.obj_axes.split(","))
    desc = export_obj_slice(
        imm, out, axes=axes, res=cfg.slice_res, ambient_axes=ambient, stem=cfg.family
    )
    print(f"build: {cfg.family} slice {desc['vertices']} vertices, {desc['faces']} faces")
    print(f"wrote {os.path.join(out, desc['obj_file'])} and descriptor")
    return 0


def cmd_invariants(cfg: RunConfig, out: str, convention: str) -> int:
    imm, _ = _build_surface(cfg)
    scheme = inner_scheme(cfg)
    fscheme = FDScheme(step=0.005, order=cfg.fd_order, scaled=False)
    fields = fields_from_immersion(imm, scheme)
    rng = np.random.default_rng(cfg.seed)
    pts = sample_points(imm, cfg.samples, rng, cfg.jitter)
    conv = CONVENTION_BY_NAME[convention]
    n = cfg.n
    header = (
        [f"x{i}" for i in range(n)]
        + ["rho", "H"]
        + [f"lambda{i + 1}" for i in range(n)]
        + [f"B_eig{i + 1}" for i in range(n)]
        + [f"A_eig{i + 1}" for i in range(n)]
        + [f"C{i + 1}" for i in range(n)]
        + ["trace_B", "norm2_B_defect", "commutator", "scalar_direct", "scalar_conformal"]
    )
    rows = []
    for p in pts:
        d = moebius_data(fields, p, fscheme)
        s = moebius_scalar(fields, p, scheme, conv, outer_scheme(cfg))
        rows.append(
            list(p)
            + [d.rho, d.H]
            + list(d.principal_curvatures)
            + list(d.B_eigenvalues)
            + list(d.A_eigenvalues)
            + list(d.C)
            + [
                d.trace_B(),
                d.norm2_B() - (n - 1) / n,
                d.commutator_norm(),
                s.direct,
                s.conformal_route,
            ]
        )
    path = os.path.join(out, "invariants.csv")
    with open(path, "w") as fh:
        fh.write(f"# family={cfg.family} n={n} convention={convention} seed={cfg.seed}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"invariants: {len(rows)} samples ({convention} convention)")
    print(f"wrote {path}")
    return 0


def cmd_verify(cfg: RunConfig, out: str, convention: str) -> int:
    report = run_suite(cfg)
    json_path = os.path.join(out, "report.json")
    with open(json_path, "w") as fh:
        fh.write(report.to_json())
    md_path = os.path.join(out, "report.md")
    with open(md_path, "w") as fh:
        fh.write(report.to_markdown())
    csv_path = os.path.join(out, "checks.csv")
    with open(csv_path, "w") as fh:
        fh.write("name,kind,samples,max_residual,tolerance,passed\n")
        for r in report.records:
            fh.write(
                f"{r.name},{r.kind},{r.samples},{r.max_residual!r},{r.tolerance!r},{r.passed}\n"
            )
    resid_path = os.path.join(out, "residuals.csv")
    with open(resid_path, "w") as fh:
        fh.write("check,key,value\n")

        def emit(check, key, value):
            if isinstance(value, dict):
                for k, v in value.items():
                    emit(check, f"{key}.{k}", v)
            elif isinstance(value, (list, tuple)):
                for i, v in enumerate(value):
                    emit(check, f"{key}[{i}]", v)
            elif isinstance(value, (int, float, np.floating, np.integer, bool, np.bool_)):
                fh.write(f"{check},{key},{float(value)!r}\n")
            else:
                fh.write(f"{check},{key},{value}\n")

        for r in report.records:
            for key, value in r.details.items():
                emit(r.name, key, value)
    for r in report.records:
        status = "ERROR" if r.error else ("pass" if r.passed else "FAIL")
        if r.kind == "audit" and not r.error:
            status = "audit"
        print(f"  [{status:5s}] {r.name}: residual {r.max_residual:.3e} (tol {r.tolerance:.3e})")
    ok = report.all_asserts_pass
    print(f"verify: {'PASS' if ok else 'FAIL'} ({len(report.records)} checks)")
    print(f"wrote {json_path}, {md_path}, {csv_path}, {resid_path}")
    return 0 if ok else 1


def cmd_rigidity(cfg: RunConfig, out: str, convention: str) -> int:
    result = rigidity_scan(cfg)
    path = os.path.join(out, "rigidity.json")
    with open(path, "w") as fh:
        json.dump(result, fh, indent=2, sort_keys=False)
        fh.write("\n")
    if "grid" in result:
        csv_path = os.path.join(out, "rigidity_grid.csv")
        with open(csv_path, "w") as fh:
            fh.write("kappa0,kappa_s0,status,min_defect,termination\n")
            for row in result["grid"]:
                fh.write(
                    f"{row['kappa0']!r},{row['kappa_s0']!r},{row['status']},"
                    f"{row['min_defect']!r},{row['termination']}\n"
                )
    eq = result.get("equilibrium", {})
    print(
        f"rigidity: status {result['status']}; equilibrium {eq.get('status')} "
        f"(defect {eq.get('defect', float('nan')):.3e}), "
        f"grid closures {result.get('grid_closures', 'n/a')}"
    )
    print(f"wrote {path}")
    return 0 if result["status"] in ("pass", "trivial") else 1


COMMANDS = {
    "spiral": cmd_spiral,
    "build": cmd_build,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "rigidity": cmd_rigidity,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobiusflat",
        description="Moebius invariants of conformally flat hypersurfaces: "
        "construction, invariants, and verification.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", default=None, help="path to a key = value config file")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument(
            "--convention",
            choices=("half", "full", "normalized"),
            default="full",
            help="scalar-curvature normalization for reported values",
        )
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = int(args.seed)
            cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    try:
        return COMMANDS[args.command](cfg, args.out, args.convention)
    except MobiusFlatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
