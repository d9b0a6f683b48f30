"""quadflow command line interface.

Subcommands
-----------
run <config>...   integrate the flow and write the configured artifacts;
                  several configs run in parallel (QUADFLOW_THREADS caps
                  the worker count), each in its own output directory
verify            run the oracle cross-check table for a preset or config
green <config>    integrate and write only the Green-function samples
print-odes        dump the flow right-hand side at a given (a(t), alpha)

Failures print a machine-readable JSON object to stderr
({"error": code, "detail": text, "at": location}) and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import flow as flow_mod
from . import observables, oracles, propagator
from .adjoint import adjoint_closed_form, adjoint_matrix
from .config import RunConfig, load_config
from .errors import QuadflowError
from .reduction import assemble, reference_odes
from .schedule import CoefficientSchedule


def _fail(exc: Exception, where: str) -> int:
    code = getattr(exc, "code", "error")
    payload = {"error": code, "detail": str(exc), "at": where}
    print(json.dumps(payload), file=sys.stderr)
    return 1


def _green_samples(cfg: RunConfig, result) -> list:
    req = cfg.green
    times = list(req.times) if req.times else [result.final.t]
    samples = []
    for t in times:
        alpha = result.interpolate(t)
        pts = list(req.points)
        if req.grid_extent is not None:
            axis = np.linspace(-req.grid_extent, req.grid_extent,
                               req.grid_points)
            xs, ys = np.meshgrid(axis, axis, indexing="ij")
            pts += [(float(x), float(y), req.source[0], req.source[1])
                    for x, y in zip(xs.ravel(), ys.ravel())]
        for (x, y, xp, yp) in pts:
            s = propagator.green(alpha, cfg.schedule.hbar, x, y, xp, yp, t=t)
            samples.append(s)
    return samples


def run_config_file(path, outdir=None) -> dict:
    """Execute one config; returns {"config": ..., "written": [...]}."""
    cfg = load_config(path)
    out_base = Path(outdir) if outdir else Path(path).resolve().parent
    out_base.mkdir(parents=True, exist_ok=True)
    result = flow_mod.integrate(
        cfg.schedule, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol,
        max_step=cfg.max_step, magnitude_cap=cfg.magnitude_cap,
        samples=cfg.samples)
    written = []
    if "alphas" in cfg.outputs:
        dest = out_base / cfg.outputs["alphas"]
        flow_mod.write_alphas_csv(result, dest)
        written.append(str(dest))
    if "heisenberg" in cfg.outputs:
        dest = out_base / cfg.outputs["heisenberg"]
        observables.write_heisenberg_json(result, dest)
        written.append(str(dest))
    if "green" in cfg.outputs:
        if cfg.green is None:
            raise QuadflowError("green output requested without [green] section")
        dest = out_base / cfg.outputs["green"]
        propagator.write_green_csv(_green_samples(cfg, result), dest)
        written.append(str(dest))
    info = {"config": str(path), "written": written,
            "t_final": result.final.t}
    if result.breakdown is not None:
        info["breakdown"] = {"t_break": result.breakdown.t_break,
                             "index": result.breakdown.index,
                             "reason": result.breakdown.reason}
    return info


def _cmd_run(args) -> int:
    configs = args.config
    jobs = []
    for path in configs:
        outdir = args.outdir
        if outdir and len(configs) > 1:
            outdir = str(Path(outdir) / Path(path).stem)
        jobs.append((path, outdir))
    try:
        if len(jobs) == 1:
            infos = [run_config_file(*jobs[0])]
        else:
            max_workers = int(os.environ.get("QUADFLOW_THREADS", "0")) \
                or min(len(jobs), os.cpu_count() or 1)
            with ProcessPoolExecutor(max_workers=max_workers) as pool:
                infos = list(pool.map(_run_job, jobs))
    except QuadflowError as exc:
        return _fail(exc, where=";".join(str(c) for c in configs))
    for info in infos:
        print(json.dumps(info))
    return 0


def _run_job(job):
    return run_config_file(*job)


def _cmd_green(args) -> int:
    try:
        cfg = load_config(args.config)
        if cfg.green is None:
            raise QuadflowError("config has no [green] section")
        out_base = Path(args.outdir) if args.outdir \
            else Path(args.config).resolve().parent
        out_base.mkdir(parents=True, exist_ok=True)
        result = flow_mod.integrate(
            cfg.schedule, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol,
            max_step=cfg.max_step, magnitude_cap=cfg.magnitude_cap,
            samples=cfg.samples)
        dest = out_base / cfg.outputs.get("green", "green.csv")
        propagator.write_green_csv(_green_samples(cfg, result), dest)
    except QuadflowError as exc:
        return _fail(exc, where=str(args.config))
    print(json.dumps({"config": str(args.config), "written": [str(dest)]}))
    return 0


# ---------------------------------------------------------------------------
# verify: oracle cross-check table
# ---------------------------------------------------------------------------

def _verify_checks(schedule: CoefficientSchedule, t_end: float):
    """Yield (name, max_error, tolerance) rows; NaN error marks a skip."""
    rng = np.random.default_rng(20240915)

    err = 0.0
    for _ in range(200):
        a = rng.uniform(-1, 1, 15)
        al = rng.uniform(-1, 1, 15)
        state = assemble(a, al)
        err = max(err, abs(np.linalg.det(state.nu) - 1.0),
                  float(np.max(np.abs(state.mu - reference_odes(a, al)))))
    yield "reduction pipeline vs explicit equations (200 random states)", err, 1e-10

    err = 0.0
    for i in range(2, 16):
        for alpha in rng.uniform(-1, 1, 25):
            err = max(err, float(np.max(np.abs(
                adjoint_matrix(i, alpha).m - adjoint_closed_form(i, alpha).m))))
    yield "adjoint exponential vs closed-form rules", err, 1e-12

    result = flow_mod.integrate(schedule, t_end, rtol=1e-10, atol=1e-10)
    if result.breakdown is not None:
        yield (f"flow breakdown at t = {result.breakdown.t_break:.6g} "
               f"(component {result.breakdown.index}); comparisons truncated "
               f"to the regular part of the flow", math.nan, math.nan)

    if schedule.kind == "landau" and result.breakdown is None:
        p = schedule.params
        closed = flow_mod.constant_field_closed_form(
            p["m"], p["omega_c"], p["E_x"], p["E_y"], p["e"],
            t=result.ts)
        err = float(np.max(np.abs(result.alphas - closed)))
        yield "integrated alpha vs constant-field closed form", err, 1e-6
    else:
        yield "integrated alpha vs constant-field closed form", math.nan, 1e-6

    # near a breakdown the map entries grow without bound and float
    # comparisons lose meaning; stop well inside the regular region
    t_cmp = result.final.t if result.breakdown is None \
        else 0.8 * result.breakdown.t_break
    states = [s for s in result.samples if s.t <= t_cmp]

    err = max(observables.heisenberg_map(s.alpha).symplectic_defect()
              for s in states)
    yield "symplecticity of the Heisenberg map along the flow", err, 1e-8

    alpha_cmp = result.interpolate(t_cmp)
    m = observables.heisenberg_map(alpha_cmp)
    S_cl, d_cl = oracles.fundamental_matrix(schedule, t_cmp)
    err = float(max(np.max(np.abs(m.S - S_cl)), np.max(np.abs(m.d - d_cl))))
    yield "Heisenberg map vs classical fundamental matrix", err, 1e-6

    shift = np.array([alpha_cmp[3], alpha_cmp[4],
                      -alpha_cmp[1], -alpha_cmp[2]])
    err = float(np.max(np.abs(d_cl - shift)))
    yield "classical shift vs (alpha4, alpha5, -alpha2, -alpha3)", err, 1e-6

    ls = np.array([observables.classical_lagrangian(
        schedule.coefficients(s.t), s.alpha,
        reference_odes(schedule.coefficients(s.t), s.alpha))
        for s in states])
    from scipy.integrate import simpson
    action = simpson(ls, x=np.array([s.t for s in states]))
    err = abs(action - states[-1].alpha[0])
    yield "action integral of L vs accumulated alpha1", err, 1e-8


def _cmd_verify(args) -> int:
    try:
        if args.config:
            cfg = load_config(args.config)
            schedule, t_end = cfg.schedule, cfg.t_end
        else:
            params = {}
            if args.preset == "landau":
                params = dict(m=args.m, omega_c=args.omega_c, E_x=args.E_x,
                              E_y=args.E_y, e=args.e)
            elif args.preset in ("free",):
                params = dict(m=args.m)
            elif args.preset == "harmonic1d":
                params = dict(m=args.m, omega=args.omega)
            elif args.preset == "kanai_caldirola":
                params = dict(m=args.m, omega=args.omega, lam=args.lam)
            schedule = CoefficientSchedule.preset(args.preset, **params)
            t_end = args.t_end
        failed = 0
        for name, err, tol in _verify_checks(schedule, t_end):
            if math.isnan(tol):
                print(f"[NOTE] {name}")
            elif math.isnan(err):
                print(f"[SKIP] {name}")
            elif err < tol:
                print(f"[PASS] {name}: max error {err:.3e} < {tol:.0e}")
            else:
                print(f"[FAIL] {name}: max error {err:.3e} >= {tol:.0e}")
                failed += 1
        return 1 if failed else 0
    except QuadflowError as exc:
        return _fail(exc, where=args.config or args.preset)


def _cmd_print_odes(args) -> int:
    try:
        if args.config:
            schedule = load_config(args.config).schedule
        else:
            schedule = CoefficientSchedule.preset(args.preset)
        alpha = np.zeros(15)
        if args.alpha:
            alpha = np.array([float(v) for v in args.alpha.split(",")])
        a = schedule.coefficients(args.t)
        state = assemble(a, alpha)
        ref = reference_odes(a, alpha)
        print(json.dumps({
            "t": args.t,
            "a": a.tolist(),
            "alpha": alpha.tolist(),
            "mu": state.mu.tolist(),
            "explicit": ref.tolist(),
            "max_difference": float(np.max(np.abs(state.mu - ref))),
            "det_nu": float(np.linalg.det(state.nu)),
        }, indent=1))
        return 0
    except QuadflowError as exc:
        return _fail(exc, where=args.config or args.preset)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadflow",
        description="Exact evolution of 2D quadratic Hamiltonians by "
                    "Lie-algebraic factorization")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate and write artifacts")
    p_run.add_argument("config", nargs="+")
    p_run.add_argument("--outdir", default=None)
    p_run.set_defaults(fn=_cmd_run)

    p_ver = sub.add_parser("verify", help="run the oracle cross-check table")
    p_ver.add_argument("--preset", default="landau",
                       choices=["landau", "free", "harmonic1d",
                                "kanai_caldirola", "zero"])
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--t-end", dest="t_end", type=float, default=2.5)
    p_ver.add_argument("--m", type=float, default=1.0)
    p_ver.add_argument("--omega-c", dest="omega_c", type=float, default=1.0)
    p_ver.add_argument("--omega", type=float, default=1.0)
    p_ver.add_argument("--lam", type=float, default=0.1)
    p_ver.add_argument("--E-x", dest="E_x", type=float, default=0.0)
    p_ver.add_argument("--E-y", dest="E_y", type=float, default=0.0)
    p_ver.add_argument("--e", type=float, default=1.0)
    p_ver.set_defaults(fn=_cmd_verify)

    p_green = sub.add_parser("green", help="write Green-function samples")
    p_green.add_argument("config")
    p_green.add_argument("--outdir", default=None)
    p_green.set_defaults(fn=_cmd_green)

    p_odes = sub.add_parser("print-odes",
                            help="dump the flow RHS at a given state")
    p_odes.add_argument("--preset", default="landau")
    p_odes.add_argument("--config", default=None)
    p_odes.add_argument("--t", type=float, default=0.0)
    p_odes.add_argument("--alpha", default=None,
                        help="comma-separated 15 values (default zeros)")
    p_odes.set_defaults(fn=_cmd_print_odes)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
