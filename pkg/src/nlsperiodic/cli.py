"""Command-line front end: every analysis as a subcommand with file artifacts.

Each run writes one JSON result document with a fixed key set per
subcommand (schema-versioned, deterministic up to the ``timestamp`` field),
plus optional CSV sample tables and self-contained SVG plots.  All physical
parameters are explicit flags; there are no hidden defaults for T, m, a, b.

Exit codes: 0 success, 1 validation error (bad flags or a violated
admissibility condition, named in the message), 2 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import PreconditionError
from .fieldfile import read_field, write_field
from .linearization import constant_spectrum, hill_spectrum
from .minimizers import (
    MinimizeConfig,
    action_identity_values,
    mass_threshold,
    minimize_mass,
    minimize_nehari,
)
from .nonlinearity import (
    MultiPower,
    SinglePower,
    TriplePower,
    audit_hypotheses,
    default_audit_grid,
)
from .profile_ode import PotentialParams, critical_points, phase_portrait
from .rearrangement import fourier_rearrange
from .spectral import functionals
from .svg import plot_curves, plot_region_map
from .triple_power import half_kink_omega, scan_region_map

SCHEMA_PREFIX = "nlsperiodic"
SCHEMA_VERSION = 1


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract says 1
        raise _CliError(message)


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------


def parse_nonlinearity(text: str):
    """power:P | powers:p1:c1,p2:c2,... | triple:GAMMA"""
    kind, _, rest = text.partition(":")
    try:
        if kind == "power":
            return SinglePower(float(rest))
        if kind == "powers":
            terms = []
            for chunk in rest.split(","):
                p_str, _, c_str = chunk.partition(":")
                terms.append((float(p_str), float(c_str) if c_str else 1.0))
            return MultiPower(tuple(terms))
        if kind == "triple":
            return TriplePower(float(rest))
    except ValueError as exc:
        raise _CliError(f"invalid --nonlinearity {text!r}: {exc}") from exc
    raise _CliError(f"unknown nonlinearity kind {kind!r} (use power:, powers:, triple:)")


def _parse_range(text: str, name: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise _CliError(f"--{name} must be lo:hi:count, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _parse_window(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise _CliError(f"--window must be r0:r1:v0:v1, got {text!r}")
    return tuple(float(p) for p in parts)


def _doc(command: str, config: dict, payload: dict) -> dict:
    return {
        "schema": f"{SCHEMA_PREFIX}/{command}/{SCHEMA_VERSION}",
        "version": __version__,
        "command": command,
        "config": config,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        **payload,
    }


def _write_doc(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


def _result_payload(result) -> dict:
    v = result.values
    return {
        "converged": bool(result.converged),
        "iterations": int(result.iterations),
        "E": v.E,
        "M": v.M,
        "P": v.P,
        "S": v.S,
        "I": v.I,
        "multiplier_a": result.multiplier_a,
        "ode_residual": result.ode_residual,
        "constancy": result.constancy,
        "projected_gradient": result.diagnostics.get("projected_gradient"),
    }


def _field_config(args, spec_text) -> MinimizeConfig:
    return MinimizeConfig(
        N=args.N, tol=args.tol, max_iters=args.max_iters, seed=args.seed, init=args.init
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_potential(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    params = PotentialParams(spec=spec, a=args.a, b=args.b, J=args.j)
    points = critical_points(params, r_max=args.r_max)
    config = {
        "nonlinearity": args.nonlinearity, "a": args.a, "b": args.b, "J": args.j,
        "r_max": args.r_max,
    }
    payload = {
        "critical_points": [
            {"r": cp.r, "kind": cp.kind, "V": cp.V_value, "lambda_sq": cp.lambda_sq}
            for cp in points
        ],
    }
    _write_doc(args.out, _doc("potential", config, payload))
    r_lo = 1e-3 if args.j != 0 else -args.r_max / 20
    rs = np.linspace(max(r_lo, 1e-3) if args.j != 0 else r_lo, args.r_max / 20, 400)
    vs = params.V(rs)
    if args.csv:
        _write_csv(args.csv, ["r", "V"], [(float(r), float(v)) for r, v in zip(rs, vs)])
    if args.svg:
        plot_curves(
            args.svg, [(rs, vs)], title="effective potential", xlabel="r", ylabel="V",
            points=[(cp.r, cp.V_value) for cp in points],
        )
    return 0


def _cmd_portrait(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    params = PotentialParams(spec=spec, a=args.a, b=args.b, J=args.j)
    window = _parse_window(args.window)
    portrait = phase_portrait(params, window, n_levels=args.levels, step=args.step)
    config = {
        "nonlinearity": args.nonlinearity, "a": args.a, "b": args.b, "J": args.j,
        "window": list(window), "levels": args.levels, "step": args.step,
    }
    payload = {
        "equilibria": [
            {"r": cp.r, "kind": cp.kind, "V": cp.V_value, "lambda_sq": cp.lambda_sq}
            for cp in portrait.equilibria
        ],
        "separatrix_levels": [float(E) for E in portrait.separatrix_levels],
        "orbit_count": len(portrait.orbits),
        "max_bounded_drift": max(
            (o.drift for o in portrait.orbits if o.flag is None), default=0.0
        ),
    }
    _write_doc(args.out, _doc("portrait", config, payload))
    if args.csv:
        rows = []
        for i, orbit in enumerate(portrait.orbits):
            for x, r, v in zip(orbit.x, orbit.r, orbit.rdot):
                rows.append((i, float(x), float(r), float(v)))
        _write_csv(args.csv, ["orbit", "x", "r", "rdot"], rows)
    if args.svg:
        curves = [(o.r, o.rdot) for o in portrait.orbits]
        plot_curves(
            args.svg, curves, x_range=(window[0], window[1]), y_range=(window[2], window[3]),
            title="phase portrait", xlabel="r", ylabel="r_x",
            points=[(cp.r, 0.0) for cp in portrait.equilibria],
            vlines=portrait.isocline_radii, hlines=[0.0],
        )
    return 0


def _cmd_minimize_mass(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    cfg = _field_config(args, args.nonlinearity)
    result = minimize_mass(
        spec, b=args.b, m=args.m, T=args.T, boundary=args.boundary,
        momentum_zero=not args.free_momentum, config=cfg,
    )
    config = {
        "nonlinearity": args.nonlinearity, "b": args.b, "m": args.m, "T": args.T,
        "boundary": args.boundary, "momentum_zero": not args.free_momentum,
        "N": args.N, "tol": args.tol, "seed": args.seed, "max_iters": args.max_iters,
        "init": args.init,
    }
    payload = _result_payload(result)
    if args.field_out:
        write_field(args.field_out, result.field)
        payload["field_file"] = args.field_out
    _write_doc(args.out, _doc("minimize-mass", config, payload))
    return 0 if result.converged else 2


def _cmd_minimize_nehari(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    if not isinstance(spec, SinglePower):
        raise PreconditionError("minimize-nehari requires --nonlinearity power:P")
    cfg = _field_config(args, args.nonlinearity)
    result = minimize_nehari(spec, b=args.b, a=args.a, T=args.T, boundary=args.boundary, config=cfg)
    m1, m2 = action_identity_values(result.field, spec, args.b, args.a)
    config = {
        "nonlinearity": args.nonlinearity, "b": args.b, "a": args.a, "T": args.T,
        "boundary": args.boundary, "N": args.N, "tol": args.tol, "seed": args.seed,
        "max_iters": args.max_iters, "init": args.init,
    }
    payload = _result_payload(result)
    payload["nehari_objective"] = m1
    payload["norm_problem_objective"] = m2
    if args.field_out:
        write_field(args.field_out, result.field)
        payload["field_file"] = args.field_out
    _write_doc(args.out, _doc("minimize-nehari", config, payload))
    return 0 if result.converged else 2


def _cmd_threshold(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    m_star, m_tilde = mass_threshold(spec, args.b, args.T)
    config = {"nonlinearity": args.nonlinearity, "b": args.b, "T": args.T}
    _write_doc(args.out, _doc("threshold", config, {"m_star": m_star, "m_tilde": m_tilde}))
    return 0


def _cmd_spectrum(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    if (args.field is None) == (args.m is None):
        raise _CliError("spectrum needs exactly one of --m (constant state) or --field FILE")
    if args.m is not None:
        report = constant_spectrum(spec, b=args.b, m=args.m, T=args.T, n_max=args.n_max)
        config = {
            "nonlinearity": args.nonlinearity, "b": args.b, "m": args.m, "T": args.T,
            "n_max": args.n_max, "mode": "constant",
        }
    else:
        field = read_field(args.field)
        if args.a is None:
            raise _CliError("--a is required with --field (the linearization frequency)")
        report = hill_spectrum(field, spec, a=args.a, b=args.b, N=args.N)
        config = {
            "nonlinearity": args.nonlinearity, "b": args.b, "a": args.a,
            "field": args.field, "N": args.N, "mode": "hill",
        }
    payload = {
        "eigenvalues": [float(x) for x in report.eigenvalues],
        "morse_index": report.morse_index,
        "truncation": report.truncation,
    }
    _write_doc(args.out, _doc("spectrum", config, payload))
    return 0


def _cmd_rearrange(args) -> int:
    field = read_field(args.field)
    out_field = fourier_rearrange(field)
    p = args.p
    n = None
    before = {
        "l2": field.l2_norm_sq() ** 0.5,
        "h1": field.h1_seminorm_sq() ** 0.5,
        "lp": field.lp_norm(p + 1, n),
    }
    after = {
        "l2": out_field.l2_norm_sq() ** 0.5,
        "h1": out_field.h1_seminorm_sq() ** 0.5,
        "lp": out_field.lp_norm(p + 1, n),
    }
    write_field(args.field_out, out_field)
    config = {"field": args.field, "field_out": args.field_out, "p": p}
    payload = {"before": before, "after": after, "real_after": bool(out_field.is_real())}
    _write_doc(args.out, _doc("rearrange", config, payload))
    return 0


def _cmd_regions(args) -> int:
    g_lo, g_hi, g_n = _parse_range(args.gamma, "gamma")
    w_lo, w_hi, w_n = _parse_range(args.omega, "omega")
    grid = scan_region_map((g_lo, g_hi, g_n), (w_lo, w_hi, w_n))
    counts = {str(k): int(np.count_nonzero(grid.labels == k)) for k in range(4)}
    config = {"gamma": args.gamma, "omega": args.omega}
    payload = {
        "grid_shape": [int(grid.labels.shape[0]), int(grid.labels.shape[1])],
        "label_counts": counts,
        "half_kink_start_gamma": 4.0 / np.sqrt(5.0),
        "half_kink_start_omega": half_kink_omega(4.0 / np.sqrt(5.0)),
    }
    _write_doc(args.out, _doc("regions", config, payload))
    if args.csv:
        rows = []
        for i, w in enumerate(grid.omegas):
            for j, g in enumerate(grid.gammas):
                rows.append((float(g), float(w), int(grid.labels[i, j])))
        _write_csv(args.csv, ["gamma", "omega", "label"], rows)
    if args.svg:
        plot_region_map(
            args.svg, grid.gammas, grid.omegas, grid.labels, grid.curves,
            title="stationary-radius count", xlabel="gamma", ylabel="omega",
        )
    return 0


def _cmd_audit(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    if args.grid:
        lo, hi, n = _parse_range(args.grid, "grid")
        grid = np.geomspace(lo, hi, n)
    else:
        grid = default_audit_grid()
    report = audit_hypotheses(spec, args.b, grid)
    config = {"nonlinearity": args.nonlinearity, "b": args.b, "grid": args.grid}
    payload = {
        "verdicts": {
            name: {"status": v.status, "witness": v.witness, "detail": v.detail}
            for name, v in report.verdicts.items()
        },
        "all_hold": report.all_hold,
    }
    _write_doc(args.out, _doc("audit", config, payload))
    return 0


def _cmd_functionals(args) -> int:
    spec = parse_nonlinearity(args.nonlinearity)
    field = read_field(args.field)
    vals = functionals(field, spec, b=args.b, a=args.a)
    config = {"nonlinearity": args.nonlinearity, "b": args.b, "a": args.a, "field": args.field}
    payload = {"E": vals.E, "M": vals.M, "P": vals.P, "S": vals.S, "I": vals.I}
    _write_doc(args.out, _doc("functionals", config, payload))
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(sub, *, nonlinearity=True, out_default=None):
    if nonlinearity:
        sub.add_argument("--nonlinearity", required=True,
                         help="power:P | powers:p1:c1,p2:c2 | triple:GAMMA")
    sub.add_argument("--out", default=out_default, help="result document path (JSON)")


def _add_solver_flags(sub):
    sub.add_argument("--N", type=int, default=64, help="mode cutoff")
    sub.add_argument("--tol", type=float, default=1e-8, help="projected-gradient tolerance")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed for initialization")
    sub.add_argument("--max-iters", type=int, default=20000)
    sub.add_argument("--init", default="auto", choices=["auto", "constant", "random"])
    sub.add_argument("--field-out", default=None, help="write the minimizer as a field file")


def build_parser() -> _Parser:
    parser = _Parser(prog="nlsperiodic", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("potential", help="critical points and V(r) plot")
    _add_common(p, out_default="potential.json")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--j", type=float, default=0.0, help="angular momentum J")
    p.add_argument("--r-max", type=float, default=100.0)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(fn=_cmd_potential)

    p = subs.add_parser("portrait", help="phase portrait (SVG + CSV)")
    _add_common(p, out_default="portrait.json")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--j", type=float, default=0.0)
    p.add_argument("--window", required=True, help="r0:r1:v0:v1")
    p.add_argument("--levels", type=int, default=7)
    p.add_argument("--step", type=float, default=2e-3)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(fn=_cmd_portrait)

    p = subs.add_parser("minimize-mass", help="energy minimization at fixed mass")
    _add_common(p, out_default="minimize-mass.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--boundary", default="periodic", choices=["periodic", "anti-periodic"])
    p.add_argument("--free-momentum", action="store_true",
                   help="drop the zero-momentum restriction (complex flow)")
    _add_solver_flags(p)
    p.set_defaults(fn=_cmd_minimize_mass)

    p = subs.add_parser("minimize-nehari", help="action minimization on the Nehari manifold")
    _add_common(p, out_default="minimize-nehari.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--boundary", default="periodic", choices=["periodic", "anti-periodic"])
    _add_solver_flags(p)
    p.set_defaults(fn=_cmd_minimize_nehari)

    p = subs.add_parser("threshold", help="non-constancy mass threshold")
    _add_common(p, out_default="threshold.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.set_defaults(fn=_cmd_threshold)

    p = subs.add_parser("spectrum", help="linearized spectrum (constant state or field file)")
    _add_common(p, out_default="spectrum.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--m", type=float, default=None, help="constant state of mass m")
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--field", default=None, help="field file for the Hill spectrum")
    p.add_argument("--a", type=float, default=None, help="frequency for the Hill spectrum")
    p.add_argument("--N", type=int, default=None)
    p.set_defaults(fn=_cmd_spectrum)

    p = subs.add_parser("rearrange", help="apply the realifying rearrangement to a field file")
    _add_common(p, nonlinearity=False, out_default="rearrange.json")
    p.add_argument("--field", required=True)
    p.add_argument("--field-out", required=True)
    p.add_argument("--p", type=float, default=3.0, help="exponent for the L^{p+1} report")
    p.set_defaults(fn=_cmd_rearrange)

    p = subs.add_parser("regions", help="triple-power region map")
    _add_common(p, nonlinearity=False, out_default="regions.json")
    p.add_argument("--gamma", required=True, help="lo:hi:count")
    p.add_argument("--omega", required=True, help="lo:hi:count")
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(fn=_cmd_regions)

    p = subs.add_parser("audit", help="audit the structural hypotheses on a grid")
    _add_common(p, out_default="audit.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--grid", default=None, help="lo:hi:count (log-spaced)")
    p.set_defaults(fn=_cmd_audit)

    p = subs.add_parser("functionals", help="evaluate E, M, P, S, I on a field file")
    _add_common(p, out_default="functionals.json")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--field", required=True)
    p.set_defaults(fn=_cmd_functionals)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
