"""Command-line front end.

Subcommands: spectrum | coupling | effective | thermo | sde | design.
Data goes to CSV (header row names every column with its unit), reports
to JSON.  All outputs are deterministic given the config and seed.
Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bichromatic, coupling, dynamics, langevin, modespectrum, thermometry
from .config import RunConfig, load_config
from .constants import K_B
from .exceptions import ConfigError, FitError, MimcavError

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[float(z.real), float(z.imag)] for z in obj.ravel()]
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _q_grid(args, lam: float) -> np.ndarray:
    q_min = -lam / 4.0 if args.q_min is None else args.q_min
    q_max = +lam / 4.0 if args.q_max is None else args.q_max
    if args.q_points < 1:
        raise ConfigError("need at least one q point")
    if q_max < q_min:
        raise ConfigError("q-max must be >= q-min")
    return np.linspace(q_min, q_max, args.q_points)


def cmd_spectrum(cfg: RunConfig, args) -> None:
    geom = cfg.geometry
    n_list = args.n if args.n else [cfg.mode_number]
    lam = modespectrum.mode_wavelength(geom, min(n_list))
    q_grid = _q_grid(args, lam)
    rows = modespectrum.spectrum_sweep(
        geom, n_list, q_grid, method="exact" if args.exact else "closed"
    )
    _write_csv(
        Path(f"{args.out}.csv"),
        ["n", "branch", "q_m", "omega_rad_s", "omega_over_2pi_hz"],
        [(r.n, r.branch, r.q, r.omega, r.omega / (2.0 * math.pi)) for r in rows],
    )


def cmd_coupling(cfg: RunConfig, args) -> None:
    geom = cfg.geometry
    n = cfg.mode_number
    lam = modespectrum.mode_wavelength(geom, n)
    T_list = args.T_list if args.T_list else [1e-4, 1e-2, 0.2, 0.7]
    q_min = -lam / 2.0 if args.q_min is None else args.q_min
    q_max = +lam / 2.0 if args.q_max is None else args.q_max
    if args.q_points < 1:
        raise ConfigError("need at least one q0 point")
    q0_grid = np.linspace(q_min, q_max, args.q_points)
    linear_rows, quadratic_rows = coupling.coupling_sweep(geom, n, T_list, q0_grid)
    _write_csv(
        Path(f"{args.out}_linear.csv"),
        ["T_mid", "q0_m", "xi_L_rad_s_m"],
        linear_rows,
    )
    _write_csv(
        Path(f"{args.out}_quadratic.csv"),
        ["T_mid", "Delta_o_rad_s", "xi_Q_rad_s_m2"],
        quadratic_rows,
    )
    consts = coupling.coupling_constants(geom, n, cfg.mechanics.q0)
    _write_json(Path(f"{args.out}_constants.json"), consts)


def _omega_grid(args, mech) -> np.ndarray:
    w_min = args.omega_min if args.omega_min is not None else 0.0
    w_max = args.omega_max if args.omega_max is not None else 50.0 * mech.omega_M
    if args.omega_points < 2:
        raise ConfigError("need at least two omega points")
    return np.linspace(w_min, w_max, args.omega_points)


def cmd_effective(cfg: RunConfig, args) -> None:
    geom, mech = cfg.geometry, cfg.mechanics
    grid = _omega_grid(args, mech)
    if args.regime == "quadratic":
        odd = [d for d in cfg.drives if d.branch == "odd"]
        if not odd:
            raise ConfigError("quadratic regime needs an odd-branch drive in the config")
        drive = odd[0]
        resp = dynamics.effective_params_quadratic(geom, mech, drive)
        report = {
            "regime": resp.regime,
            "omega_eff_rad_s": float(resp.omega_eff(mech.omega_M)),
            "D_eff_kg_s": float(resp.d_eff(mech.omega_M)),
            "omega_eff_over_omega_M": float(resp.omega_eff(mech.omega_M)) / mech.omega_M,
        }
    else:
        resp, info = dynamics.system_response(geom, mech, cfg.drives)
        w_star, d_star = resp.peak_parameters(mech.omega_M)
        report = {
            "regime": resp.regime,
            "omega_eff_rad_s": w_star,
            "D_eff_kg_s": d_star,
            "omega_eff_over_omega_M": w_star / mech.omega_M,
            "D_eff_over_D_M": d_star / mech.D_M,
            "drives": info,
        }
    _write_json(Path(f"{args.out}.json"), report)
    resp_for_grid = resp
    w2 = np.atleast_1d(resp_for_grid.omega_eff_sq(grid))
    de = np.atleast_1d(resp_for_grid.d_eff(grid))
    _write_csv(
        Path(f"{args.out}.csv"),
        ["omega_rad_s", "omega_eff_rad_s", "omega_eff_over_2pi_hz", "D_eff_kg_s"],
        [
            (float(w), float(np.sqrt(v)), float(np.sqrt(v)) / (2.0 * math.pi), float(d))
            for w, v, d in zip(grid, w2, de)
        ],
    )


def cmd_thermo(cfg: RunConfig, args) -> None:
    geom, mech = cfg.geometry, cfg.mechanics
    if not cfg.drives:
        raise ConfigError("thermo needs at least one drive")
    resp, info = dynamics.system_response(geom, mech, cfg.drives)
    spring_drive = max(info, key=lambda rec: abs(rec.get("spring_at_omega_M", 0.0)))
    summary = thermometry.thermal_summary(
        mech, resp, geom.gamma, spring_drive["delta"],
        method="numeric" if args.numeric else "analytic",
    )
    payload = {
        "summary": summary,
        "T_eff_K": summary.T_eff,
        "n_M": summary.n_M,
        "drives": info,
        "noise_strength_N2_s": thermometry.thermal_noise_strength(mech),
    }
    _write_json(Path(f"{args.out}.json"), payload)
    if args.chi_out:
        grid = np.linspace(0.0, 3.0 * summary.omega_eff, 2001)
        chi = thermometry.susceptibility_at(resp, mech.m, grid)
        _write_csv(
            Path(args.chi_out),
            ["omega_rad_s", "abs_chi_sq_m2_N2"],
            [(float(w), float(abs(c) ** 2)) for w, c in zip(grid, chi)],
        )


def cmd_sde(cfg: RunConfig, args) -> None:
    geom, mech = cfg.geometry, cfg.mechanics
    if cfg.sde is None:
        raise ConfigError(
            "config has no 'sde' section (the canonical table's mechanical "
            "relaxation needs ~1e10 steps; provide reachable scales)"
        )
    s = cfg.sde
    seed = args.seed if args.seed is not None else s.seed
    if not cfg.drives:
        raise ConfigError("sde needs at least one drive")
    if s.regime == "quadratic":
        odd = [d for d in cfg.drives if d.branch == "odd"]
        if not odd:
            raise ConfigError("quadratic sde needs an odd-branch drive")
        drive = odd[0]
        ss = dynamics.steady_state_quadratic(geom, mech, drive)
        M = dynamics.fluctuation_matrix(geom, mech, drive, ss)
        resp = dynamics.effective_params_quadratic(geom, mech, drive)
    else:
        drive_a = cfg.drives[0]
        drive_b = cfg.drives[1] if len(cfg.drives) > 1 else None
        xi_L = abs(float(coupling.linear_coupling_raw(geom, drive_a.n, mech.q0)))
        M = langevin.linear_fluctuation_matrix(geom, mech, (drive_a, drive_b), xi_L)
        used = [d for d in (drive_a, drive_b) if d is not None]
        resp = dynamics.linear_response(geom, mech, used, [xi_L] * len(used))
    noise = langevin.NoiseSpec.from_system(geom, mech, seed)
    ens = langevin.simulate(
        M, noise, s.dt, s.duration, s.n_traj, method=s.method, store_every=s.store_every
    )
    var = langevin.estimate_variance(ens, s.burn_in)
    w_star, d_star = resp.peak_parameters(mech.omega_M)
    predicted_var = (
        noise.thermal_strength
        / (2.0 * math.pi)
        * thermometry.variance_integral_analytic(mech.m, w_star, d_star)
    )
    payload = {
        "seed": seed,
        "method": s.method,
        "n_traj": ens.n_traj,
        "duration_s": ens.duration,
        "dt_s": ens.dt,
        "variance_m2": var.mean_sq,
        "variance_stderr_m2": var.stderr,
        "variance_predicted_m2": predicted_var,
        "T_eff_estimate_K": mech.m * w_star**2 * var.mean_sq / K_B,
        "omega_eff_predicted_rad_s": w_star,
        "D_eff_predicted_kg_s": d_star,
    }
    try:
        fit = langevin.estimate_spectrum(ens, s.burn_in)
        payload["spectrum_fit"] = {
            "omega_eff_rad_s": fit.omega_eff_fit,
            "omega_eff_err_rad_s": fit.omega_eff_err,
            "D_eff_kg_s": fit.D_eff_fit,
            "D_eff_err_kg_s": fit.D_eff_err,
        }
    except (FitError, MimcavError) as exc:
        payload["spectrum_fit"] = {"error": str(exc)}
    _write_json(Path(f"{args.out}.json"), payload)
    if args.traj:
        labels = (
            ["dX_b", "dY_b", "dq_m", "dp_kg_m_s"]
            if ens.dim == 4
            else ["dX_a", "dY_a", "dX_b", "dY_b", "dq_m", "dp_kg_m_s"]
        )
        n_dump = min(ens.n_traj, args.traj_count)
        rows = []
        for i in range(n_dump):
            for t, state in zip(ens.times, ens.states[i]):
                rows.append((i, float(t), *[float(v) for v in state]))
        _write_csv(Path(f"{args.out}_traj.csv"), ["traj", "time_s", *labels], rows)


def cmd_design(cfg: RunConfig, args) -> None:
    geom, mech = cfg.geometry, cfg.mechanics
    des = bichromatic.design(
        geom,
        mech,
        lambda_d=args.lambda_d,
        trap_power=args.trap_power,
        damp_power=args.damp_power,
    )
    comparison = bichromatic.damping_improvement(des, geom, mech)
    hybrid = comparison.hybrid
    q0_opt, xi_opt = bichromatic.optimize_placement(geom, des)
    payload = {
        "design": des,
        "hybrid": hybrid,
        "linear_baseline": comparison.linear,
        "damping_improvement": comparison.improvement,
        "linear_net_damping_is_positive": comparison.linear_net_is_positive,
        "resonant_trap_conventions": {
            "omega_from_general_limit_rad_s": hybrid.trap_frequencies.omega_resonant_limit,
            "omega_from_dedicated_formula_rad_s": hybrid.trap_frequencies.omega_dedicated,
            "squared_spring_gain_ratio": hybrid.trap_frequencies.spring_gain_ratio,
            "note": (
                "the two published on-resonance spring expressions differ by a "
                "factor 2 in omega_eff^2 - omega_M^2; the general-detuning limit "
                "is used throughout and the dedicated formula reported alongside"
            ),
        },
        "swept_optimum": {"q0_m": q0_opt, "damp_xi_L_rad_s_m": xi_opt},
    }
    _write_json(Path(f"{args.out}.json"), payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimcav",
        description="Membrane-in-the-middle cavity optomechanics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, default_config=None):
        p.add_argument("--config", type=str, default=default_config,
                       help="JSON run configuration; builtin:table, builtin:ground_state "
                            "and builtin:sde_demo name the bundled files "
                            "(default: bundled canonical table)")
        p.add_argument("--out", type=str, required=True,
                       help="output path prefix (suffixes .csv/.json are appended)")

    p = sub.add_parser("spectrum", help="mode doublets vs mirror position (CSV)")
    add_common(p)
    p.add_argument("--n", type=int, nargs="+", help="mode numbers (default: config mode_number)")
    p.add_argument("--q-min", type=float, default=None, help="lowest q [m] (default -lambda_n/4)")
    p.add_argument("--q-max", type=float, default=None, help="highest q [m] (default +lambda_n/4)")
    p.add_argument("--q-points", type=int, default=201)
    p.add_argument("--exact", action="store_true", help="solve the transcendental mode condition")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("coupling", help="coupling constants vs placement and transmissivity (CSV)")
    add_common(p)
    p.add_argument("--T-list", type=float, nargs="+", help="middle-mirror transmissivities")
    p.add_argument("--q-min", type=float, default=None, dest="q_min")
    p.add_argument("--q-max", type=float, default=None, dest="q_max")
    p.add_argument("--q-points", type=int, default=201, dest="q_points")
    p.set_defaults(func=cmd_coupling)

    p = sub.add_parser("effective", help="effective frequency and damping (CSV + JSON)")
    add_common(p)
    p.add_argument("--regime", choices=["quadratic", "linear"], required=True)
    p.add_argument("--omega-min", type=float, default=None)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--omega-points", type=int, default=501)
    p.set_defaults(func=cmd_effective)

    p = sub.add_parser("thermo", help="effective temperature and occupation (JSON)")
    add_common(p)
    p.add_argument("--numeric", action="store_true",
                   help="integrate the full frequency-dependent susceptibility")
    p.add_argument("--chi-out", type=str, default=None, help="also dump |chi(omega)|^2 (CSV)")
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("sde", help="stochastic fluctuation simulation (JSON)")
    add_common(p, default_config="builtin:sde_demo")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--traj", action="store_true", help="also dump decimated trajectories (CSV)")
    p.add_argument("--traj-count", type=int, default=8, help="trajectories to dump with --traj")
    p.set_defaults(func=cmd_sde)

    p = sub.add_parser("design", help="two-color trap-and-cool design report (JSON)")
    add_common(p)
    p.add_argument("--lambda-d", type=float, required=True, help="damp-beam wavelength [m]")
    p.add_argument("--trap-power", type=float, default=8e-3, help="trap beam power [W]")
    p.add_argument("--damp-power", type=float, default=1e-5, help="damp beam power [W]")
    p.set_defaults(func=cmd_design)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MimcavError, ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
