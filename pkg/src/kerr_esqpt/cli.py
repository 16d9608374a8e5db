"""Command-line interface: reproducible runs with manifested CSV/JSON output.

Subcommands
-----------
spectrum     sweep xi, emit level/gap tables (worker pool, ordered writes)
eigenstates  single-xi spectral portraits: DOS, PR, occupation, Husimi maps
evolve       quench dynamics for preset or explicit launch points
classical    fixed points, separatrix, contours, RK4 trajectories
map-params   microscopic circuit parameters -> (K, epsilon2, xi)
check        run the built-in verification suite

Exit codes: 0 success, 2 numerical/convergence failure, 64 usage error,
65 domain error (e.g. the Kerr-free point).  Every run writes its files
plus a ``manifest.json`` with per-file SHA-256 checksums into --out;
rerunning an identical configuration reproduces the data files byte for
byte.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .classical import (
    ClassicalParams,
    contour_points,
    h_cl,
    integrate_trajectory,
    linearize,
    semiclassical_dos,
    separatrix_points,
    stationary_points,
)
from .dynamics import (
    PRESET_POINTS,
    default_time_grid,
    ehrenfest_prediction,
    ehrenfest_time,
    evolve,
    fit_growth_rate,
    fotoc,
    husimi_entropy_series,
    preset_state,
    short_time_coefficients,
    survival_probability,
)
from .errors import ConvergenceError, KerrFreePointError, TruncationError
from .fock import (
    MicroscopicParams,
    ModelParams,
    coherent_state,
    ladder_matrices,
    microscopic_map,
    truncation_check,
)
from .output import RunConfig, RunWriter, units_comment
from .phasespace import default_grid, husimi_eval
from .spectral import (
    diagonalize,
    dos_histogram,
    esqpt_energy,
    locate_esqpt,
    occupation_expectation,
    participation_ratio,
)

EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_USAGE = 64
EXIT_DOMAIN = 65


class UsageError(Exception):
    """Bad flags, bad config values, unknown ids: exit 64."""


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit code 64, not its default 2."""

    def error(self, message: str) -> "NoReturn":  # noqa: F821
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _point_list(text: str) -> list[list[float]]:
    """Parse 'q:p;q:p' into [[q, p], ...]."""
    points: list[list[float]] = []
    for tok in text.split(";"):
        if tok.strip() == "":
            continue
        parts = tok.split(":")
        if len(parts) != 2:
            raise UsageError(f"expected q:p pairs separated by ';', got {text!r}")
        try:
            points.append([float(parts[0]), float(parts[1])])
        except ValueError as exc:
            raise UsageError(f"bad trajectory point {tok!r}") from exc
    return points


def build_parser() -> _Parser:
    parser = _Parser(prog="kerr-esqpt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p: _Parser) -> None:
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config file; flags override its values")
        p.add_argument("--out", dest="out_dir", default=None,
                       help="output directory (default: run)")
        p.add_argument("--xi", type=float, default=None,
                       help="squeezing strength epsilon2/K")
        p.add_argument("--kerr-K", dest="kerr_K", type=float, default=None,
                       help="Kerr coefficient K")
        p.add_argument("--dim", dest="dim_N", type=int, default=None,
                       help="Fock-space truncation")
        p.add_argument("--n-eff", dest="n_eff", type=float, default=None,
                       help="effective Planck constant scale")
        p.add_argument("--sign-convention", default=None,
                       choices=["main_text", "lab_frame"])
        p.add_argument("--jobs", type=int, default=None,
                       help="worker processes for sweeps (default 1)")

    p_spec = sub.add_parser("spectrum", help="sweep xi and tabulate levels/gaps")
    common(p_spec)
    p_spec.add_argument("--xi-start", dest="xi_start", type=float, default=None)
    p_spec.add_argument("--xi-stop", dest="xi_stop", type=float, default=None)
    p_spec.add_argument("--xi-points", dest="xi_points", type=int, default=None)
    p_spec.add_argument("--xi-grid", dest="xi_grid", type=_float_list, default=None,
                        help="explicit comma-separated xi values (wins over start/stop)")
    p_spec.add_argument("--levels", type=int, default=None,
                        help="lowest levels per xi written to levels.csv")
    p_spec.add_argument("--pairs", type=int, default=None,
                        help="even/odd pairs per xi written to gaps.csv")

    p_eig = sub.add_parser("eigenstates", help="DOS, PR, occupation, Husimi maps")
    common(p_eig)
    p_eig.add_argument("--bins", type=int, default=None, help="DOS histogram bins")
    p_eig.add_argument("--husimi-indices", dest="husimi_indices", type=_int_list,
                       default=None, help="eigenstate indices to map, e.g. 0,4,210")
    p_eig.add_argument("--husimi-points", dest="husimi_points", type=int,
                       default=None, help="grid points per phase-space axis")

    p_evo = sub.add_parser("evolve", help="quench dynamics from launch points")
    common(p_evo)
    p_evo.add_argument("--states", type=lambda s: s.split(","), default=None,
                       help="comma-separated preset ids (O,A,B,C,D,E) or q:p pairs")
    p_evo.add_argument("--t-max", dest="t_max", type=float, default=None,
                       help="evolution window in units of 1/K")
    p_evo.add_argument("--samples", type=int, default=None)
    p_evo.add_argument("--sh2-stride", dest="sh2_stride", type=int, default=None,
                       help="evaluate the Husimi entropy every this many samples")
    p_evo.add_argument("--snapshot-times", dest="snapshot_times", type=_float_list,
                       default=None, help="Kt values for Husimi snapshots")

    p_cls = sub.add_parser("classical", help="fixed points, contours, trajectories")
    common(p_cls)
    p_cls.add_argument("--xi-cl", dest="xi_cl", type=float, default=None,
                       help="classical control parameter (default: --xi)")
    p_cls.add_argument("--k-cl", dest="k_cl", type=float, default=None)
    p_cls.add_argument("--energies", type=_float_list, default=None,
                       help="energy levels for contours.csv")
    p_cls.add_argument("--trajectories", type=_point_list, default=None,
                       help="initial points as q:p;q:p")
    p_cls.add_argument("--t-max-cl", dest="t_max_cl", type=float, default=None)
    p_cls.add_argument("--dt-cl", dest="dt_cl", type=float, default=None)
    p_cls.add_argument("--contour-samples", dest="contour_samples", type=int,
                       default=None)

    p_map = sub.add_parser("map-params",
                           help="microscopic parameters -> K, epsilon2, xi")
    p_map.add_argument("--g3", type=float, required=True,
                       help="third-order nonlinearity (units of omega_d)")
    p_map.add_argument("--g4", type=float, required=True,
                       help="fourth-order nonlinearity")
    p_map.add_argument("--Omega-d", dest="Omega_d", type=float, required=True,
                       help="drive amplitude")
    p_map.add_argument("--omega-d", dest="omega_d", type=float, required=True,
                       help="drive frequency")

    p_chk = sub.add_parser("check", help="run the built-in verification suite")
    p_chk.add_argument("--only", type=_int_list, default=None,
                       help="run a subset, e.g. --only 1,2,9")

    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags."""
    base = RunConfig()
    cfg_path = getattr(args, "config", None)
    if cfg_path is not None:
        try:
            base = RunConfig.from_file(cfg_path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"config {cfg_path}: {exc}") from exc
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "config") and v is not None
    }
    try:
        return base.overridden(**overrides)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc


def _model_params(cfg: RunConfig) -> ModelParams:
    try:
        return ModelParams(
            xi=cfg.xi, dim_N=cfg.dim_N, kerr_K=cfg.kerr_K,
            n_eff=cfg.n_eff, sign_convention=cfg.sign_convention,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# spectrum


def _sweep_point(task: tuple[float, float, int, float, str, int, int]) -> dict:
    """Pure per-xi compute for the sweep pool (picklable in, picklable out)."""
    xi, kerr_K, dim_N, n_eff, sign, levels, pairs = task
    params = ModelParams(xi=xi, dim_N=dim_N, kerr_K=kerr_K, n_eff=n_eff,
                         sign_convention=sign)
    dec = diagonalize(params)
    report = truncation_check(params, levels=max(levels, 2 * pairs))
    e_prime = dec.excitation_energies[:levels]
    parity = dec.parity[:levels]
    gaps = (dec.evals_odd[:pairs] - dec.evals_even[:pairs])
    return {
        "xi": xi,
        "e_prime": np.asarray(e_prime),
        "parity": np.asarray(parity, dtype=int),
        "gaps": np.asarray(gaps),
        "converged": bool(report.converged),
        "drift": float(report.drift),
        "detail": report.detail,
    }


def cmd_spectrum(cfg: RunConfig) -> int:
    if cfg.xi_grid is not None:
        grid = [float(x) for x in cfg.xi_grid]
    else:
        if cfg.xi_points < 1:
            raise UsageError(f"xi_points must be >= 1, got {cfg.xi_points}")
        grid = list(np.linspace(cfg.xi_start, cfg.xi_stop, cfg.xi_points))
    if len(grid) == 0:
        raise UsageError("empty xi grid")
    if any(x < 0 for x in grid):
        raise UsageError("xi must be non-negative")
    if cfg.levels < 2 or cfg.pairs < 1:
        raise UsageError("need levels >= 2 and pairs >= 1")
    if 2 * max(cfg.levels, 2 * cfg.pairs) > cfg.dim_N:
        raise UsageError(
            f"dim_N={cfg.dim_N} too small for {cfg.levels} levels / "
            f"{cfg.pairs} pairs"
        )

    tasks = [
        (x, cfg.kerr_K, cfg.dim_N, cfg.n_eff, cfg.sign_convention,
         cfg.levels, cfg.pairs)
        for x in grid
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]

    writer = RunWriter(Path(cfg.out_dir), cfg)
    lev_cols: dict[str, list] = {"xi": [], "index": [], "parity": [], "E_prime": []}
    gap_cols: dict[str, list] = {"xi": [], "pair": [], "gap": []}
    any_bad = False
    for res in results:  # pool.map preserves task order: rows come out xi-sorted
        writer.record_convergence(f"xi={res['xi']:.17g}", {
            "converged": res["converged"], "drift": res["drift"],
            "detail": res["detail"],
        })
        any_bad |= not res["converged"]
        for i, (e, par) in enumerate(zip(res["e_prime"], res["parity"])):
            lev_cols["xi"].append(res["xi"])
            lev_cols["index"].append(i)
            lev_cols["parity"].append(int(par))
            lev_cols["E_prime"].append(float(e))
        for k, g in enumerate(res["gaps"]):
            gap_cols["xi"].append(res["xi"])
            gap_cols["pair"].append(k)
            gap_cols["gap"].append(float(g))

    writer.csv("levels.csv", list(lev_cols.items()),
               units_comment("E_prime = E - E0"))
    writer.csv("gaps.csv", list(gap_cols.items()),
               units_comment("gap_k = E_odd_k - E_even_k"))
    writer.csv("esqpt_line.csv",
               [("xi", grid), ("E_prime_c", [cfg.kerr_K * x * x for x in grid])],
               units_comment("critical excitation energy K*xi^2"))
    if any_bad:
        writer.note("one or more sweep points failed the truncation check")
    writer.finish(status="ok" if not any_bad else "truncation-warning")
    return EXIT_OK if not any_bad else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# eigenstates


def cmd_eigenstates(cfg: RunConfig) -> int:
    params = _model_params(cfg)
    if params.xi <= 0:
        raise UsageError("eigenstates requires xi > 0")
    writer = RunWriter(Path(cfg.out_dir), cfg)
    dec = diagonalize(params)
    report = truncation_check(params, levels=min(params.dim_N // 2, 64))
    writer.record_convergence("spectrum", report)

    e_c = esqpt_energy(params)
    window = (0.0, min(2.0 * e_c, float(dec.excitation_energies[-1])))
    hist = dos_histogram(dec, bins=cfg.bins, e_range=window)
    writer.csv(
        "dos.csv",
        [("E_prime", hist.bin_centers), ("density", hist.density),
         ("counts", hist.counts)],
        units_comment(f"unit-area histogram over [{window[0]:.17g}, {window[1]:.17g}]"),
    )

    cp = ClassicalParams.from_model(params)
    centers = hist.bin_centers
    # absolute energy of the saddle is 0; skip the log-singular point
    absolute = centers - e_c
    keep = np.abs(absolute) > 1e-9 * max(e_c, 1.0)
    nu = [semiclassical_dos(float(E), cp) for E in absolute[keep]]
    writer.csv(
        "dos_semiclassical.csv",
        [("E_prime", centers[keep]), ("nu", nu)],
        units_comment("nu(E) = (1/pi) * area derivative; singular bin omitted"),
    )

    sel = np.flatnonzero(
        (dec.excitation_energies >= window[0])
        & (dec.excitation_energies <= window[1])
    )
    pr = [participation_ratio(dec.eigenvector(int(k))) for k in sel]
    occ = [occupation_expectation(dec.eigenvector(int(k))) for k in sel]
    shared = [
        ("index", [int(k) for k in sel]),
        ("parity", [int(dec.parity[k]) for k in sel]),
        ("E_prime", [float(dec.excitation_energies[k]) for k in sel]),
    ]
    writer.csv("pr.csv", shared + [("pr", pr)],
               units_comment("participation ratio in the Fock basis"))
    writer.csv("occupation.csv", shared + [("n_mean", occ)],
               units_comment("mean photon number"))

    est = locate_esqpt(dec)
    writer.json("esqpt_estimates.json", {
        "E_prime_c": e_c,
        "e_dos_peak": est.e_dos_peak,
        "e_pr_dip": est.e_pr_dip,
        "e_occ_dip": est.e_occ_dip,
        "level_pr_dip": est.level_pr_dip,
        "level_occ_dip": est.level_occ_dip,
        "spread": est.spread,
    })

    for k in cfg.husimi_indices:
        if not 0 <= k < params.dim_N:
            raise UsageError(f"eigenstate index {k} outside [0, {params.dim_N})")
        state = dec.eigenvector(int(k))
        q, p = default_grid(state, n_eff=params.n_eff, xi=params.xi,
                            n_points=cfg.husimi_points)
        grid = husimi_eval(state, q, p, n_eff=params.n_eff)
        name = f"husimi_{k}"
        writer.matrix_csv(
            f"{name}.csv", grid.values,
            units_comment(f"Husimi Q, rows q, columns p; see {name}.json"),
        )
        writer.json(f"{name}.json", {
            "state": f"eigenstate {k}",
            "E_prime": float(dec.excitation_energies[k]),
            "time_Kt": None,
            "q_min": float(q[0]), "q_max": float(q[-1]), "n_q": len(q),
            "p_min": float(p[0]), "p_max": float(p[-1]), "n_p": len(p),
            "riemann_mass": grid.riemann_mass,
        })

    bad = not report.converged
    if bad:
        writer.note("spectrum failed the truncation check")
    writer.finish(status="ok" if not bad else "truncation-warning")
    return EXIT_OK if not bad else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# evolve


def _resolve_states(cfg: RunConfig, params: ModelParams) -> list[tuple[str, np.ndarray]]:
    out: list[tuple[str, np.ndarray]] = []
    for spec_id in cfg.states:
        token = spec_id.strip()
        if token in PRESET_POINTS:
            out.append((token, preset_state(token, params)))
            continue
        parts = token.split(":")
        if len(parts) == 2:
            try:
                qp = (float(parts[0]), float(parts[1]))
            except ValueError:
                raise UsageError(f"unknown state id {token!r}") from None
            out.append((f"q{qp[0]:g}_p{qp[1]:g}", coherent_state(*qp, params)))
            continue
        raise UsageError(
            f"unknown state id {token!r}; presets are "
            f"{','.join(sorted(PRESET_POINTS))} or explicit q:p"
        )
    if not out:
        raise UsageError("no states requested")
    return out


def cmd_evolve(cfg: RunConfig) -> int:
    params = _model_params(cfg)
    if cfg.samples < 50:
        raise UsageError("need samples >= 50")
    if cfg.sh2_stride < 1:
        raise UsageError("sh2_stride must be >= 1")
    writer = RunWriter(Path(cfg.out_dir), cfg)
    try:
        states = _resolve_states(cfg, params)
    except TruncationError as exc:
        writer.note(f"truncation failure while preparing states: {exc}")
        writer.finish(status="truncation-failure")
        raise

    times = default_time_grid(params.kerr_K, cfg.t_max, cfg.samples)
    snaps = [t / params.kerr_K for t in cfg.snapshot_times]
    if snaps:
        times = np.unique(np.concatenate([times, snaps]))
    dec = diagonalize(params)
    ops = ladder_matrices(params)
    fits: dict[str, dict] = {}
    for label, state in states:
        ev = evolve(state, dec, times)
        sp = survival_probability(ev)
        fo = fotoc(ev, ops)
        sh2_idx = np.arange(0, len(times), cfg.sh2_stride)
        sh2 = husimi_entropy_series(ev, indices=sh2_idx)
        kt = times * params.kerr_K
        writer.csv(f"sp_{label}.csv", [("Kt", kt), ("sp", sp.values)],
                   units_comment(f"survival probability, state {label}"))
        writer.csv(f"fotoc_{label}.csv", [("Kt", kt), ("fotoc", fo.values)],
                   units_comment(f"total quadrature variance, state {label}"))
        writer.csv(f"sh2_{label}.csv",
                   [("Kt", kt[sh2_idx]), ("sh2", sh2.values)],
                   units_comment(f"order-2 Husimi entropy, state {label}"))

        entry: dict[str, object] = {}
        try:
            qf_sp = short_time_coefficients(sp, "survival", params)
            qf_fo = short_time_coefficients(fo, "fotoc", params)
            entry["sp_quadratic"] = qf_sp.coefficient
            entry["sp_quadratic_expected"] = qf_sp.expected
            entry["fotoc_quadratic"] = qf_fo.coefficient
            entry["fotoc_quadratic_expected"] = qf_fo.expected
        except ValueError as exc:
            entry["short_time_note"] = str(exc)
        try:
            t_ehr = ehrenfest_time(fo)
            tau = 1.0 / (math.sqrt(8.0) * params.xi * params.kerr_K)
            growth = fit_growth_rate(fo, 2.0 * tau, 0.8 * t_ehr)
            entry["ehrenfest_Kt"] = t_ehr * params.kerr_K
            entry["ehrenfest_Kt_predicted"] = (
                ehrenfest_prediction(params) * params.kerr_K
            )
            entry["lyapunov_rate"] = 0.5 * growth.rate
            entry["lyapunov_rate_expected"] = 2.0 * params.kerr_K * params.xi
            entry["growth_fit_r2"] = growth.r_squared
        except ValueError as exc:
            entry["growth_note"] = str(exc)
        fits[label] = entry

        for j, t_snap in enumerate(snaps):
            i = int(np.searchsorted(times, t_snap))
            i = min(i, len(times) - 1)
            psi_t = ev.psi[:, i]
            q, p = default_grid(psi_t, n_eff=params.n_eff, xi=params.xi,
                                n_points=cfg.husimi_points)
            grid = husimi_eval(psi_t, q, p, n_eff=params.n_eff)
            name = f"husimi_{label}_t{j}"
            writer.matrix_csv(
                f"{name}.csv", grid.values,
                units_comment(f"Husimi Q, rows q, columns p; see {name}.json"),
            )
            writer.json(f"{name}.json", {
                "state": label,
                "time_Kt": float(times[i] * params.kerr_K),
                "q_min": float(q[0]), "q_max": float(q[-1]), "n_q": len(q),
                "p_min": float(p[0]), "p_max": float(p[-1]), "n_p": len(p),
                "riemann_mass": grid.riemann_mass,
            })

    writer.json("fits.json", fits)
    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# classical


def cmd_classical(cfg: RunConfig) -> int:
    xi_cl = cfg.xi_cl if cfg.xi_cl is not None else cfg.xi
    try:
        cp = ClassicalParams(xi_cl=xi_cl, k_cl=cfg.k_cl)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    writer = RunWriter(Path(cfg.out_dir), cfg)

    points = []
    for sp in stationary_points(cp):
        lin = linearize(sp.q, sp.p, cp)
        points.append({
            "q": sp.q, "p": sp.p, "energy": sp.energy, "kind": sp.kind,
            "classification": lin.classification,
            "eigenvalues": [[ev.real, ev.imag] for ev in lin.eigenvalues],
        })
    writer.json("fixed_points.json", {"xi_cl": cp.xi_cl, "k_cl": cp.k_cl,
                                      "points": points})

    if cp.xi_cl > 0:
        sep = separatrix_points(cp, samples=cfg.contour_samples)
        writer.csv(
            "separatrix.csv",
            [("q", sep[:, 0]), ("p", sep[:, 1]),
             ("E", h_cl(sep[:, 0], sep[:, 1], cp))],
            units_comment("H_cl = 0 level set"),
        )

    if cfg.energies:
        cols_q: list[float] = []
        cols_p: list[float] = []
        cols_e: list[float] = []
        for energy in cfg.energies:
            try:
                pts = contour_points(cp, float(energy), samples=cfg.contour_samples)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            cols_q.extend(pts[:, 0])
            cols_p.extend(pts[:, 1])
            cols_e.extend([float(energy)] * len(pts))
        writer.csv("contours.csv",
                   [("q", cols_q), ("p", cols_p), ("E", cols_e)],
                   units_comment("level-set samples, E in units of K_cl"))

    for i, (q0, p0) in enumerate(cfg.trajectories):
        traj = integrate_trajectory(q0, p0, cp, t_max=cfg.t_max_cl, dt=cfg.dt_cl)
        writer.csv(
            f"trajectory_{i}.csv",
            [("Kt", traj.times * cp.k_cl), ("q", traj.q), ("p", traj.p),
             ("E", traj.energy)],
            units_comment(f"RK4 orbit from ({q0:.17g}, {p0:.17g}), "
                          f"drift {traj.energy_drift:.3e}"),
        )
        writer.record_convergence(f"trajectory_{i}", {
            "converged": True, "drift": traj.energy_drift,
            "detail": f"RK4 relative energy drift over Kt={cfg.t_max_cl}",
        })

    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# map-params, check


def cmd_map_params(args: argparse.Namespace) -> int:
    mp = MicroscopicParams(g3=args.g3, g4=args.g4, Omega_d=args.Omega_d,
                           omega_d=args.omega_d)
    mapped = microscopic_map(mp)
    print(json.dumps(mapped, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    from .acceptance import run_criteria

    try:
        results = run_criteria(args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    width = max(len(r.title) for r in results)
    all_ok = True
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"[{flag}] {r.number:>2}. {r.title:<{width}}  {r.detail}")
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria satisfied")
    return EXIT_OK if all_ok else EXIT_NUMERICAL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_USAGE
        if args.command == "map-params":
            return cmd_map_params(args)
        if args.command == "check":
            return cmd_check(args)
        cfg = load_config(args)
        if cfg.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        handler = {
            "spectrum": cmd_spectrum,
            "eigenstates": cmd_eigenstates,
            "evolve": cmd_evolve,
            "classical": cmd_classical,
        }[args.command]
        return handler(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KerrFreePointError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (TruncationError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
