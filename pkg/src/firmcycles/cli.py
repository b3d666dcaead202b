"""Command-line front end. The only place that reads or writes files."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import cycle_analysis as ca
from . import identification as ident
from . import planner
from . import quant
from .config import FREQUENCIES, RunConfig, default_output_dir, load_config
from .emit import to_csv, to_json, write_text
from .equilibrium import EquilibriumState, Mode, solve_ge_steady, solve_pe
from .errors import ConfigError, ModelError

COMMANDS = ("steady-state", "cycle", "sweep", "transition", "calibrate", "planner", "identify",
            "reproduce-table5")


def _state_row(st: EquilibriumState) -> dict:
    return {"cutoff": st.cutoff, "E": st.E, "M": st.M, "Z": st.Z, "Lp": st.Lp, "R": st.R,
            "Y": st.Y, "price_index": st.price_index, "regime": st.regime.value}


def _opt(cfg: RunConfig, key, default=None, required=False):
    if key in cfg.options:
        return cfg.options[key]
    if required:
        raise ConfigError(f"options.{key} is required for this command")
    return default


def _emit(cfg: RunConfig, name: str, rows: list[dict], payload=None) -> Path:
    """Write rows as CSV, or payload (default: rows) as JSON."""
    out = cfg.resolved_output_dir()
    if cfg.output_format == "csv":
        return write_text(out / f"{name}.csv", to_csv(rows))
    return write_text(out / f"{name}.json", to_json(rows if payload is None else payload))


def cmd_steady_state(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    mode = Mode(_opt(cfg, "mode", "GE"))
    if _opt(cfg, "forward_looking", False):
        st = quant.quant_steady_state(params, dist, cfg.policy.theta_ss, mode=mode)
    else:
        st = (solve_pe if mode is Mode.PE else solve_ge_steady)(params, dist)
    row = _state_row(st)
    path = _emit(cfg, "steady_state", [row], {**row, "cohorts": st.distribution.to_json_list()})
    return f"steady-state {mode.value}: cutoff={st.cutoff:.6g} M={st.M:.6g} Y={st.Y:.6g} -> {path}"


def _report_row(rep: ca.CycleReport) -> dict:
    return {"sigma": rep.sigma, "q": rep.q, "dlog_M": rep.dlog_M, "dlog_Lp": rep.dlog_Lp,
            "dlog_Z": rep.dlog_Z, "dlog_zbar": rep.dlog_zbar, "dlog_Y": rep.dlog_Y,
            "mode": rep.mode.value, "q_star": float("nan") if rep.q_star is None else rep.q_star}


def cmd_cycle(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    f_low = float(_opt(cfg, "f_low", params.f_c))
    f_high = float(_opt(cfg, "f_high", required=True))
    rep = ca.run_three_phase_cycle(params, dist, f_low, f_high, _opt(cfg, "mode", "PE"))
    row = _report_row(rep)
    payload = {**row, "phases": [_state_row(s) for s in rep.states]}
    path = _emit(cfg, "cycle", [row], payload)
    return f"cycle {rep.mode.value}: dlog_Y={rep.dlog_Y:.6g} dlog_M={rep.dlog_M:.6g} -> {path}"


def cmd_sweep(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    lo = float(_opt(cfg, "f_high_min", params.f_c * 1.01))
    hi = float(_opt(cfg, "f_high_max", ca.depth_cap(params.f_c)))
    grid = np.geomspace(lo, hi, int(_opt(cfg, "points", 200)))
    rows = ca.depth_sweep(params, dist, grid, tuple(_opt(cfg, "q_list", ())), _opt(cfg, "mode", "GE"))
    path = _emit(cfg, "sweep", rows)
    i = int(np.argmin([r["M3"] for r in rows]))
    return f"sweep: {len(rows)} depths, min M3 at f_h={rows[i]['f_h']:.6g} -> {path}"


def _shock(cfg: RunConfig, params, dist, mode) -> quant.ShockPath:
    shock = cfg.shock
    target = _opt(cfg, "target_exit_share")
    if target is not None:
        eps = quant.calibrate_epsilon(params, dist, cfg.policy.theta_ss, float(target), shock, mode)
        shock = replace(shock, epsilon=eps)
    return shock


def cmd_transition(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    mode = Mode(_opt(cfg, "mode", "GE"))
    shock = _shock(cfg, params, dist, mode)
    series = quant.simulate_transition(params, dist, cfg.policy, shock, mode)
    flat = quant.simulate_transition(params, dist, replace(cfg.policy, theta_cyc=0.0),
                                     replace(shock, epsilon=0.0, f_e_path=None), mode)
    welfare = quant.cev_decomposition(flat, series, beta_planner=params.beta_planner)
    rows = series.rows()
    path = _emit(cfg, "transition", rows, {"epsilon": shock.epsilon, "welfare": welfare.to_dict(),
                                           "series": rows})
    if cfg.output_format == "csv":
        write_text(cfg.resolved_output_dir() / "transition_welfare.json",
                   to_json({"epsilon": shock.epsilon, **welfare.to_dict()}))
    return f"transition {mode.value}: {series.horizon} periods, cev={welfare.cev_total:.6g} -> {path}"


def cmd_calibrate(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    mode = Mode(_opt(cfg, "mode", "GE"))
    target = float(_opt(cfg, "target_exit_share", quant.TARGET_EXIT_SHARE))
    eps = quant.calibrate_epsilon(params, dist, cfg.policy.theta_ss, target, cfg.shock, mode)
    share = quant.impact_exit_share(params, dist, quant.PolicyLevers(cfg.policy.theta_ss, 0.0),
                                    replace(cfg.shock, epsilon=eps), mode)
    row = {"target_exit_share": target, "epsilon": eps, "impact_exit_share": share,
           "theta_ss": cfg.policy.theta_ss}
    path = _emit(cfg, "calibrate", [row], row)
    return f"calibrate: epsilon={eps:.10g} -> {path}"


def cmd_planner(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    alloc = planner.planner_allocation(params, dist)
    row = {"entry_mass_sp": alloc.entry_mass_sp, "cutoff_sp": alloc.cutoff_sp,
           "subsidy_theta": alloc.subsidy_theta, "objective_Y": alloc.objective_Y,
           "entry_clamped": alloc.entry_clamped}
    payload = dict(row)
    f_high = _opt(cfg, "f_high")
    if f_high is not None:
        pol = planner.cycle_policy_path(params, dist, float(_opt(cfg, "f_low", params.f_c)), float(f_high))
        payload["cycle_theta"] = list(pol.theta)
        payload["cycle_cutoffs"] = list(pol.cutoffs)
    path = _emit(cfg, "planner", [row], payload)
    return f"planner: cutoff={alloc.cutoff_sp:.6g} theta={alloc.subsidy_theta:.6g} -> {path}"


def cmd_identify(cfg: RunConfig) -> str:
    params, dist = cfg.effective_params(), cfg.distribution.build()
    law = ident.uniform_shocks(float(_opt(cfg, "shock_low", 0.01)), float(_opt(cfg, "shock_high", 0.2)))
    panel = ident.synthetic_panel(params, dist, int(_opt(cfg, "n", 50)), law, cfg.seed,
                                  noise_sd=float(_opt(cfg, "noise_sd", 0.0)),
                                  incumbent_selection=float(_opt(cfg, "incumbent_selection", 0.0)))
    out = cfg.resolved_output_dir()
    write_text(out / "identify_panel.csv", to_csv(panel.rows()))
    summary = {"beta_hat": panel.beta_hat, "implied_q": panel.beta_hat - 1.0,
               "beta_hat_labor": panel.fit_labor.slope, "r2": panel.fit_income.r2,
               "intercept": panel.fit_income.intercept, "diagnostics": panel.metadata}
    path = write_text(out / "identify_summary.json", to_json(summary))
    return f"identify: beta_hat={panel.beta_hat:.10g} -> {path}"


def cmd_table5(cfg: RunConfig | None, args) -> str:
    freq = args.frequency or (cfg.period_frequency if cfg else "annual")
    q = args.q if args.q is not None else (cfg.model.q if cfg else None)
    res = quant.reproduce_table5(freq, q=q, horizon=args.horizon)
    out = Path(args.out) if args.out else (cfg.resolved_output_dir() if cfg else default_output_dir())
    path = write_text(out / f"table5_{freq}_q{res['q']:g}.json", to_json(res))
    return (f"reproduce-table5 {freq} q={res['q']:g}: theta_ss={res['theta_ss']:.4f} "
            f"lf={res['laissez_faire']['cev_total']:.4%} -> {path}")


HANDLERS = {
    "steady-state": cmd_steady_state, "cycle": cmd_cycle, "sweep": cmd_sweep,
    "transition": cmd_transition, "calibrate": cmd_calibrate, "planner": cmd_planner,
    "identify": cmd_identify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="firmcycles", description="Firm entry/exit cycles with love-of-variety.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="TOML or JSON run configuration")
    ap.add_argument("--out", help="output directory (default: $FIRMCYCLES_OUT or ./out)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--frequency", choices=FREQUENCIES)
    ap.add_argument("--q", type=float, help="love-of-variety override (reproduce-table5)")
    ap.add_argument("--horizon", type=int, default=quant.DEFAULT_HORIZON)
    return ap


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    changes = {}
    if args.out:
        changes["output_dir"] = args.out
    if args.format:
        changes["output_format"] = args.format
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.frequency:
        changes["period_frequency"] = args.frequency
    return replace(cfg, **changes) if changes else cfg


def run_command(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _apply_overrides(load_config(args.config), args) if args.config else None
        if args.command == "reproduce-table5":
            msg = cmd_table5(cfg, args)
        else:
            if cfg is None:
                raise ConfigError(f"{args.command} needs --config")
            msg = HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ValueError) as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(msg)
    return 0


def main() -> None:
    sys.exit(run_command())
