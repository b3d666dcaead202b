"""Three-phase fixed-cost cycles, q* and depth sweeps, TFP cycles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import EntrantDistribution, ModelParams, ScaledDistribution
from .equilibrium import EquilibriumState, Mode, output, solve_ge_steady, solve_pe
from .errors import DegenerateCycle
from .firm_distribution import FirmDistribution

__all__ = [
    "CycleReport", "output", "run_three_phase_cycle", "find_q_star", "dlog_output",
    "depth_sweep", "depth_cap", "find_q_band", "tfp_cycle_experiment", "TfpCycleReport",
    "sweep_has_single_interior_min", "depth_elasticities",
]


@dataclass(frozen=True)
class CycleReport:
    states: tuple[EquilibriumState, EquilibriumState, EquilibriumState]
    sigma: float
    q: float
    dlog_M: float
    dlog_Lp: float
    dlog_Z: float
    dlog_zbar: float
    dlog_Y: float
    mode: Mode
    q_star: float | None = None

    def dlog_Y_at(self, q: float) -> float:
        return dlog_output(self, q)


def dlog_output(report: CycleReport, q: float) -> float:
    """Phase-3 minus phase-1 log output for LoV q; the aggregates do not depend on q."""
    qc = 1.0 / (report.sigma - 1.0)
    return (q - qc) * report.dlog_M + report.dlog_Lp + qc * report.dlog_Z


def _solver(mode: Mode):
    return solve_pe if mode is Mode.PE else solve_ge_steady


def run_three_phase_cycle(params: ModelParams, dist: EntrantDistribution, f_low: float,
                          f_high: float, mode: Mode | str = Mode.PE) -> CycleReport:
    """Solve phase 1 at f_low from an empty economy, phase 2 at f_high, phase 3 at f_low."""
    if not f_high > f_low > 0:
        raise ValueError("need f_high > f_low > 0")
    mode = Mode(mode)
    solve = _solver(mode)
    lo, hi = params.with_(f_c=f_low), params.with_(f_c=f_high)
    s1 = solve(lo, dist)
    s2 = solve(hi, dist, s1.distribution)
    s3 = solve(lo, dist, s2.distribution)
    sig = params.sigma
    dM = math.log(s3.M / s1.M)
    dLp = math.log(s3.Lp / s1.Lp)
    dZ = math.log(s3.Z / s1.Z)
    dzbar = (dZ - dM) / (sig - 1.0)
    rep = CycleReport(states=(s1, s2, s3), sigma=sig, q=params.q, dlog_M=dM, dlog_Lp=dLp,
                      dlog_Z=dZ, dlog_zbar=dzbar, dlog_Y=0.0, mode=mode)
    dY = dlog_output(rep, params.q)
    qstar = None
    if mode is Mode.GE and dM != 0:
        qstar = _q_star_from(rep)
    return CycleReport(**{**rep.__dict__, "dlog_Y": dY, "q_star": qstar})


def _q_star_from(rep: CycleReport) -> float:
    if rep.dlog_M == 0:
        raise DegenerateCycle("no change in firm mass; q* undefined")
    qc = 1.0 / (rep.sigma - 1.0)
    return qc - (rep.dlog_Lp + qc * rep.dlog_Z) / rep.dlog_M


def find_q_star(params: ModelParams, dist: EntrantDistribution, f_low: float, f_high: float) -> float:
    """LoV at which the GE cycle leaves long-run output unchanged (closed form)."""
    rep = run_three_phase_cycle(params, dist, f_low, f_high, Mode.GE)
    return _q_star_from(rep)


def depth_cap(f_low: float, survival: float = 1e-6) -> float:
    """Crisis cost at which the phase-2 cutoff leaves a `survival` share of incumbents.

    For Pareto the phase-2 cutoff of a tied crisis satisfies
    p(z2)/p(z1) = f_low/f_high, so the cap is f_low/survival.
    """
    return f_low / survival


def depth_sweep(params: ModelParams, dist: EntrantDistribution, f_high_grid,
                q_list=(), mode: Mode | str = Mode.GE) -> list[dict]:
    """Cycle aggregates for each crisis depth; one record per grid point."""
    grid = np.asarray(f_high_grid, dtype=float)
    if np.any(np.diff(grid) <= 0) or np.any(grid <= params.f_c):
        raise ValueError("grid must be ascending and above f_low = params.f_c")
    mode = Mode(mode)
    qs = list(q_list) if len(q_list) else [params.q]
    rows = []
    for fh in grid:
        rep = run_three_phase_cycle(params, dist, params.f_c, float(fh), mode)
        s3 = rep.states[2]
        qc = params.q_ces
        row = {
            "f_h": float(fh),
            "M3": s3.M,
            "dlog_M": rep.dlog_M,
            "dlog_Lp": rep.dlog_Lp,
            "dlog_Z": rep.dlog_Z,
            "q_star": _q_star_from(rep) if rep.dlog_M != 0 else float("nan"),
            # CES output Y^CES = Lp Z^(1/(sigma-1)), independent of q
            "dlog_Y_ces": rep.dlog_Lp + qc * rep.dlog_Z,
        }
        for q in qs:
            row[f"dlog_Y@{q:g}"] = dlog_output(rep, q)
            row[f"variety@{q:g}"] = (q - qc) * rep.dlog_M
        rows.append(row)
    return rows


def depth_elasticities(params: ModelParams, dist: EntrantDistribution, f_high: float,
                       mode: Mode | str = Mode.GE, step: float = 1e-5) -> dict:
    """Central log-differences of phase-3 Y, M and CES output with respect to log f_h.

    Each side is a full re-solve of the cycle, so the derivatives are total
    equilibrium responses.
    """
    def logs(fh):
        rep = run_three_phase_cycle(params, dist, params.f_c, fh, mode)
        s3 = rep.states[2]
        return (math.log(s3.Y), math.log(s3.M),
                math.log(s3.Lp) + params.q_ces * math.log(s3.Z))
    up, dn = logs(f_high * math.exp(step)), logs(f_high * math.exp(-step))
    dY, dM, dYces = ((u - d) / (2.0 * step) for u, d in zip(up, dn))
    return {"dlogY3": dY, "dlogM3": dM, "dlogYces3": dYces}


def sweep_has_single_interior_min(values) -> bool:
    v = np.asarray(values, dtype=float)
    i = int(np.argmin(v))
    if i == 0 or i == len(v) - 1:
        return False
    d = np.diff(v)
    return bool(np.all(d[:i] < 0) and np.all(d[i:] > 0))


def find_q_band(params: ModelParams, dist: EntrantDistribution, f_high_grid) -> tuple[float, float]:
    """(min, max) of q*(f_h) over a crisis grid, in GE."""
    rows = depth_sweep(params, dist, f_high_grid, mode=Mode.GE)
    qs = np.array([r["q_star"] for r in rows])
    return float(qs.min()), float(qs.max())


@dataclass(frozen=True)
class TfpCycleReport:
    states: tuple[EquilibriumState, EquilibriumState, EquilibriumState]
    phase2_output_ratio: float


def _rescale(fd: FirmDistribution, dist: EntrantDistribution, factor: float) -> FirmDistribution:
    return FirmDistribution(dist, fd.weights, fd.cutoffs * factor, np.ones(len(fd)))


def tfp_cycle_experiment(params: ModelParams, dist: EntrantDistribution, A_low: float) -> TfpCycleReport:
    """Multiply every productivity by A in phase 2 (PE) and undo it in phase 3.

    Phase 2 runs the ordinary solver on the scaled entrant law with the
    incumbent cutoffs scaled by A; phase 3 maps survivors back.
    """
    if not 0 < A_low <= 1:
        raise ValueError("A_low must lie in (0, 1]")
    s1 = solve_pe(params, dist)
    scaled = ScaledDistribution(dist, A_low)
    s2 = solve_pe(params, scaled, _rescale(s1.distribution, scaled, A_low))
    s3 = solve_pe(params, dist, _rescale(s2.distribution, dist, 1.0 / A_low))
    return TfpCycleReport(states=(s1, s2, s3), phase2_output_ratio=s2.Y / s1.Y)
