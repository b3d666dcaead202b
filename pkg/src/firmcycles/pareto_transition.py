"""Closed forms for fixed-cost reversion staircases under a Pareto entrant law.

The fixed cost jumps from f0 to phi*f0 and then steps back down in T*
equal log-steps: f_t = f0 * phi^max(0, 1 - t/T*). The formulas are stated
for f0 = 1; other values are handled by measuring I and f_e in units of f0.
Each closed form is paired with a step simulator built from solve_pe so the
two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ModelParams, ParetoEntrantDist
from .equilibrium import EquilibriumState, Mode, solve_cutoff_entry, solve_pe, solve_period
from .firm_distribution import FirmDistribution


@dataclass(frozen=True)
class ReversionPath:
    phi: float
    T_star: int
    f_c_path: tuple[float, ...]      # t = -1, 0, ..., T*
    entry_flows: tuple[float, ...]   # t = 1, ..., T*
    cutoffs: tuple[float, ...]       # t = 0, ..., T*
    M_final: float
    Z_final: float
    M_pre: float
    Z_pre: float


def _normalised(params: ModelParams):
    f0 = params.f_c
    return params.market_size_I / f0, params.f_e / f0


def _check(params: ModelParams, dist: ParetoEntrantDist, phi: float, T_star: int):
    dist.check_pairing(params.sigma)
    if phi < 1:
        raise ValueError("phi must be >= 1")
    if int(T_star) != T_star or T_star < 1:
        raise ValueError("T_star must be a positive integer")
    k, s1 = dist.shape_k, params.sigma - 1.0
    _, fe = _normalised(params)
    if s1 / (k - s1) / fe <= 1.0:
        raise ValueError("pre-crisis cutoff sits at z_min; closed forms need an interior cutoff")


def reversion_cost_path(f0: float, phi: float, T_star: int) -> list[float]:
    """f_t for t = -1, 0, ..., T*."""
    return [f0] + [f0 * phi ** max(0.0, 1.0 - t / T_star) for t in range(T_star + 1)]


def closed_form_transition(params: ModelParams, dist: ParetoEntrantDist, phi: float,
                           T_star: int) -> ReversionPath:
    _check(params, dist, phi, T_star)
    I, fe = _normalised(params)
    k, sig = dist.shape_k, params.sigma
    s1 = sig - 1.0
    c = (k - s1) / k
    flow = I / k * s1 / sig / fe * (1.0 - phi ** ((s1 - k) / k / T_star))
    cutoffs = tuple(dist.z_min * (phi ** ((T_star - t) / T_star) / fe * s1 / (k - s1)) ** (1.0 / k)
                    for t in range(T_star + 1))
    M_pre = I / sig * c
    if phi == 1.0:
        M_final = M_pre
    else:
        ratio = (1.0 - phi ** (-c / T_star)) / (1.0 - phi ** (-1.0 / T_star))
        M_final = I / sig * c * (1.0 / phi + (1.0 - 1.0 / phi) * ratio)
    # PE pins Z by the zero-profit condition at the pre-crisis cutoff and cost
    Z_pre = I / sig * cutoffs[-1] ** s1
    return ReversionPath(phi=phi, T_star=T_star,
                         f_c_path=tuple(reversion_cost_path(params.f_c, phi, T_star)),
                         entry_flows=(flow,) * T_star, cutoffs=cutoffs,
                         M_final=M_final, Z_final=Z_pre,
                         M_pre=M_pre, Z_pre=Z_pre)


def simulate_reversion(params: ModelParams, dist: ParetoEntrantDist, phi: float,
                       T_star: int) -> list[EquilibriumState]:
    """Step-by-step PE solves along the staircase; states for t = -1, 0, ..., T*."""
    states = []
    fd = FirmDistribution.empty(dist)
    for f in reversion_cost_path(params.f_c, phi, T_star):
        st = solve_pe(params.with_(f_c=f), dist, fd)
        states.append(st)
        fd = st.distribution
    return states


def reversion_rows(params: ModelParams, dist: ParetoEntrantDist, phi: float, T_star: int) -> list[dict]:
    """Rows (t, f_c_t, cutoff, E_t, M_t) of the simulated staircase."""
    states = simulate_reversion(params, dist, phi, T_star)
    path = reversion_cost_path(params.f_c, phi, T_star)
    return [{"t": t - 1, "f_c_t": f, "cutoff": s.cutoff, "E_t": s.E, "M_t": s.M}
            for t, (f, s) in enumerate(zip(path, states))]


def limit_mass(params: ModelParams, dist: ParetoEntrantDist, phi: float) -> float:
    """Firm mass after a continuous reversion (T* -> infinity)."""
    _check(params, dist, phi, 1)
    I, _ = _normalised(params)
    k, sig = dist.shape_k, params.sigma
    c = (k - (sig - 1.0)) / k
    return I / sig * c * ((1.0 - 1.0 / phi) * c + 1.0 / phi)


def limit_density_factor(params: ModelParams, dist: ParetoEntrantDist, phi: float, z) -> np.ndarray | float:
    """m_inf(z) / m_{-1}(z) after a continuous reversion.

    Zero below the pre-crisis cutoff, rising like (k - sigma + 1) ln(z/z_pre)
    up to the crisis cutoff, then a constant 1 + ((k - sigma + 1)/k) ln phi.
    """
    k, s1 = dist.shape_k, params.sigma - 1.0
    z_pre = solve_cutoff_entry(params, dist)
    z_crisis = solve_cutoff_entry(params.with_(f_c=params.f_c * phi), dist)
    zz = np.asarray(z, dtype=float)
    below = (k - s1) * np.log(np.maximum(zz, z_pre) / z_pre)
    above = 1.0 + (k - s1) / k * math.log(phi)
    out = np.where(zz < z_pre, 0.0, np.where(zz < z_crisis, below, above))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EntryDecay:
    A_coeff: float
    one_minus_b: float
    cutoff: float


def entry_decay_rate(fe_over_fc: float, p_cut: float, rel_share: float, sigma: float) -> float:
    """1 - b = (f_e/f_c) / (f_e/f_c + ((sigma-1) E[(z/cut)^(sigma-1)] + 1) p)."""
    return fe_over_fc / (fe_over_fc + ((sigma - 1.0) * rel_share + 1.0) * p_cut)


def ge_entry_decay_check(params: ModelParams, dist, incumbents: FirmDistribution) -> EntryDecay:
    """Coefficients of the geometric entry law E_t = (1 - b)^(t-1) A.

    Period-by-period GE with entry costs in labor clearing and no exogenous
    exit; the cutoff stays at its static value.
    """
    s1 = params.sigma - 1.0
    z = solve_cutoff_entry(params, dist)
    inc = incumbents.truncate(z)
    M0, ZI = inc.mass(), inc.market_intensity(params.sigma)
    IE, p = dist.partial_power_moment(z, s1), dist.survival_prob(z)
    zt = z ** s1 / IE
    zt0 = ZI / IE
    ratio = params.f_e / params.f_c
    den = 1.0 + zt / s1 * (ratio + p)
    A = (zt / s1 * (params.labor_endowment_L - M0 * params.f_c) / params.f_c - zt0) / den
    b = (1.0 + p * zt / s1) / den
    return EntryDecay(A_coeff=A, one_minus_b=1.0 - b, cutoff=z)


def simulate_ge_entry(params: ModelParams, dist, incumbents: FirmDistribution,
                      periods: int) -> list[EquilibriumState]:
    """Per-period GE with E_t f_e in labor clearing, delta = 0."""
    z = solve_cutoff_entry(params, dist)
    fd = incumbents
    out = []
    for _ in range(periods):
        st = solve_period(params, dist, fd, mode=Mode.GE, zpc_cost=params.f_c, entry_cutoff=z,
                          labor_fixed_cost=params.f_c, labor_entry_cost=params.f_e)
        out.append(st)
        fd = st.distribution
    return out
