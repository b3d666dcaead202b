"""Myopic planner: cutoff and entry first-order conditions, decentralising subsidy.

The planner picks entry and the cutoff to maximise current output
Y = M^(q - 1/(sigma-1)) Lp Z^(1/(sigma-1)) subject to labor clearing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .distributions import EntrantDistribution, ModelParams, is_share_nonincreasing
from .equilibrium import output
from .errors import NoRoot, RegimeMismatch
from .firm_distribution import FirmDistribution


@dataclass(frozen=True)
class PlannerAllocation:
    entry_mass_sp: float
    cutoff_sp: float
    subsidy_theta: float
    objective_Y: float
    entry_clamped: bool = False


def _require_assumption(dist: EntrantDistribution, sigma: float) -> None:
    if not is_share_nonincreasing(dist, sigma):
        raise ValueError("entrant law violates the non-increasing conditional share assumption")


def _bracket_root(fun, lo: float, increasing: bool) -> float:
    """Root of a monotone function on [lo, inf)."""
    sign = 1.0 if increasing else -1.0
    hi = 2.0 * lo
    for _ in range(400):
        if sign * fun(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NoRoot("no sign change on [lo, inf)")
    return optimize.brentq(fun, lo, hi, xtol=1e-14 * lo, rtol=4 * np.finfo(float).eps, maxiter=200)


def planner_cutoff_no_incumbents(params: ModelParams, dist: EntrantDistribution) -> float:
    """Cutoff solving f_e/(f_c p(z) + f_e) (sigma-1) q = 1 - z^(sigma-1)/E[z^(sigma-1) | z >= z].

    Clamped at z_min when the left side already exceeds the right at z_min.
    Raises NoRoot when no cutoff balances the two (q too small for the law).
    """
    _require_assumption(dist, params.sigma)
    s1, q, fc, fe = params.sigma - 1.0, params.q, params.f_c, params.f_e

    def foc(z):
        return fe / (fc * dist.survival_prob(z) + fe) * s1 * q - (
            1.0 - 1.0 / dist.conditional_relative_share(z, params.sigma))

    z0 = dist.z_min
    if foc(z0) >= 0:
        return z0
    return _bracket_root(foc, z0, increasing=True)


def planner_entry(params: ModelParams, dist: EntrantDistribution, incumbents: FirmDistribution | None,
                  cutoff: float | None = None) -> tuple[float, bool]:
    """Cumulative planner entry in the steady state reached by repeated myopic planning.

    Returns (entry, clamped); a negative formula value is reported as 0 with
    clamped=True. Entry rises with q at a given cutoff. When the cutoff is
    left to the planner it falls with q, so trial entry can drop even as
    the active mass grows.
    """
    s1 = params.sigma - 1.0
    z = planner_cutoff_no_incumbents(params, dist) if cutoff is None else cutoff
    fc, fe, q, L = params.f_c, params.f_e, params.q, params.labor_endowment_L
    p = dist.survival_prob(z)
    if incumbents is not None and len(incumbents):
        inc = incumbents.truncate(z)
        M_inc, Z_inc = inc.mass(), inc.market_intensity(params.sigma)
    else:
        M_inc = Z_inc = 0.0
    den = fc * p * (1.0 + q) + fe
    E = (L - M_inc * fc) * q / den - Z_inc / dist.partial_power_moment(z, s1) * (fc * p + fe) / den
    if E < 0:
        return 0.0, True
    return E, False


def planner_exit_cutoff(params: ModelParams, dist: EntrantDistribution, M0: float, z0: float) -> float:
    """Planner cutoff when M0 trial-mass incumbents sit above z0 and nobody enters.

    Solves f_c M0 p(z) = (L - f_c M0 p(z))/(sigma-1) ([q(sigma-1) - 1] + 1/E[(x/z)^(sigma-1) | x >= z]).
    """
    _require_assumption(dist, params.sigma)
    s1, q, fc, L = params.sigma - 1.0, params.q, params.f_c, params.labor_endowment_L

    def foc(z):
        used = fc * M0 * dist.survival_prob(z)
        return used - (L - used) / s1 * (q * s1 - 1.0 + 1.0 / dist.conditional_relative_share(z, params.sigma))

    # foc decreases in z: fewer active firms, less fixed-cost labor
    if foc(z0) < 0:
        raise RegimeMismatch(f"planner prefers a cutoff below incumbents' cutoff {z0}")
    return _bracket_root(foc, z0, increasing=False)


def optimal_subsidy(params: ModelParams, dist: EntrantDistribution, cutoff_sp: float) -> float:
    """Fixed-cost subsidy theta that makes the market pick the planner's cutoff.

    Firms paying (1 - theta) f_c reproduce the planner cutoff when
    1 - theta = 1 / ([q(sigma-1) - 1] E[(z/cut)^(sigma-1) | z >= cut] + 1).
    """
    if cutoff_sp < dist.z_min:
        raise ValueError("cutoff below support")
    share = dist.conditional_relative_share(cutoff_sp, params.sigma)
    return 1.0 - 1.0 / ((params.q * (params.sigma - 1.0) - 1.0) * share + 1.0)


def subsidy_inverse_share_form(params: ModelParams, dist: EntrantDistribution, cutoff_sp: float) -> float:
    """Variant with the conditional share in the denominator: 1/([q(sigma-1) - 1]/share + 1).

    Kept as a diagnostic; it does not decentralise the planner allocation
    (see the decentralisation tests).
    """
    share = dist.conditional_relative_share(cutoff_sp, params.sigma)
    return 1.0 - 1.0 / ((params.q * (params.sigma - 1.0) - 1.0) / share + 1.0)


def planner_allocation(params: ModelParams, dist: EntrantDistribution) -> PlannerAllocation:
    """Planner steady state with no incumbents."""
    z = planner_cutoff_no_incumbents(params, dist)
    E, clamped = planner_entry(params, dist, None, z)
    s1 = params.sigma - 1.0
    M = E * dist.survival_prob(z)
    Z = E * dist.partial_power_moment(z, s1)
    Lp = params.labor_endowment_L - M * params.f_c
    return PlannerAllocation(entry_mass_sp=E, cutoff_sp=z, subsidy_theta=optimal_subsidy(params, dist, z),
                             objective_Y=output(params, M, Lp, Z), entry_clamped=clamped)


def myopic_output(params: ModelParams, dist: EntrantDistribution, E: float, z: float,
                  incumbents_trials: float = 0.0, entry_cost_in_labor: bool = True) -> float:
    """Current output when E entrants and `incumbents_trials` incumbents share cutoff z."""
    s1 = params.sigma - 1.0
    T = incumbents_trials + E
    M = T * dist.survival_prob(z)
    Z = T * dist.partial_power_moment(z, s1)
    Lp = params.labor_endowment_L - M * params.f_c - (E * params.f_e if entry_cost_in_labor else 0.0)
    if Lp <= 0 or M <= 0:
        return 0.0
    return output(params, M, Lp, Z)


@dataclass(frozen=True)
class CyclePolicy:
    theta: tuple[float, float, float]
    cutoffs: tuple[float, float, float]


def cycle_policy_path(params: ModelParams, dist: EntrantDistribution, f_low: float,
                      f_high: float) -> CyclePolicy:
    """Phase-wise subsidies along a planner-run fixed-cost cycle.

    Phase 1: planner steady state at f_low. Phase 2: planner exit at f_high
    against the phase-1 firms (no exit if the planner would not raise the
    cutoff). Phase 3: back at f_low, where the entrant cutoff returns to the
    phase-1 value.
    """
    lo, hi = params.with_(f_c=f_low), params.with_(f_c=f_high)
    z1 = planner_cutoff_no_incumbents(lo, dist)
    E1, _ = planner_entry(lo, dist, None, z1)
    try:
        z2 = planner_exit_cutoff(hi, dist, E1, z1)
    except RegimeMismatch:
        z2 = z1
    z3 = planner_cutoff_no_incumbents(lo, dist)
    thetas = tuple(optimal_subsidy(params, dist, z) for z in (z1, z2, z3))
    return CyclePolicy(theta=thetas, cutoffs=(z1, z2, z3))
