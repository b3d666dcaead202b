"""Recovering love-of-variety from output responses to demand shocks.

Closed-form maps between regression slopes and q, the elasticities of firm
mass and average productivity to market size, and a synthetic panel of
industries on which the regression can be run end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import EntrantDistribution, ModelParams
from .equilibrium import solve_pe
from .errors import DegenerateDenominator, DomainError, UndefinedAtAlphaZero
from .firm_distribution import Cohort, FirmDistribution

RNG_ALGORITHM = "PCG64"


def sigma_from_profit_rate(r: float) -> tuple[float, float]:
    """Profit share r = 1/sigma gives (sigma, q_ces) = (1/r, r/(1-r))."""
    if not 0 < r < 1:
        raise DomainError(f"profit rate must lie in (0, 1), got {r}")
    return 1.0 / r, r / (1.0 - r)


def lemma3_elasticities(params: ModelParams, dist: EntrantDistribution, entrant_cutoff: float,
                        incumbent_cutoff: float, incumbent_trials: float) -> tuple[float, float]:
    """Right-derivatives (dlog M/dlog I, dlog zbar/dlog I) in PE with selected incumbents.

    Incumbents are ``incumbent_trials`` draws truncated at ``incumbent_cutoff``;
    entrants truncate at ``entrant_cutoff``. The no-incumbent entry mass E0
    is the one that would deliver the same market intensity without incumbents.
    """
    s1 = params.sigma - 1.0
    zl, zs = entrant_cutoff, incumbent_cutoff
    if zl < dist.z_min or zs < dist.z_min:
        raise ValueError("cutoffs must lie in the support")
    pl, ps = dist.survival_prob(zl), dist.survival_prob(zs)
    share_l = dist.partial_power_moment(zl, s1) / pl
    share_s = dist.partial_power_moment(zs, s1) / ps
    k_fn = ps * (1.0 - share_s / share_l)
    # PE: market intensity I z^(s1)/(sigma f_c), carried by E0 entrants alone
    Z = params.market_size_I * zl ** s1 / (params.sigma * params.f_c)
    E0 = Z / dist.partial_power_moment(zl, s1)
    den = E0 * pl + incumbent_trials * k_fn
    if abs(den) < 1e-300:
        raise DegenerateDenominator("E0 p(cut) + E_I k vanishes")
    dM = E0 * pl / den
    return dM, (1.0 - dM) / s1


def q_from_beta(beta: float, alpha: float) -> float:
    """Implied q when deflators include the variety effect: (1-beta)/(alpha(1-beta) - 1)."""
    den = alpha * (1.0 - beta) - 1.0
    if den == 0:
        raise DegenerateDenominator("alpha (1 - beta) = 1")
    return (1.0 - beta) / den


def q_from_beta_mismeasured(beta_tilde: float, alpha: float, sigma: float) -> float:
    """Implied q when deflators miss the variety effect: (1/alpha)[1 + 1/((sigma-1)(1-beta_tilde))]."""
    if alpha == 0:
        raise UndefinedAtAlphaZero("q is not identified at alpha = 0 with CES-only deflators")
    if beta_tilde == 1:
        raise DegenerateDenominator("beta_tilde = 1")
    return (1.0 + 1.0 / ((sigma - 1.0) * (1.0 - beta_tilde))) / alpha


def bias_measured(beta: float, alpha: float) -> float:
    """(beta - 1) - q(alpha) = -alpha (1-beta)^2 / (alpha(1-beta) - 1)."""
    den = alpha * (1.0 - beta) - 1.0
    if den == 0:
        raise DegenerateDenominator("alpha (1 - beta) = 1")
    return -alpha * (1.0 - beta) ** 2 / den


def bias_mismeasured(beta_tilde: float, alpha: float, sigma: float) -> float:
    """(beta_tilde - 1) - q_tilde(alpha)."""
    if alpha == 0:
        raise UndefinedAtAlphaZero("bias undefined at alpha = 0")
    if beta_tilde == 1:
        raise DegenerateDenominator("beta_tilde = 1")
    s1, b = sigma - 1.0, beta_tilde - 1.0
    return (alpha * s1 * b * b - s1 * b + 1.0) / (alpha * s1 * b)


def q_homogeneous(beta_hat: float, chi: float) -> float:
    """Production homogeneous of degree chi: slope chi + q."""
    return beta_hat - chi


@dataclass(frozen=True)
class PanelObservation:
    industry: int
    dlog_Y: float
    dlog_I: float
    dlog_Lp: float
    shock: float


@dataclass(frozen=True)
class OlsFit:
    slope: float
    intercept: float
    r2: float


def ols(x, y) -> OlsFit:
    """Two-variable least squares in closed form."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two observations")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise DegenerateDenominator("regressor has no variation")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - intercept - slope * x
    syy = np.sum((y - ym) ** 2)
    r2 = 1.0 if syy == 0 else float(1.0 - np.sum(resid ** 2) / syy)
    return OlsFit(slope, intercept, r2)


@dataclass(frozen=True)
class SyntheticPanel:
    observations: tuple[PanelObservation, ...]
    fit_income: OlsFit
    fit_labor: OlsFit
    metadata: dict = field(default_factory=dict)

    @property
    def beta_hat(self) -> float:
        return self.fit_income.slope

    def rows(self) -> list[dict]:
        return [{"industry": o.industry, "dlog_I": o.dlog_I, "dlog_Lp": o.dlog_Lp, "dlog_Y": o.dlog_Y}
                for o in self.observations]


def uniform_shocks(low: float = 0.01, high: float = 0.2) -> Callable[[np.random.Generator], float]:
    def draw(rng):
        return float(rng.uniform(low, high))
    return draw


def synthetic_panel(params: ModelParams, dist: EntrantDistribution, n: int,
                    shock_law: Callable[[np.random.Generator], float] | None = None, seed: int = 0,
                    noise_sd: float = 0.0, incumbent_selection: float = 0.0,
                    allow_negative: bool = False) -> SyntheticPanel:
    """n PE industries hit by one log income shock each; slopes of dlog Y on dlog I and dlog Lp.

    Industries differ in market size. ``incumbent_selection`` > 0 seats the
    incumbents at a cutoff that much (relative) above the entrant cutoff,
    breaking the equal-cutoff assumption. Measurement noise with standard
    deviation ``noise_sd`` is added to dlog Y. Each industry draws from its
    own stream spawned from ``seed``.
    """
    if n < 2:
        raise ValueError("need at least two industries")
    shock_law = shock_law or uniform_shocks()
    streams = [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]
    obs = []
    for i, rng in enumerate(streams):
        size = float(rng.uniform(0.5, 2.0))
        shock = shock_law(rng)
        if shock <= 0 and not allow_negative:
            raise ValueError("shock law must be positive (right-derivatives only)")
        p0 = params.with_(market_size_I=size)
        base = solve_pe(p0, dist)
        if incumbent_selection > 0:
            # keep half the base entrants, seated above the entrant cutoff
            z_star = base.cutoff * (1.0 + incumbent_selection)
            inc = FirmDistribution.from_cohorts(dist, [Cohort(0.5 * base.E, z_star)])
            base = solve_pe(p0, dist, inc)
        p1 = p0.with_(market_size_I=size * np.exp(shock))
        new = solve_pe(p1, dist, base.distribution)
        dY = float(np.log(new.Y / base.Y))
        if noise_sd > 0:
            dY += float(rng.normal(0.0, noise_sd))
        obs.append(PanelObservation(industry=i, dlog_Y=dY, dlog_I=float(np.log(new.R / base.R)),
                                    dlog_Lp=float(np.log(new.Lp / base.Lp)), shock=shock))
    x_i = [o.dlog_I for o in obs]
    x_l = [o.dlog_Lp for o in obs]
    y = [o.dlog_Y for o in obs]
    meta = {"rng": RNG_ALGORITHM, "seed": seed, "n": n, "noise_sd": noise_sd,
            "incumbent_selection": incumbent_selection}
    return SyntheticPanel(tuple(obs), ols(x_i, y), ols(x_l, y), meta)
