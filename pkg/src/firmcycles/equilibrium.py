"""Static equilibrium solvers: cutoff, entry, and the no-entry branch.

One period of the model is solved by `solve_period`. Everything else in
the package (three-phase cycles, reversion staircases, the quantitative
transition) calls it with different cost conventions:

* ``zpc_cost``: per-period fixed cost the marginal firm compares its
  operating profit against (subsidised cost, or (1-beta) NPV in the
  forward-looking model);
* ``labor_fixed_cost``: physical fixed cost absorbed by labor clearing;
* ``labor_entry_cost``: entry cost counted in labor clearing (0 for the
  long-run static convention).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import optimize

from .distributions import EntrantDistribution, ModelParams
from .errors import EmptyEconomy, IterationCap, NonConvergence
from .firm_distribution import Cohort, FirmDistribution

MAX_ITER = 200


class Regime(str, Enum):
    ENTRY = "Entry"
    NO_ENTRY = "NoEntry"


class Mode(str, Enum):
    PE = "PE"
    GE = "GE"


def output(params: ModelParams, M: float, Lp: float, Z: float) -> float:
    """Y = M^(q - 1/(sigma-1)) Lp Z^(1/(sigma-1)); zero for an empty economy."""
    if M <= 0:
        return 0.0
    qc = params.q_ces
    return M ** (params.q - qc) * Lp * Z ** qc


@dataclass(frozen=True)
class EquilibriumState:
    cutoff: float
    entry_mass: float
    distribution: FirmDistribution
    M: float
    Z: float
    labor_production: float
    revenue: float
    output: float
    price_index: float
    regime: Regime
    entry_cutoff: float

    @property
    def E(self) -> float:
        return self.entry_mass

    @property
    def Lp(self) -> float:
        return self.labor_production

    @property
    def R(self) -> float:
        return self.revenue

    @property
    def Y(self) -> float:
        return self.output

    def avg_productivity(self, sigma: float) -> float:
        return (self.Z / self.M) ** (1.0 / (sigma - 1.0))


def solve_cutoff_entry(params: ModelParams, dist: EntrantDistribution,
                       fixed_cost: float | None = None) -> float:
    """Entrant cutoff from f_e/f_c = int [(z/cutoff)^(sigma-1) - 1] mu(z) dz.

    Independent of incumbents. ``fixed_cost`` overrides f_c (NPV or
    subsidised cost).
    """
    f = params.f_c if fixed_cost is None else fixed_cost
    return dist.cutoff_for_cost_ratio(params.f_e / f, params.sigma)


def _expand_upper(fun, lo: float, max_doublings: int = 400) -> float:
    hi = lo * 2.0
    for _ in range(max_doublings):
        if fun(hi) > 0:
            return hi
        hi *= 2.0
    raise NonConvergence("could not bracket the no-entry cutoff", lower=lo, upper=hi)


def solve_period(params: ModelParams, dist: EntrantDistribution, incumbents: FirmDistribution,
                 *, mode: Mode | str, zpc_cost: float, entry_cutoff: float,
                 labor_fixed_cost: float | None = None,
                 labor_entry_cost: float = 0.0) -> EquilibriumState:
    """Solve one period given incumbents (already decayed if relevant)."""
    mode = Mode(mode)
    sigma = params.sigma
    s1 = sigma - 1.0
    F = params.f_c if labor_fixed_cost is None else labor_fixed_cost
    L = params.labor_endowment_L
    I = params.market_size_I
    c = zpc_cost

    z = entry_cutoff
    inc = incumbents.truncate(z)
    ZI, MI = inc.market_intensity(sigma), inc.mass()
    IE, pE = dist.partial_power_moment(z, s1), dist.survival_prob(z)
    zs = z ** s1

    if mode is Mode.PE:
        lead = I * zs / (sigma * c) / IE
        E = lead - ZI / IE
    else:
        lead = (L - MI * F) * zs / s1
        den = (pE * F + labor_entry_cost) * zs / s1 + c * IE
        E = (lead - c * ZI) / den
        lead = lead / den

    # FE equality (the structural Pareto tie) counts as no entry
    if E > 1e-13 * max(abs(lead), 1.0):
        fd = inc.merge(Cohort(E, z, 1.0))
        M, Z = MI + E * pE, ZI + E * IE
        R = I if mode is Mode.PE else sigma / s1 * (L - M * F - E * labor_entry_cost)
        return _state(params, z, E, fd, M, Z, R, Regime.ENTRY, z)

    if len(incumbents) == 0 or incumbents.mass() <= 0:
        raise EmptyEconomy("no profitable entry and no incumbents")

    def revenue(x):
        if mode is Mode.PE:
            return I
        return sigma / s1 * (L - incumbents.mass(floor=x) * F)

    def gap(x):
        return revenue(x) / sigma * x ** s1 - c * incumbents.market_intensity(sigma, floor=x)

    lo = z
    g_lo = gap(lo)
    if g_lo >= 0:
        cut = lo
    else:
        hi = _expand_upper(gap, lo)
        cut, info = optimize.brentq(gap, lo, hi, xtol=1e-14 * lo, rtol=4 * np.finfo(float).eps,
                                    maxiter=MAX_ITER, full_output=True, disp=False)
        if not info.converged:
            raise NonConvergence("no-entry cutoff did not converge", lower=lo, upper=hi,
                                 iterations=info.iterations)
    fd = incumbents.truncate(cut)
    M, Z = fd.mass(), fd.market_intensity(sigma)
    R = I if mode is Mode.PE else sigma / s1 * (L - M * F)
    return _state(params, cut, 0.0, fd, M, Z, R, Regime.NO_ENTRY, z)


def _state(params, cutoff, E, fd, M, Z, R, regime, entry_cutoff) -> EquilibriumState:
    Lp = (params.sigma - 1.0) / params.sigma * R
    Y = output(params, M, Lp, Z)
    P = R / Y if Y > 0 else float("inf")
    return EquilibriumState(cutoff=cutoff, entry_mass=E, distribution=fd, M=M, Z=Z,
                            labor_production=Lp, revenue=R, output=Y, price_index=P,
                            regime=regime, entry_cutoff=entry_cutoff)


def solve_pe(params: ModelParams, dist: EntrantDistribution,
             incumbents: FirmDistribution | None = None,
             firm_cost: float | None = None) -> EquilibriumState:
    """Partial equilibrium with expenditure I fixed."""
    incumbents = incumbents if incumbents is not None else FirmDistribution.empty(dist)
    c = params.f_c if firm_cost is None else firm_cost
    z = solve_cutoff_entry(params, dist, c)
    return solve_period(params, dist, incumbents, mode=Mode.PE, zpc_cost=c, entry_cutoff=z)


def solve_ge_steady(params: ModelParams, dist: EntrantDistribution,
                    incumbents: FirmDistribution | None = None,
                    firm_cost: float | None = None) -> EquilibriumState:
    """Long-run general equilibrium; entry costs are left out of labor clearing.

    ``firm_cost`` is the fixed cost firms face (e.g. f_c (1 - theta)); labor
    clearing always uses the physical f_c.
    """
    incumbents = incumbents if incumbents is not None else FirmDistribution.empty(dist)
    c = params.f_c if firm_cost is None else firm_cost
    z = solve_cutoff_entry(params, dist, c)
    return solve_period(params, dist, incumbents, mode=Mode.GE, zpc_cost=c, entry_cutoff=z,
                        labor_fixed_cost=params.f_c, labor_entry_cost=0.0)


def expected_entrant_profit(params: ModelParams, dist: EntrantDistribution,
                            fd: FirmDistribution, cutoff: float, revenue: float | None = None,
                            fixed_cost: float | None = None) -> float:
    """int_{z >= cutoff} [(R/sigma) z^(sigma-1)/Z - f_c] mu(z) dz given active firms fd."""
    R = params.market_size_I if revenue is None else revenue
    f = params.f_c if fixed_cost is None else fixed_cost
    s1 = params.sigma - 1.0
    Z = fd.market_intensity(params.sigma)
    return (R / params.sigma * dist.partial_power_moment(cutoff, s1) / Z
            - f * dist.survival_prob(cutoff))


def zpc_residual(params: ModelParams, state: EquilibriumState, fixed_cost: float | None = None) -> float:
    f = params.f_c if fixed_cost is None else fixed_cost
    return state.revenue / params.sigma * state.cutoff ** (params.sigma - 1.0) / state.Z - f


def iterative_entry_oracle(params: ModelParams, dist: EntrantDistribution,
                           incumbents: FirmDistribution | None = None,
                           batch_size: float = 1e-3, max_batches: int = 10**6,
                           refine: bool = True) -> EquilibriumState:
    """Partial-equilibrium entry game played in small batches.

    Each round admits ``batch_size`` trial entrants drawn from the entrant
    law, then lets every firm below the zero-profit cutoff exit. The game
    stops once an entrant expects no more than f_e. With ``refine`` the
    batch is halved whenever a batch would overshoot the free-entry
    condition, so the stopping point is located to machine precision
    instead of to within one batch.
    """
    if batch_size <= 0:
        raise ValueError("batch_size must be positive")
    sigma, s1 = params.sigma, params.sigma - 1.0
    I, f, fe = params.market_size_I, params.f_c, params.f_e
    start = incumbents if incumbents is not None else FirmDistribution.empty(dist)
    ppm, surv = dist.partial_power_moment, dist.survival_prob

    # plain float lists: (weight, cutoff) with weight = trial mass * survival
    weights = [float(w) for w in start.weights]
    cuts = [float(c) for c in start.cutoffs]

    def intensity(x):
        return sum(w * ppm(c if c > x else x, s1) for w, c in zip(weights, cuts))

    def zpc_cutoff(lo):
        def gap(x):
            return I / sigma * x ** s1 - f * intensity(x)
        if gap(lo) >= 0:
            return lo
        hi = _expand_upper(gap, lo)
        return optimize.brentq(gap, lo, hi, xtol=1e-15 * lo, rtol=4 * np.finfo(float).eps,
                               maxiter=MAX_ITER)

    def fold(x):
        # cohorts below x are truncated to x and pooled into one entry
        low = sum(w for w, c in zip(weights, cuts) if c <= x)
        kept = [(w, c) for w, c in zip(weights, cuts) if c > x]
        weights[:] = [w for w, _ in kept]
        cuts[:] = [c for _, c in kept]
        if low > 0:
            weights.append(low)
            cuts.append(x)

    def entrant_profit(x):
        Z = intensity(x)
        if Z <= 0:
            return np.inf
        return I / sigma * ppm(x, s1) / Z - f * surv(x)

    cut = zpc_cutoff(dist.z_min) if weights else dist.z_min
    fold(cut)
    total_entry = 0.0
    batch = batch_size
    for _ in range(max_batches):
        if entrant_profit(cut) <= fe:
            break
        weights.append(batch)
        cuts.append(dist.z_min)
        new_cut = zpc_cutoff(cut)
        if refine and I / sigma * ppm(new_cut, s1) / intensity(new_cut) - f * surv(new_cut) < fe:
            weights.pop()
            cuts.pop()
            if batch < 1e-15 * max(total_entry, 1.0):
                break
            batch *= 0.5
            continue
        fold(new_cut)
        cut = new_cut
        total_entry += batch
    else:
        raise IterationCap(f"entry game did not stop within {max_batches} batches",
                           entry=total_entry, cutoff=cut)

    fd = FirmDistribution(dist, weights, cuts, np.ones(len(weights)))
    M, Z = fd.mass(), fd.market_intensity(sigma)
    regime = Regime.ENTRY if total_entry > 0 else Regime.NO_ENTRY
    return _state(params, cut, total_entry, fd, M, Z, I, regime, cut)
