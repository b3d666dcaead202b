"""Forward-looking model with random exit, fixed-cost shocks and subsidy levers.

Firms see the whole future path of subsidised fixed costs and discount it at
beta_firm; a share delta of firms dies at the start of every period. The
economy starts in the steady state of its policy regime, the fixed cost jumps
to f0 + epsilon at onset (t = 0) and decays back geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from .distributions import EntrantDistribution, ModelParams, pareto_from_tail
from .equilibrium import EquilibriumState, Mode, Regime, _state, solve_period
from .errors import Infeasible, ModelError, NonConvergence, NonPositiveCost, TargetUnreachable
from .firm_distribution import Cohort, FirmDistribution

DEFAULT_HORIZON = 600


@dataclass(frozen=True)
class ShockPath:
    f0: float = 1.0
    epsilon: float = 0.0
    alpha: float = 0.841
    horizon: int = DEFAULT_HORIZON
    f_e_path: tuple[float, ...] | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        if self.f_e_path is not None:
            object.__setattr__(self, "f_e_path", tuple(float(x) for x in self.f_e_path))
            if len(self.f_e_path) > self.horizon:
                raise ValueError("f_e_path longer than horizon")

    def fixed_costs(self) -> np.ndarray:
        """f_t = f0 + epsilon alpha^s, s = 0..horizon-1 periods since onset."""
        return self.f0 + self.epsilon * self.alpha ** np.arange(self.horizon)

    def entry_costs(self, default: float) -> np.ndarray:
        out = np.full(self.horizon, float(default))
        if self.f_e_path:
            out[: len(self.f_e_path)] = self.f_e_path
        return out

    def with_(self, **changes) -> "ShockPath":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class PolicyLevers:
    theta_ss: float = 0.0
    theta_cyc: float = 0.0

    def __post_init__(self):
        if not self.theta_ss < 1:
            raise ValueError("theta_ss must be below 1")


class PolicyMode(str, Enum):
    SS_ONLY = "SsOnly"
    SS_PLUS_CYCLE = "SsPlusCycle"


@dataclass(frozen=True)
class TransitionSeries:
    t: np.ndarray
    f_c: np.ndarray
    f_bar: np.ndarray
    cutoff: np.ndarray
    E: np.ndarray
    M: np.ndarray
    Z: np.ndarray
    Lp: np.ndarray
    Y: np.ndarray
    f_e: np.ndarray
    regime: tuple[str, ...]
    initial: EquilibriumState
    terminal: EquilibriumState
    params: ModelParams = field(repr=False)

    @property
    def horizon(self) -> int:
        return len(self.t)

    @property
    def avg_productivity(self) -> np.ndarray:
        return (self.Z / self.M) ** (1.0 / (self.params.sigma - 1.0))

    def labor_residual(self) -> np.ndarray:
        return self.Lp + self.M * self.f_c + self.E * self.f_e - self.params.labor_endowment_L

    def rows(self) -> list[dict]:
        """One record per period with log deviations from the pre-shock steady state."""
        s = self.initial
        out = []
        for i in range(self.horizon):
            out.append({
                "t": int(self.t[i]), "f_c": float(self.f_c[i]), "f_bar": float(self.f_bar[i]),
                "cutoff": float(self.cutoff[i]), "E": float(self.E[i]), "M": float(self.M[i]),
                "Z": float(self.Z[i]), "Lp": float(self.Lp[i]), "Y": float(self.Y[i]),
                "logdev_M": math.log(self.M[i] / s.M), "logdev_Lp": math.log(self.Lp[i] / s.Lp),
                "logdev_Z": math.log(self.Z[i] / s.Z), "logdev_Y": math.log(self.Y[i] / s.Y),
            })
        return out


@dataclass(frozen=True)
class WelfareReport:
    cev_total: float
    cev_variety: float
    cev_labor: float
    cev_tfp: float

    def to_dict(self) -> dict:
        return {"cev_total": self.cev_total, "cev_variety": self.cev_variety,
                "cev_labor": self.cev_labor, "cev_tfp": self.cev_tfp}


# costs

def subsidized_fixed_cost(levers: PolicyLevers, f0: float, f_t):
    """f_bar = (1 - theta_ss) [f0 + (1 - theta_cyc)(f_t - f0)]."""
    fb = (1.0 - levers.theta_ss) * (f0 + (1.0 - levers.theta_cyc) * (np.asarray(f_t, dtype=float) - f0))
    if np.any(fb <= 0):
        raise NonPositiveCost("subsidised fixed cost must stay positive")
    return float(fb) if np.ndim(fb) == 0 else fb


def npv_fixed_costs(f_bar_path, beta_firm: float, tail: float | None = None) -> np.ndarray:
    """sum_{tau >= 0} beta^tau f_bar_{t+tau} for every t of the path.

    Beyond the path the cost stays at ``tail`` (default: the last entry),
    summed geometrically.
    """
    fb = np.asarray(f_bar_path, dtype=float)
    out = np.empty_like(fb)
    acc = (fb[-1] if tail is None else tail) / (1.0 - beta_firm)
    for t in range(len(fb) - 1, -1, -1):
        acc = fb[t] + beta_firm * acc
        out[t] = acc
    return out


def quant_cutoff(params: ModelParams, dist: EntrantDistribution, npv: float) -> float:
    """Entrant cutoff when the NPV of future fixed costs replaces the static cost.

    FE in NPV form minus the ZPC gives f_e/NPV = int [(z/cut)^(sigma-1) - 1] mu(z) dz.
    """
    return dist.cutoff_for_cost_ratio(params.f_e / npv, params.sigma)


# steady state and transition

def quant_steady_state(params: ModelParams, dist: EntrantDistribution, theta_ss: float = 0.0,
                       f0: float | None = None, mode: Mode | str = Mode.GE) -> EquilibriumState:
    """Stationary distribution (E/delta) mu^E truncated at the cutoff."""
    if not params.delta > 0:
        raise ValueError("a stationary distribution needs delta > 0")
    mode = Mode(mode)
    sig, s1, beta = params.sigma, params.sigma - 1.0, params.beta_firm
    f0 = params.f_c if f0 is None else f0
    fbar = subsidized_fixed_cost(PolicyLevers(theta_ss), f0, f0)
    z = quant_cutoff(params, dist, fbar / (1.0 - beta))
    IE, p, zs = dist.partial_power_moment(z, s1), dist.survival_prob(z), z ** s1
    if mode is Mode.PE:
        # ZPC: I z^(s1) = sigma fbar n I_E
        n = params.market_size_I * zs / (sig * fbar * IE)
    else:
        n = params.labor_endowment_L / (s1 * fbar * IE / zs + p * f0 + params.delta * params.f_e)
    E = params.delta * n
    if not (E > 0 and np.isfinite(E)):
        raise Infeasible(f"steady-state entry {E} is not positive")
    M, Z = n * p, n * IE
    R = params.market_size_I if mode is Mode.PE else sig / s1 * (params.labor_endowment_L - M * f0 - E * params.f_e)
    if R <= 0:
        raise Infeasible("no labor left for production")
    fd = FirmDistribution.from_cohorts(dist, [Cohort(n, z, 1.0)])
    return _state(params, z, E, fd, M, Z, R, Regime.ENTRY, z)


def simulate_transition(params: ModelParams, dist: EntrantDistribution, levers: PolicyLevers,
                        shock: ShockPath, mode: Mode | str = Mode.GE,
                        periods: int | None = None) -> TransitionSeries:
    """Perfect-foresight path from the pre-shock steady state.

    Each period: exogenous death, then entry at the NPV cutoff or, when entry
    would be negative, exit against incumbents alone. Labor clearing uses the
    physical cost f_t and E f_e; firms compare profits with (1 - beta) NPV.
    ``periods`` limits how many periods are solved (NPVs still use the full path).
    """
    mode = Mode(mode)
    beta = params.beta_firm
    f = shock.fixed_costs()
    fe = shock.entry_costs(params.f_e)
    fbar = subsidized_fixed_cost(levers, shock.f0, f)
    tail = subsidized_fixed_cost(levers, shock.f0, shock.f0)
    npv = npv_fixed_costs(fbar, beta, tail)
    n = shock.horizon if periods is None else min(periods, shock.horizon)

    base = params.with_(f_c=shock.f0)
    initial = quant_steady_state(base, dist, levers.theta_ss, shock.f0, mode)
    fd = initial.distribution
    cols = {k: np.empty(n) for k in ("cutoff", "E", "M", "Z", "Lp", "Y")}
    regimes = []
    for t in range(n):
        p_t = base.with_(f_e=float(fe[t]))
        fd = fd.decay(params.delta)
        try:
            z = quant_cutoff(p_t, dist, npv[t])
            st = solve_period(p_t, dist, fd, mode=mode, zpc_cost=(1.0 - beta) * npv[t], entry_cutoff=z,
                              labor_fixed_cost=float(f[t]),
                              labor_entry_cost=float(fe[t]) if mode is Mode.GE else 0.0)
        except ModelError as exc:
            raise NonConvergence(f"period {t}: {exc}", period=t) from exc
        fd = st.distribution
        for k, v in (("cutoff", st.cutoff), ("E", st.E), ("M", st.M), ("Z", st.Z),
                     ("Lp", st.Lp), ("Y", st.Y)):
            cols[k][t] = v
        regimes.append(st.regime.value)
    terminal = quant_steady_state(base, dist, levers.theta_ss, shock.f0, mode)
    return TransitionSeries(t=np.arange(n), f_c=f[:n], f_bar=fbar[:n], f_e=fe[:n], regime=tuple(regimes),
                            initial=initial, terminal=terminal, params=base, **cols)


def impact_exit_share(params: ModelParams, dist: EntrantDistribution, levers: PolicyLevers,
                      shock: ShockPath, mode: Mode | str = Mode.GE) -> float:
    """(M_ss - M_onset)/M_ss: percentage shortfall of firms from the steady state at onset."""
    s = simulate_transition(params, dist, levers, shock, mode, periods=1)
    return 1.0 - s.M[0] / s.initial.M


def calibrate_epsilon(params: ModelParams, dist: EntrantDistribution, theta_ss: float,
                      target_exit_share: float, shock: ShockPath | None = None,
                      mode: Mode | str = Mode.GE, eps_max: float = 1e8) -> float:
    """Shock size giving the target impact exit share with a passive cycle lever."""
    if not 0 <= target_exit_share < 1:
        raise ValueError("target must lie in [0, 1)")
    shock = shock or ShockPath(f0=params.f_c)
    levers = PolicyLevers(theta_ss, 0.0)

    def gap(eps):
        return impact_exit_share(params, dist, levers, shock.with_(epsilon=eps), mode) - target_exit_share

    g0 = gap(0.0)
    if g0 >= 0:
        return 0.0
    hi = max(1e-3, shock.f0 * 0.1)
    while gap(hi) < 0:
        hi *= 2.0
        if hi > eps_max:
            raise TargetUnreachable(f"exit share {target_exit_share} not reached for epsilon <= {eps_max}")
    return optimize.brentq(gap, 0.0, hi, xtol=1e-14, rtol=1e-13, maxiter=200)


# welfare

def _discounted_utility(logs: np.ndarray, terminal_log: float, beta: float) -> float:
    disc = beta ** np.arange(len(logs))
    return float(np.dot(disc, logs) + beta ** len(logs) * terminal_log / (1.0 - beta))


def _cev(log_base, term_base, log_alt, term_alt, beta) -> float:
    du = _discounted_utility(log_alt, term_alt, beta) - _discounted_utility(log_base, term_base, beta)
    return math.expm1((1.0 - beta) * du)


def welfare_cev(base: TransitionSeries, alt: TransitionSeries, beta_planner: float) -> float:
    """Constant consumption change equating log utility of alt and base; terminal steady states continue forever."""
    if base.horizon != alt.horizon:
        raise ValueError("series must share a horizon")
    return _cev(np.log(base.Y), math.log(base.terminal.Y), np.log(alt.Y), math.log(alt.terminal.Y),
                beta_planner)


def _components(s: TransitionSeries):
    sig = s.params.sigma
    qc = 1.0 / (sig - 1.0)
    var = (s.params.q - qc)
    T = s.terminal
    return ((var * np.log(s.M), var * math.log(T.M)),
            (np.log(s.Lp), math.log(T.Lp)),
            (qc * np.log(s.Z), qc * math.log(T.Z)))


def cev_decomposition(base: TransitionSeries, alt: TransitionSeries, params: ModelParams | None = None,
                      beta_planner: float | None = None) -> WelfareReport:
    """Total CEV and its variety, labor and TFP factors; (1+total) is their product."""
    if base.horizon != alt.horizon:
        raise ValueError("series must share a horizon")
    beta = (params or base.params).beta_planner if beta_planner is None else beta_planner
    parts = [_cev(b[0], b[1], a[0], a[1], beta) for b, a in zip(_components(base), _components(alt))]
    total = math.expm1(sum(math.log1p(c) for c in parts))
    return WelfareReport(cev_total=total, cev_variety=parts[0], cev_labor=parts[1], cev_tfp=parts[2])


def steady_state_cev(params: ModelParams, dist: EntrantDistribution, theta_ss: float,
                     mode: Mode | str = Mode.GE) -> float:
    """Permanent output gain of the theta_ss steady state over laissez-faire."""
    y1 = quant_steady_state(params, dist, theta_ss, mode=mode).Y
    y0 = quant_steady_state(params, dist, 0.0, mode=mode).Y
    return y1 / y0 - 1.0


# policy search

THETA_BOUNDS = (-0.99, 0.99)


def _bounded_max(fun, bounds=THETA_BOUNDS) -> float:
    res = optimize.minimize_scalar(lambda x: -fun(x), bounds=bounds, method="bounded",
                                   options={"xatol": 1e-10, "maxiter": 500})
    if not res.success:
        raise NonConvergence("policy line search failed", message=res.message)
    return float(res.x)


def optimal_theta_ss(params: ModelParams, dist: EntrantDistribution, mode: Mode | str = Mode.GE) -> float:
    def obj(th):
        try:
            return math.log(quant_steady_state(params, dist, th, mode=mode).Y)
        except ModelError:
            return -np.inf
    th = _bounded_max(obj)
    return th if obj(th) >= obj(0.0) else 0.0


def optimize_policy(params: ModelParams, dist: EntrantDistribution, shock: ShockPath,
                    mode: PolicyMode | str = PolicyMode.SS_PLUS_CYCLE, theta_ss: float | None = None,
                    sim_mode: Mode | str = Mode.GE) -> PolicyLevers:
    """Sequential Ramsey search: theta_ss on steady-state log output, then theta_cyc on transition utility."""
    mode = PolicyMode(mode)
    th_ss = optimal_theta_ss(params, dist, sim_mode) if theta_ss is None else theta_ss
    if mode is PolicyMode.SS_ONLY:
        return PolicyLevers(th_ss, 0.0)
    beta = params.beta_planner

    def obj(th):
        try:
            s = simulate_transition(params, dist, PolicyLevers(th_ss, th), shock, sim_mode)
        except (ModelError, ValueError):
            return -np.inf
        return _discounted_utility(np.log(s.Y), math.log(s.terminal.Y), beta)

    th_cyc = _bounded_max(obj)
    if obj(th_cyc) < obj(0.0):
        th_cyc = 0.0
    return PolicyLevers(th_ss, th_cyc)


# calibration and the full table

ANNUAL_BETA, ANNUAL_DELTA, ALPHA = 0.864, 0.0336, 0.841


def spanish_calibration(frequency: str = "annual", q: float | None = None, f_e: float = 0.01):
    """(params, dist, shock template) for the Spanish calibration.

    ``annual`` reads the discount and death rates as per-period values;
    ``quarterly`` converts them by the quarter root and keeps alpha per quarter.
    The scale of f_e does not affect log deviations under Pareto.
    """
    sigma, h = 5.4, 1.2
    if frequency == "annual":
        beta, delta = ANNUAL_BETA, ANNUAL_DELTA
    elif frequency == "quarterly":
        beta, delta = ANNUAL_BETA ** 0.25, 1.0 - (1.0 - ANNUAL_DELTA) ** 0.25
    else:
        raise ValueError(f"unknown frequency {frequency!r}")
    params = ModelParams(sigma=sigma, q=0.568 if q is None else q, f_c=1.0, f_e=f_e,
                         labor_endowment_L=1.0, delta=delta, beta_firm=beta,
                         beta_planner=beta / (1.0 - delta))
    dist = pareto_from_tail(h, sigma)
    return params, dist, ShockPath(f0=1.0, alpha=ALPHA)


TARGET_EXIT_SHARE = 0.2044


def reproduce_table5(frequency: str = "annual", q: float | None = None, horizon: int = DEFAULT_HORIZON,
                     target: float = TARGET_EXIT_SHARE) -> dict:
    """Steady-state gain and recession costs under the three policy regimes."""
    params, dist, shock = spanish_calibration(frequency, q)
    shock = shock.with_(horizon=horizon)
    beta = params.beta_planner
    th_ss = optimal_theta_ss(params, dist)

    eps_lf = calibrate_epsilon(params, dist, 0.0, target, shock)
    eps_ss = calibrate_epsilon(params, dist, th_ss, target, shock)
    lf_shock, ss_shock = shock.with_(epsilon=eps_lf), shock.with_(epsilon=eps_ss)
    levers = optimize_policy(params, dist, ss_shock, PolicyMode.SS_PLUS_CYCLE, theta_ss=th_ss)

    def regime(lev, sh):
        flat = simulate_transition(params, dist, PolicyLevers(lev.theta_ss, 0.0), sh.with_(epsilon=0.0))
        rec = simulate_transition(params, dist, lev, sh)
        return rec, cev_decomposition(flat, rec, beta_planner=beta)

    lf, lf_rep = regime(PolicyLevers(0.0, 0.0), lf_shock)
    ss, ss_rep = regime(PolicyLevers(th_ss, 0.0), ss_shock)
    cy, cy_rep = regime(levers, ss_shock)

    years = 25 if frequency == "annual" else 100
    years = min(years, horizon - 1)
    impact = lf.rows()[0]
    return {
        "frequency": frequency,
        "q": params.q,
        "sigma": params.sigma,
        "shape_k": dist.shape_k,
        "beta_firm": params.beta_firm,
        "delta": params.delta,
        "beta_planner": beta,
        "horizon": horizon,
        "theta_ss": th_ss,
        "theta_cyc": levers.theta_cyc,
        "epsilon_laissez_faire": eps_lf,
        "epsilon_ss_policy": eps_ss,
        "steady_state_cev": steady_state_cev(params, dist, th_ss),
        "laissez_faire": lf_rep.to_dict(),
        "ss_policy": ss_rep.to_dict(),
        "ss_plus_cycle": cy_rep.to_dict(),
        "impact_exit_share": {
            "laissez_faire": 1.0 - lf.M[0] / lf.initial.M,
            "ss_policy": 1.0 - ss.M[0] / ss.initial.M,
            "ss_plus_cycle": 1.0 - cy.M[0] / cy.initial.M,
        },
        "laissez_faire_impact": {**{k: impact[k] for k in ("logdev_M", "logdev_Lp", "logdev_Z", "logdev_Y")},
                                 "logdev_TFP": impact["logdev_Z"] / (params.sigma - 1.0)},
        "laissez_faire_logdev_M_25y": math.log(lf.M[years] / lf.initial.M),
    }
