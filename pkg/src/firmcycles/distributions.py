"""Model parameters and the entrant productivity law.

The solvers only touch the entrant law through four quantities: the
survival probability P(z >= a), the partial power moment
int_a^inf z^p mu(z) dz, the conditional relative share
E[(z/a)^(sigma-1) | z >= a], and (for quadrature checks) the density.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .errors import DivergentMoment, NoRoot


@dataclass(frozen=True)
class ModelParams:
    sigma: float
    q: float
    f_c: float
    f_e: float
    market_size_I: float = 1.0
    labor_endowment_L: float = 1.0
    delta: float = 0.0
    beta_firm: float = 0.96
    beta_planner: float = 0.96

    def __post_init__(self):
        if not self.sigma > 1:
            raise ValueError(f"sigma must exceed 1, got {self.sigma}")
        if not self.q >= 0:
            raise ValueError(f"q must be non-negative, got {self.q}")
        if not (self.f_c > 0 and self.f_e > 0):
            raise ValueError("fixed and entry costs must be positive")
        if not (self.market_size_I > 0 and self.labor_endowment_L > 0):
            raise ValueError("market size and labor endowment must be positive")
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        for name in ("beta_firm", "beta_planner"):
            b = getattr(self, name)
            if not 0 < b < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {b}")

    @property
    def q_ces(self) -> float:
        return 1.0 / (self.sigma - 1.0)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


class EntrantDistribution(ABC):
    """Entrant productivity law mu^E on [z_min, inf)."""

    z_min: float

    @abstractmethod
    def survival_prob(self, a):
        ...

    @abstractmethod
    def partial_power_moment(self, a, p: float):
        ...

    @abstractmethod
    def density(self, z):
        ...

    def conditional_relative_share(self, cutoff, sigma: float):
        a = np.maximum(cutoff, self.z_min)
        return self.partial_power_moment(a, sigma - 1.0) / (
            self.survival_prob(a) * a ** (sigma - 1.0))

    def entry_gap(self, cutoff: float, sigma: float) -> float:
        """int_cutoff [(z/cutoff)^(sigma-1) - 1] mu(z) dz, the right side of the cutoff equation."""
        a = max(cutoff, self.z_min)
        return (self.partial_power_moment(a, sigma - 1.0) / a ** (sigma - 1.0)
                - self.survival_prob(a))

    def cutoff_for_cost_ratio(self, ratio: float, sigma: float) -> float:
        """Cutoff z solving entry_gap(z) = ratio, where ratio = f_e / f_c.

        Generic laws bracket and root-find; entry_gap is decreasing in z.
        """
        lo = self.z_min
        g_lo = self.entry_gap(lo, sigma) - ratio
        if g_lo <= 0:
            raise NoRoot(f"cost ratio {ratio} exceeds entry gap {g_lo + ratio} at z_min")
        hi = 2.0 * lo
        for _ in range(200):
            if self.entry_gap(hi, sigma) - ratio < 0:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise NoRoot("could not bracket the entry cutoff")
        return optimize.brentq(lambda z: self.entry_gap(z, sigma) - ratio, lo, hi,
                               xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)


@dataclass(frozen=True)
class ParetoEntrantDist(EntrantDistribution):
    z_min: float = 1.0
    shape_k: float = 3.0

    def __post_init__(self):
        if not (self.z_min > 0 and self.shape_k > 0):
            raise ValueError("Pareto location and shape must be positive")

    def check_pairing(self, sigma: float) -> None:
        if not self.shape_k > sigma - 1.0:
            raise DivergentMoment(
                f"shape_k={self.shape_k} must exceed sigma-1={sigma - 1.0}")

    def survival_prob(self, a):
        a = np.maximum(a, self.z_min)
        out = (self.z_min / a) ** self.shape_k
        return float(out) if np.ndim(out) == 0 else out

    def partial_power_moment(self, a, p: float):
        k = self.shape_k
        if p >= k:
            raise DivergentMoment(f"moment of order {p} diverges for shape {k}")
        a = np.maximum(a, self.z_min)
        # written as z_min^p (z_min/a)^(k-p) to stay finite for large k
        out = k / (k - p) * self.z_min ** p * (self.z_min / a) ** (k - p)
        return float(out) if np.ndim(out) == 0 else out

    def density(self, z):
        z = np.asarray(z, dtype=float)
        k = self.shape_k
        out = np.where(z >= self.z_min, k * self.z_min ** k / np.maximum(z, self.z_min) ** (k + 1), 0.0)
        return float(out) if out.ndim == 0 else out

    def conditional_relative_share(self, cutoff, sigma: float):
        self.check_pairing(sigma)
        share = self.shape_k / (self.shape_k - (sigma - 1.0))
        if np.ndim(cutoff):
            return np.full(np.shape(cutoff), share)
        return share

    def cutoff_for_cost_ratio(self, ratio: float, sigma: float) -> float:
        self.check_pairing(sigma)
        k = self.shape_k
        base = (sigma - 1.0) / (k - (sigma - 1.0)) / ratio
        if base <= 1.0:
            return self.z_min
        return self.z_min * base ** (1.0 / k)


@dataclass(frozen=True)
class ScaledDistribution(EntrantDistribution):
    """Law of A z when z follows ``base``; models an aggregate TFP shifter."""

    base: EntrantDistribution
    factor: float

    @property
    def z_min(self) -> float:
        return self.base.z_min * self.factor

    def survival_prob(self, a):
        return self.base.survival_prob(np.asarray(a) / self.factor if np.ndim(a) else a / self.factor)

    def partial_power_moment(self, a, p: float):
        x = np.asarray(a) / self.factor if np.ndim(a) else a / self.factor
        return self.factor ** p * self.base.partial_power_moment(x, p)

    def density(self, z):
        return self.base.density(np.asarray(z) / self.factor) / self.factor

    def cutoff_for_cost_ratio(self, ratio: float, sigma: float) -> float:
        return self.factor * self.base.cutoff_for_cost_ratio(ratio, sigma)


def pareto_from_tail(h: float, sigma: float, z_min: float = 1.0) -> ParetoEntrantDist:
    """Pareto law with shape k = h (sigma - 1), the tail-parameter pairing."""
    return ParetoEntrantDist(z_min=z_min, shape_k=h * (sigma - 1.0))


def survival_prob(dist: EntrantDistribution, a):
    return dist.survival_prob(a)


def partial_power_moment(dist: EntrantDistribution, a, p: float):
    return dist.partial_power_moment(a, p)


def conditional_relative_share(dist: EntrantDistribution, cutoff, sigma: float):
    return dist.conditional_relative_share(cutoff, sigma)


def is_share_nonincreasing(dist: EntrantDistribution, sigma: float,
                           upper: float | None = None, n: int = 64) -> bool:
    """Check that the conditional relative share does not rise with the cutoff."""
    upper = upper if upper is not None else 50.0 * dist.z_min
    grid = np.geomspace(dist.z_min, upper, n)
    shares = np.array([dist.conditional_relative_share(float(a), sigma) for a in grid])
    return bool(np.all(np.diff(shares) <= 1e-12 * np.abs(shares[1:])))


__all__ = [
    "ModelParams", "EntrantDistribution", "ParetoEntrantDist", "ScaledDistribution", "pareto_from_tail",
    "survival_prob", "partial_power_moment", "conditional_relative_share",
    "is_share_nonincreasing",
]
