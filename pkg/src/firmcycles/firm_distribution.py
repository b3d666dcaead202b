"""Active-firm density as a list of entrant cohorts.

Every density the model produces is a finite sum of scaled truncations of
the entrant law, so a cohort is just (trial mass, lower cutoff, cumulative
survival factor) and all aggregates are closed-form sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import EntrantDistribution
from .errors import EmptyDistribution, NegativeMass

COALESCE_RTOL = 1e-12


@dataclass(frozen=True)
class Cohort:
    trial_mass: float
    cutoff: float
    survival_factor: float = 1.0

    def to_dict(self) -> dict:
        return {"trial_mass": self.trial_mass, "cutoff": self.cutoff,
                "survival_factor": self.survival_factor}

    @classmethod
    def from_dict(cls, d: dict) -> "Cohort":
        return cls(float(d["trial_mass"]), float(d["cutoff"]), float(d["survival_factor"]))


class FirmDistribution:
    """Immutable cohort list. Updates return new objects."""

    __slots__ = ("dist", "_mass", "_cut", "_surv")

    def __init__(self, dist: EntrantDistribution, trial_mass=(), cutoff=(), survival=()):
        self.dist = dist
        self._mass = np.asarray(trial_mass, dtype=float).reshape(-1)
        self._cut = np.maximum(np.asarray(cutoff, dtype=float).reshape(-1), dist.z_min)
        self._surv = np.asarray(survival, dtype=float).reshape(-1)
        if not (len(self._mass) == len(self._cut) == len(self._surv)):
            raise ValueError("cohort arrays must have equal length")
        if np.any(self._mass < 0):
            raise NegativeMass("trial mass must be non-negative")
        for arr in (self._mass, self._cut, self._surv):
            arr.setflags(write=False)

    @classmethod
    def empty(cls, dist: EntrantDistribution) -> "FirmDistribution":
        return cls(dist)

    @classmethod
    def from_cohorts(cls, dist: EntrantDistribution, cohorts) -> "FirmDistribution":
        cohorts = list(cohorts)
        return cls(dist, [c.trial_mass for c in cohorts], [c.cutoff for c in cohorts],
                   [c.survival_factor for c in cohorts])

    @property
    def cohorts(self) -> tuple[Cohort, ...]:
        return tuple(Cohort(float(m), float(c), float(s))
                     for m, c, s in zip(self._mass, self._cut, self._surv))

    def __len__(self):
        return len(self._mass)

    def __repr__(self):
        return f"FirmDistribution({len(self)} cohorts, M={self.mass():.6g})"

    @property
    def weights(self) -> np.ndarray:
        """trial_mass * survival_factor per cohort."""
        return self._mass * self._surv

    @property
    def cutoffs(self) -> np.ndarray:
        return self._cut

    # aggregates

    def mass(self, floor: float | None = None) -> float:
        """Active mass; with floor, the mass that would survive truncation at floor."""
        if not len(self):
            return 0.0
        cut = self._cut if floor is None else np.maximum(self._cut, floor)
        return float(np.sum(self.weights * self.dist.survival_prob(cut)))

    def market_intensity(self, sigma: float, floor: float | None = None) -> float:
        if not len(self):
            return 0.0
        cut = self._cut if floor is None else np.maximum(self._cut, floor)
        return float(np.sum(self.weights * self.dist.partial_power_moment(cut, sigma - 1.0)))

    def avg_productivity(self, sigma: float) -> float:
        m = self.mass()
        if m <= 0:
            raise EmptyDistribution("average productivity of an empty distribution")
        return (self.market_intensity(sigma) / m) ** (1.0 / (sigma - 1.0))

    # updates

    def truncate(self, new_cutoff: float) -> "FirmDistribution":
        if not len(self) or new_cutoff <= self._cut.min():
            return self
        out = FirmDistribution(self.dist, self._mass, np.maximum(self._cut, new_cutoff), self._surv)
        return out._coalesce()

    def decay(self, delta: float) -> "FirmDistribution":
        if not 0 <= delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if delta == 0 or not len(self):
            return self
        return FirmDistribution(self.dist, self._mass, self._cut, self._surv * (1.0 - delta))

    def merge(self, entrant: Cohort) -> "FirmDistribution":
        if entrant.trial_mass < 0:
            raise NegativeMass(f"entrant trial mass {entrant.trial_mass} < 0")
        if entrant.trial_mass == 0:
            return self
        out = FirmDistribution(
            self.dist, np.append(self._mass, entrant.trial_mass),
            np.append(self._cut, entrant.cutoff), np.append(self._surv, entrant.survival_factor))
        return out._coalesce()

    def _coalesce(self) -> "FirmDistribution":
        """Fold runs of adjacent cohorts with equal cutoffs into one cohort."""
        n = len(self)
        if n < 2:
            return self
        cut = self._cut
        same = np.abs(np.diff(cut)) <= COALESCE_RTOL * np.maximum(np.abs(cut[1:]), np.abs(cut[:-1]))
        if not same.any():
            return self
        group = np.concatenate(([0], np.cumsum(~same)))
        first = np.concatenate(([True], ~same))
        single = np.bincount(group) == 1
        # a merged run keeps its first cutoff; survival is folded into the trial mass
        w = np.bincount(group, weights=self.weights)
        mass = np.where(single, self._mass[first], w)
        surv = np.where(single, self._surv[first], 1.0)
        return FirmDistribution(self.dist, mass, cut[first], surv)

    def to_json_list(self) -> list[dict]:
        return [c.to_dict() for c in self.cohorts]


def mass(fd: FirmDistribution) -> float:
    return fd.mass()


def market_intensity(fd: FirmDistribution, sigma: float) -> float:
    return fd.market_intensity(sigma)


def avg_productivity(fd: FirmDistribution, sigma: float) -> float:
    return fd.avg_productivity(sigma)


def truncate(fd: FirmDistribution, new_cutoff: float) -> FirmDistribution:
    return fd.truncate(new_cutoff)


def decay(fd: FirmDistribution, delta: float) -> FirmDistribution:
    return fd.decay(delta)


def merge(fd: FirmDistribution, entrant: Cohort) -> FirmDistribution:
    return fd.merge(entrant)
