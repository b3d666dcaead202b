"""Heterogeneous-firm entry and exit over fixed-cost cycles with love-of-variety."""

from .distributions import EntrantDistribution, ModelParams, ParetoEntrantDist, ScaledDistribution, pareto_from_tail
from .equilibrium import EquilibriumState, Mode, Regime, solve_ge_steady, solve_pe
from .firm_distribution import Cohort, FirmDistribution

__version__ = "0.1.0"

__all__ = [
    "Cohort", "EntrantDistribution", "EquilibriumState", "FirmDistribution", "Mode", "ModelParams",
    "ParetoEntrantDist", "Regime", "ScaledDistribution", "pareto_from_tail", "solve_ge_steady", "solve_pe",
]
