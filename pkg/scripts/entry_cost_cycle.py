"""A temporary rise in the entry cost lowers welfare for any love-of-variety.

Simulates the forward-looking economy with exogenous death under a decaying
entry-cost bump and reports the trough of firm mass and the welfare change.
"""

import numpy as np

from firmcycles import ModelParams, ParetoEntrantDist
from firmcycles.quant import PolicyLevers, ShockPath, simulate_transition, welfare_cev


def main():
    dist = ParetoEntrantDist(1.0, 3.0)
    for q in (0.1, 1.0, 1.5, 3.0):
        params = ModelParams(sigma=2.0, q=q, f_c=1.0, f_e=1 / 16, delta=0.1, beta_firm=0.9, beta_planner=0.9)
        bump = tuple(params.f_e * (1 + 0.5 * 0.8 ** np.arange(40)))
        base = simulate_transition(params, dist, PolicyLevers(), ShockPath(horizon=300))
        s = simulate_transition(params, dist, PolicyLevers(), ShockPath(horizon=300, f_e_path=bump))
        print(f"q={q:<4g} trough M {100 * (s.M.min() / s.initial.M - 1):+.3f}%   "
              f"CEV {100 * welfare_cev(base, s, params.beta_planner):+.3f}%")


if __name__ == "__main__":
    main()
