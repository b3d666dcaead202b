"""Steady-state gains and recession costs for the Spanish calibration.

Runs both period conventions and both love-of-variety values, prints a
compact table and writes one JSON file per run.
"""

import argparse
import time
from pathlib import Path

from firmcycles.emit import to_json, write_text
from firmcycles.quant import DEFAULT_HORIZON, reproduce_table5


def pct(x):
    return f"{100 * x:+7.2f}%"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/table5")
    ap.add_argument("--frequency", nargs="+", default=["quarterly", "annual"])
    ap.add_argument("--q", nargs="+", type=float, default=[0.568, 0.3])
    ap.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    args = ap.parse_args()
    for freq in args.frequency:
        for q in args.q:
            t0 = time.perf_counter()
            r = reproduce_table5(freq, q=q, horizon=args.horizon)
            path = write_text(Path(args.out) / f"table5_{freq}_q{q:g}.json", to_json(r))
            print(f"\n{freq}, q={q:g}  theta_ss={r['theta_ss']:.4f} theta_cyc={r['theta_cyc']:.4f}  "
                  f"({time.perf_counter() - t0:.1f}s, {path})")
            print(f"  steady-state policy gain        {pct(r['steady_state_cev'])}")
            for key, name in (("laissez_faire", "recession, laissez-faire"),
                              ("ss_policy", "recession, ss policy"),
                              ("ss_plus_cycle", "recession, ss + cycle policy")):
                d = r[key]
                print(f"  {name:31s} {pct(d['cev_total'])}   variety {pct(d['cev_variety'])}  "
                      f"labor {pct(d['cev_labor'])}  tfp {pct(d['cev_tfp'])}")


if __name__ == "__main__":
    main()
