"""Scan observer velocity and tabulate t'_3 - t'_1 and Charlie's expected output.

Uses the geometry of the given config (default paper.cfg); the sign change
sits at the reversal speed c^2 |t3 - t1| / |x3 - x1|.
"""
import argparse

import numpy as np

from nonlocal_sim.config import load_config
from nonlocal_sim.relativity import ObserverFrame, classify_outcome, vli_threshold


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None)
    ap.add_argument("--vmax", type=float, default=10.0, help="scan range in m/s")
    ap.add_argument("--points", type=int, default=41)
    args = ap.parse_args(argv)

    cfg = load_config(args.config).experiment
    e1, e3 = cfg.events()
    print(f"# vli_threshold_m_per_s={vli_threshold(e1, e3):.9e}")
    print("v_m_per_s,t3p_minus_t1p_s,expected_delta_l_hbar")
    for v in np.linspace(-args.vmax, args.vmax, args.points):
        verdict = classify_outcome(e1, e3, ObserverFrame(float(v)))
        print(f"{v:.6e},{verdict.t_prime_delta:.9e},{verdict.delta_l_label}")


if __name__ == "__main__":
    main()
