"""C_p as a function of instrument noise, for both detector models.

Writes a CSV (stdout by default) with the Monte Carlo C_p and the
closed-form expectation 1/sqrt(1 + (sigma/signal)^2) for the collapse model.
"""
import argparse
import math
import sys

import numpy as np

from nonlocal_sim import mechdetect
from nonlocal_sim.experiment import ExperimentConfig, Model, run_campaign, with_overrides


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repetitions", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    base = ExperimentConfig(repetitions=args.repetitions, seed=args.seed)
    signal = mechdetect.omega_p(base.G, math.sqrt(base.n_pairs), base.moment_of_inertia)
    out = sys.stdout
    out.write("noise_to_signal,sigma_omega_rad_per_s,c_p_collapse,c_p_expected,c_p_null\n")
    for ratio in np.geomspace(1e-3, 1e2, args.points):
        cfg = with_overrides(base, sigma_omega=float(ratio * signal))
        collapse = run_campaign(cfg, workers=args.workers).correlation.c_p
        null = run_campaign(with_overrides(cfg, model=Model.NO_SIGNALING_NULL), workers=args.workers).correlation.c_p
        expected = 1 / math.sqrt(1 + ratio**2)
        out.write(f"{ratio:.4e},{cfg.sigma_omega:.4e},{collapse:.6f},{expected:.6f},{null:.6f}\n")


if __name__ == "__main__":
    main()
