"""Print the feasibility numbers of the proposed experiment next to the rounded quoted values."""
from nonlocal_sim import mechdetect
from nonlocal_sim.experiment import ExperimentConfig, beam_power, expected_fluctuation
from nonlocal_sim.relativity import vli_threshold


def main():
    cfg = ExperimentConfig()
    i_m = mechdetect.moment_of_inertia(cfg.plate)
    dn = expected_fluctuation(cfg.t_run, cfg.N_gamma)
    w = mechdetect.omega_p(cfg.G, dn, i_m)
    rows = [
        ("half-wave thickness [m]", mechdetect.min_thickness(cfg.lam, cfg.plate.delta_n), 5.5e-6),
        ("moment of inertia [kg m^2]", i_m, None),
        ("typical imbalance sqrt(tN)", dn, None),
        ("beam power [W]", beam_power(cfg.G, cfg.N_gamma, cfg.lam), 0.2),
        ("omega_p [rad/s]", w, 2.5e-5),
        ("theta after tau [deg]", mechdetect.rotation_angle(w, cfg.tau), 0.4),
        ("light travel in t_run [m]", mechdetect.CONSTANTS.c * cfg.t_run, 3e4),
        ("VLI threshold [m/s]", vli_threshold(*cfg.events()), 3.0),
        ("kick per photon per plate [rad/s]", mechdetect.kick_angular_velocity(i_m), None),
        ("photons on detector per run", cfg.G * cfg.n_pairs, None),
    ]
    width = max(len(r[0]) for r in rows)
    for name, value, quoted in rows:
        extra = ""
        if quoted is not None:
            extra = f"   quoted ~{quoted:g} ({100 * (value / quoted - 1):+.1f}%)"
        print(f"{name:<{width}}  {value:.4e}{extra}")


if __name__ == "__main__":
    main()
