"""Exit criteria for the simulator, one test per criterion.

Each check records a PASS/FAIL line that ``conftest.py`` prints in the
terminal summary. Tolerances are fixed here and never tuned at run time.
"""
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy import stats

from nonlocal_sim import cli, mechdetect
from nonlocal_sim.config import load_config
from nonlocal_sim.experiment import (
    ExperimentConfig,
    Model,
    beam_power,
    binomial_half,
    run_campaign,
    run_rng,
    run_samples,
    with_overrides,
)
from nonlocal_sim.polarization import CIRCULAR_BASIS, bell_state, measure_party
from nonlocal_sim.relativity import (
    SPEED_OF_LIGHT as C,
    ObserverFrame,
    SpacetimeEvent,
    boost,
    interval,
    time_order_delta,
    vli_threshold,
)

RESULTS: dict[str, tuple[bool, str]] = {}

# independent arithmetic oracles (exact SI h, c)
H_PLANCK = 6.62607015e-34
HBAR = H_PLANCK / (2 * math.pi)
I_ORACLE = (math.pi / 2) * 3000 * 5.5e-6 * (5e-5) ** 4
OMEGA_ORACLE = 4 * HBAR * 1e6 * 1e4 / I_ORACLE
THETA_ORACLE = OMEGA_ORACLE * 300 * 180 / math.pi
POWER_ORACLE = 1e6 * 1e12 * H_PLANCK * C / 1e-6
THRESHOLD_ORACLE = C**2 * 1e-12 / 3e4


def check(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = (bool(ok), detail)
    assert ok, f"criterion {key}: {detail}"


def rel(a, b):
    return abs(a - b) / abs(b)


def test_01_moment_of_inertia():
    plate = mechdetect.WavePlateSpec(rho=3000.0, D=5.5e-6, r=50e-6)
    i_m = mechdetect.moment_of_inertia(plate)
    check("1", rel(i_m, I_ORACLE) < 0.01 and rel(i_m, 1.62e-19) < 0.01,
          f"I_m = {i_m:.4e} kg m^2 (oracle {I_ORACLE:.4e}, tol 1%)")


def test_02_signal_magnitude():
    w = mechdetect.omega_p(1e6, 1e4, mechdetect.moment_of_inertia(mechdetect.WavePlateSpec()))
    check("2", rel(w, OMEGA_ORACLE) < 1e-9 and rel(w, 2.60e-5) < 0.01 and rel(w, 2.5e-5) < 0.10,
          f"omega_p = {w:.4e} rad/s (oracle {OMEGA_ORACLE:.4e}; {100 * rel(w, 2.5e-5):.1f}% from 2.5e-5, tol 10%)")


def test_03_rotation_angle():
    w = mechdetect.omega_p(1e6, 1e4, mechdetect.moment_of_inertia(mechdetect.WavePlateSpec()))
    theta = mechdetect.rotation_angle(w, 300.0)
    check("3", rel(theta, THETA_ORACLE) < 1e-9 and abs(theta - 0.447) < 1e-3 and rel(theta, 0.4) < 0.15,
          f"theta = {theta:.4f} deg ({100 * rel(theta, 0.4):.1f}% from 0.4, tol 15%)")


def test_04_beam_power():
    p = beam_power(1e6, 1e12, 1e-6)
    check("4", rel(p, POWER_ORACLE) < 0.01 and abs(p - 0.1986) < 1e-4 and rel(p, 0.2) < 0.01,
          f"power = {p:.4f} W (oracle {POWER_ORACLE:.4f}, tol 1%)")


E1 = SpacetimeEvent(0.0, 0.0, 1)
E3 = SpacetimeEvent(3e4, 1e-12, 3)


def test_05a_vli_threshold_vs_oracle():
    thr = vli_threshold(E1, E3)
    check("5.a", rel(thr, THRESHOLD_ORACLE) < 1e-3,
          f"threshold = {thr:.5f} m/s vs c^2 dt/dx = {THRESHOLD_ORACLE:.5f} (tol 0.1%)")


def test_05b_vli_threshold_vs_paper_value():
    # Stated criterion: 3.0 m/s within 0.1%. With c = 299792458 m/s the
    # threshold is 2.99585 m/s, 0.138% low; the paper's 3 m/s uses c = 3e8.
    thr = vli_threshold(E1, E3)
    check("5.b", rel(thr, 3.0) < 1e-3,
          f"threshold = {thr:.5f} m/s vs 3.0 m/s: {100 * rel(thr, 3.0):.3f}% off (tol 0.1%)")


def test_05c_frames_flip_across_threshold(capsys):
    code = cli.main(["frames", "--config", "paper.cfg", "--velocities", "10", "-10"])
    out = capsys.readouterr().out
    rows = [ln.split(",") for ln in out.splitlines() if ln and not ln.startswith("#")][1:]
    verdicts = [r[4] for r in rows]
    check("5.c", code == 0 and verdicts == ["0", "+-4"],
          f"v=+10 -> dl={verdicts[0]} (David), v=-10 -> dl={verdicts[1]} (Frank)")


def test_06_collapse_anticorrelation():
    rng = run_rng(6, 0)
    psi = bell_state()
    worst = 0.0
    for u in rng.random(10_000):
        out = measure_party(psi, 1, CIRCULAR_BASIS, float(u))
        worst = max(worst, abs(out.outcome_state.overlap(out.collapsed_partner)))
    check("6", worst < 1e-12, f"max |<alice|partner>| = {worst:.2e} over 10000 draws (tol 1e-12)")


def test_07_binomial_oracle_equivalence():
    # exhaustive enumeration of all 2^10 outcome strings
    strings = np.arange(2**10)
    ones = np.array([bin(s).count("1") for s in strings])
    pmf = np.bincount(ones, minlength=11) / 2**10
    n_samples = 10**6
    k = binomial_half(10, run_rng(7, 0), size=n_samples)
    observed = np.bincount(k, minlength=11)
    p = stats.chisquare(observed, pmf * n_samples).pvalue
    check("7", p > 0.01, f"chi-square p = {p:.3f} over 1e6 samples at N=10 (need > 0.01)")


def test_08_shot_noise_scaling():
    cfg = with_overrides(ExperimentConfig(), repetitions=10_000)
    n = cfg.n_pairs
    dn = np.array([s.delta_N for s in run_samples(cfg)], dtype=float)
    var_err = rel(dn.var(ddof=1), n)
    mean_abs_err = rel(np.abs(dn).mean(), math.sqrt(2 * n / math.pi))
    check("8", n == 10**8 and var_err < 0.10 and mean_abs_err < 0.05,
          f"N={n}: var(dN)/N off by {100 * var_err:.2f}% (tol 10%), "
          f"mean|dN| off half-normal by {100 * mean_abs_err:.2f}% (tol 5%)")


def test_09_correlation_witness():
    ideal = run_campaign(ExperimentConfig()).correlation.c_p
    null = run_campaign(
        ExperimentConfig(model=Model.NO_SIGNALING_NULL, sigma_omega=1e-5, repetitions=1000)
    ).correlation.c_p
    check("9", abs(ideal - 1) < 1e-9 and abs(null) < 0.05,
          f"C_p nonlocal = {ideal:.12f} (tol 1e-9), C_p null = {null:+.4f} (tol |.| < 0.05)")


def test_10_relativity_properties():
    rng = np.random.default_rng(10)
    n = 10_000
    worst_interval = worst_inverse = 0.0
    timelike_flips = spacelike_misses = 0
    for _ in range(n):
        x1, x3 = rng.uniform(-1e5, 1e5, 2)
        t1, t3 = rng.uniform(-1e-3, 1e-3, 2)
        beta = rng.uniform(-0.99, 0.99)
        e1, e3 = SpacetimeEvent(x1, t1), SpacetimeEvent(x3, t3)
        f = ObserverFrame(beta * C)
        scale = (C * abs(t1) + abs(x1) + C * abs(t3) + abs(x3)) ** 2
        worst_interval = max(worst_interval, abs(interval(boost(e1, f), boost(e3, f)) - interval(e1, e3)) / scale)
        back = boost(boost(e1, f), ObserverFrame(-beta * C))
        worst_inverse = max(
            worst_inverse,
            abs(back.x - x1) / (abs(x1) + C * abs(t1)),
            abs(back.t - t1) / (abs(t1) + abs(x1) / C),
        )

        # timelike pair
        dt = rng.uniform(1e-9, 1e-3) * rng.choice([-1, 1])
        dx = rng.uniform(-0.999, 0.999) * C * abs(dt)
        a, b = SpacetimeEvent(0.0, 0.0), SpacetimeEvent(dx, dt)
        for v in (0.99 * C, -0.99 * C):
            if np.sign(time_order_delta(a, b, ObserverFrame(v))) != np.sign(dt):
                timelike_flips += 1

        # spacelike pair with reversal speed below 0.9c
        dx = rng.uniform(1.0, 1e7) * rng.choice([-1, 1])
        dt = rng.uniform(0.0, 0.9) * abs(dx) / C * rng.choice([-1, 1])
        if dt == 0:
            continue
        a, b = SpacetimeEvent(0.0, 0.0), SpacetimeEvent(dx, dt)
        thr = vli_threshold(a, b)
        orient = np.sign(dx) * np.sign(dt)
        below = time_order_delta(a, b, ObserverFrame(orient * thr * (1 - 1e-6)))
        above = time_order_delta(a, b, ObserverFrame(orient * thr * (1 + 1e-6)))
        if not (np.sign(below) == np.sign(dt) and np.sign(above) == -np.sign(dt)):
            spacelike_misses += 1

    ok = worst_interval < 1e-9 and worst_inverse < 1e-12 and timelike_flips == 0 and spacelike_misses == 0
    check("10", ok,
          f"interval err {worst_interval:.1e} (tol 1e-9), inverse err {worst_inverse:.1e} (tol 1e-12), "
          f"timelike flips {timelike_flips}, threshold misses {spacelike_misses} over {n} cases each")


def test_11_determinism_parallel():
    cmd = [sys.executable, "-m", "nonlocal_sim", "run", "--config", "paper.cfg", "--seed", "42"]
    first = subprocess.run(cmd + ["--workers", "2"], capture_output=True, check=False)
    second = subprocess.run(cmd + ["--workers", "2"], capture_output=True, check=False)
    serial = subprocess.run(cmd + ["--workers", "1"], capture_output=True, check=False)
    ok = (
        first.returncode == second.returncode == serial.returncode == 0
        and first.stdout == second.stdout == serial.stdout
        and len(first.stdout) > 0
    )
    check("11", ok, f"two parallel runs and one serial run byte-identical ({len(first.stdout)} bytes)")


def test_paper_cfg_is_the_paper_parameter_set():
    # all criteria above run from the shipped config without edits
    assert load_config("paper.cfg").experiment == ExperimentConfig()
    assert pytest.approx(1e4) == math.sqrt(ExperimentConfig().n_pairs)
