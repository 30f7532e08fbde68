"""Monte Carlo engine for the repeated source-on / free-rotation procedure.

Each repetition: the source runs for ``t_run`` and emits N = round(t_run *
N_gamma) pairs; Alice projects her photons onto {L, R}; Charlie's partners
are amplified by G and cross his detector; the plates then rotate freely
for ``tau``. Two models for what Charlie's detector registers:

* ``nonlocal_collapse`` -- Charlie's photons are already in the CP state
  opposite to Alice's outcome, so the plates pick up 4 hbar G dN.
* ``no_signaling_null`` -- Charlie's photons carry no determinate angular
  momentum; the detector output is instrument noise only.

Randomness: repetition ``i`` draws from its own counter-based Philox stream
keyed by a SeedSequence hash of ``(seed, i)``, so any subset of repetitions
can be computed in any order, on any worker, with identical results.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from . import mechdetect
from .mechdetect import CONSTANTS, WavePlateSpec
from .relativity import SpacetimeEvent, vli_threshold

EXACT_BINOMIAL_LIMIT = 10**6
_MAX_PAIRS = 2**63 - 1


class ConfigurationError(ValueError):
    pass


class UndefinedCorrelationError(ArithmeticError):
    pass


class Model(str, enum.Enum):
    NONLOCAL_COLLAPSE = "nonlocal_collapse"
    NO_SIGNALING_NULL = "no_signaling_null"


@dataclass(frozen=True)
class ExperimentConfig:
    """All inputs of one campaign. SI units throughout."""

    N_gamma: float = 1e12
    G: float = 1e6
    t_run: float = 1e-4
    tau: float = 300.0
    lam: float = 1e-6
    plate: WavePlateSpec = field(default_factory=WavePlateSpec)
    x1: float = 0.0
    x3: float = 3.0e4
    # |t3 - t1| in the lab frame; Alice's detection comes first
    collapse_delay: float = 1e-12
    model: Model = Model.NONLOCAL_COLLAPSE
    sigma_omega: float = 0.0
    seed: int = 42
    repetitions: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        for name in ("N_gamma", "t_run", "tau", "lam"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.G) and self.G >= 1):
            raise ConfigurationError(f"amplifier gain G must be >= 1, got {self.G!r}")
        if not (math.isfinite(self.sigma_omega) and self.sigma_omega >= 0):
            raise ConfigurationError(f"sigma_omega must be >= 0, got {self.sigma_omega!r}")
        if not (math.isfinite(self.collapse_delay) and self.collapse_delay >= 0):
            raise ConfigurationError(f"collapse_delay must be >= 0, got {self.collapse_delay!r}")
        if not (math.isfinite(self.x1) and math.isfinite(self.x3)):
            raise ConfigurationError("detector positions must be finite")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if isinstance(self.repetitions, bool) or not isinstance(self.repetitions, int) or self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be an integer >= 1, got {self.repetitions!r}")
        if self.t_run * self.N_gamma >= _MAX_PAIRS:
            raise ConfigurationError(
                f"t_run * N_gamma = {self.t_run * self.N_gamma:.3e} pairs overflows a 64-bit count"
            )

    @property
    def n_pairs(self) -> int:
        return int(round(self.t_run * self.N_gamma))

    @property
    def moment_of_inertia(self) -> float:
        return mechdetect.moment_of_inertia(self.plate)

    def events(self) -> tuple[SpacetimeEvent, SpacetimeEvent]:
        """Lab-frame detection events for Alice (t = 0) and Charlie."""
        return SpacetimeEvent(self.x1, 0.0, 1), SpacetimeEvent(self.x3, self.collapse_delay, 3)


@dataclass(frozen=True)
class RunSample:
    run_index: int
    n_L: int
    n_R: int
    delta_N: int
    omega_signal: float
    omega_noise: float
    omega_p: float
    theta: float  # degrees


@dataclass(frozen=True)
class CorrelationResult:
    c_p: float
    n_runs: int


@dataclass(frozen=True)
class CampaignSummary:
    n_runs: int
    n_pairs: int
    c_p: float
    mean_abs_omega_p: float
    mean_theta_deg: float
    mean_abs_theta_deg: float
    nominal_delta_N: float
    nominal_omega_p: float
    nominal_theta_deg: float
    beam_power_W: float
    moment_of_inertia: float
    vli_threshold: float


@dataclass(frozen=True)
class CampaignResult:
    config: ExperimentConfig
    samples: list[RunSample]
    correlation: CorrelationResult
    summary: CampaignSummary


def expected_fluctuation(t_run: float, N_gamma: float) -> float:
    """Typical L/R imbalance sqrt(t N_gamma)."""
    if not (t_run > 0 and N_gamma > 0):
        raise ValueError("t_run and N_gamma must be positive")
    return math.sqrt(t_run * N_gamma)


def beam_power(G: float, N_gamma: float, lam: float) -> float:
    """Optical power G N_gamma h c / lambda entering Charlie's detector, W."""
    if not (G > 0 and N_gamma > 0 and lam > 0):
        raise ValueError("G, N_gamma and lambda must be positive")
    return G * N_gamma * CONSTANTS.h * CONSTANTS.c / lam


def run_rng(seed: int, run_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(seed, spawn_key=(run_index,))
    return np.random.Generator(np.random.Philox(seq))


def binomial_half(n: int, rng: np.random.Generator, size=None):
    """Number of L outcomes among `n` fair CP measurements.

    Exact inverse-CDF sampling up to EXACT_BINOMIAL_LIMIT; above it the
    rounded Gaussian n/2 + sqrt(n/4) z, clipped to [0, n]. The mismatch at
    the switch is quantified by :func:`gaussian_switch_error`.
    """
    if n <= EXACT_BINOMIAL_LIMIT:
        u = rng.random(size)
        k = np.maximum(stats.binom.ppf(u, n, 0.5), 0)
    else:
        z = rng.standard_normal(size)
        k = np.clip(np.rint(0.5 * n + math.sqrt(0.25 * n) * z), 0, n)
    if size is None:
        return int(k)
    return k.astype(np.int64)


def gaussian_switch_error(n: int = EXACT_BINOMIAL_LIMIT) -> float:
    """Kolmogorov-Smirnov distance between Binomial(n, 1/2) and its rounded Gaussian."""
    sd = math.sqrt(0.25 * n)
    lo = max(0, int(0.5 * n - 12 * sd))
    hi = min(n, int(0.5 * n + 12 * sd))
    k = np.arange(lo, hi + 1)
    exact = stats.binom.cdf(k, n, 0.5)
    approx = stats.norm.cdf((k + 0.5 - 0.5 * n) / sd)
    return float(np.max(np.abs(exact - approx)))


Sampler = Callable[..., int]


def sample_run(config: ExperimentConfig, run_index: int, sampler: Sampler = binomial_half) -> RunSample:
    rng = run_rng(config.seed, run_index)
    n = config.n_pairs
    n_l = int(sampler(n, rng))
    n_r = n - n_l
    delta_n = n_l - n_r
    if config.model is Model.NONLOCAL_COLLAPSE:
        signal = mechdetect.omega_p(config.G, delta_n, config.moment_of_inertia)
    else:
        signal = 0.0
    noise = float(rng.normal(0.0, config.sigma_omega)) if config.sigma_omega > 0 else 0.0
    omega = signal + noise
    return RunSample(
        run_index=run_index,
        n_L=n_l,
        n_R=n_r,
        delta_N=delta_n,
        omega_signal=signal,
        omega_noise=noise,
        omega_p=omega,
        theta=mechdetect.rotation_angle(omega, config.tau),
    )


def correlation(omega_series: Sequence[float], deltaN_series: Sequence[float]) -> CorrelationResult:
    """Uncentered cosine similarity sum(w dN) / (|w| |dN|).

    Sums use math.fsum, which is exactly rounded and hence independent of
    summation order.
    """
    w = [float(x) for x in omega_series]
    dn = [float(x) for x in deltaN_series]
    if len(w) != len(dn):
        raise ValueError(f"series lengths differ ({len(w)} vs {len(dn)})")
    if not w:
        raise ValueError("correlation needs at least one run")
    norm_w = math.sqrt(math.fsum(x * x for x in w))
    norm_dn = math.sqrt(math.fsum(x * x for x in dn))
    if norm_w == 0 or norm_dn == 0:
        which = "omega_p" if norm_w == 0 else "delta_N"
        raise UndefinedCorrelationError(
            f"{which} series is identically zero, so C_p is 0/0; "
            "set sigma_omega > 0 to model a finite instrument noise floor"
        )
    dot = math.fsum(a * b for a, b in zip(w, dn))
    return CorrelationResult(dot / (norm_w * norm_dn), len(w))


def _sample_chunk(args):
    config, indices, sampler = args
    return [sample_run(config, i, sampler) for i in indices]


def run_samples(
    config: ExperimentConfig, workers: int = 1, sampler: Sampler = binomial_half
) -> list[RunSample]:
    indices = range(config.repetitions)
    if workers <= 1 or config.repetitions < 2:
        return [sample_run(config, i, sampler) for i in indices]
    n_chunks = min(config.repetitions, 4 * workers)
    chunks = [list(indices[k::n_chunks]) for k in range(n_chunks)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_sample_chunk, [(config, c, sampler) for c in chunks])
        samples = [s for part in parts for s in part]
    samples.sort(key=lambda s: s.run_index)
    return samples


def summarize(config: ExperimentConfig, samples: list[RunSample], corr: CorrelationResult) -> CampaignSummary:
    n = len(samples)
    i_m = config.moment_of_inertia
    nominal_dn = expected_fluctuation(config.t_run, config.N_gamma)
    if config.model is Model.NONLOCAL_COLLAPSE:
        nominal_omega = mechdetect.omega_p(config.G, nominal_dn, i_m)
    else:
        nominal_omega = 0.0
    e1, e3 = config.events()
    return CampaignSummary(
        n_runs=n,
        n_pairs=config.n_pairs,
        c_p=corr.c_p,
        mean_abs_omega_p=math.fsum(abs(s.omega_p) for s in samples) / n,
        mean_theta_deg=math.fsum(s.theta for s in samples) / n,
        mean_abs_theta_deg=math.fsum(abs(s.theta) for s in samples) / n,
        nominal_delta_N=nominal_dn,
        nominal_omega_p=nominal_omega,
        nominal_theta_deg=mechdetect.rotation_angle(nominal_omega, config.tau),
        beam_power_W=beam_power(config.G, config.N_gamma, config.lam),
        moment_of_inertia=i_m,
        vli_threshold=vli_threshold(e1, e3),
    )


def run_campaign(
    config: ExperimentConfig, workers: int = 1, sampler: Sampler = binomial_half
) -> CampaignResult:
    """Run every repetition and compute C_p over the campaign.

    Raises UndefinedCorrelationError when the omega_p series is identically
    zero (the null model without instrument noise).
    """
    samples = run_samples(config, workers, sampler)
    corr = correlation([s.omega_p for s in samples], [s.delta_N for s in samples])
    return CampaignResult(config, samples, corr, summarize(config, samples, corr))


def with_overrides(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(config, **changes)
