"""Charlie's mechanical detector: two free half-wave plates in a row.

A circularly polarized photon crossing a half-wave plate has its handedness
reversed and transfers 2 hbar of angular momentum to the plate; the second
plate reverses it back and receives the opposite kick. Angular momenta are
kept as exact integers in units of hbar and only converted to SI at the
output boundary.

Sign convention: an |L> photon adds +2 to plate 1 and -2 to plate 2, so a
single L photon gives delta_l = l2 - l1 = -4 and a single R photon +4.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import constants as _sc

from .polarization import PolarizationState, circular_content

_CP_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    h: float = _sc.h
    hbar: float = _sc.hbar
    c: float = _sc.c

    def __post_init__(self):
        if abs(self.hbar - self.h / (2 * math.pi)) > 1e-12 * self.hbar:
            raise ValueError("hbar must equal h / 2pi")


CONSTANTS = PhysicalConstants()


def min_thickness(lam: float, delta_n: float) -> float:
    """Zero-order half-wave plate thickness lambda / (2 delta_n), in metres."""
    if not delta_n > 0:
        raise ValueError(f"birefringence must be positive, got {delta_n!r}")
    if not lam > 0:
        raise ValueError(f"wavelength must be positive, got {lam!r}")
    return lam / (2.0 * delta_n)


@dataclass(frozen=True)
class WavePlateSpec:
    """Disk-shaped birefringent plate (SI units)."""

    rho: float = 3.0e3
    D: float = 5.5e-6
    r: float = 50e-6
    # back-solved from lambda = 1 um, D = 5.5 um; the material is only "KTP-like"
    delta_n: float = 1.0 / 11.0
    lambda_design: float = 1.0e-6

    def __post_init__(self):
        for name in ("rho", "D", "r", "delta_n", "lambda_design"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"wave plate {name} must be positive and finite, got {value!r}")
        floor = min_thickness(self.lambda_design, self.delta_n)
        if self.D < floor - 1e-12:
            raise ValueError(
                f"plate thickness {self.D!r} m is below the half-wave floor {floor!r} m"
            )


def moment_of_inertia(spec: WavePlateSpec) -> float:
    """(pi/2) rho D r^4 for a solid disk about its axis, kg m^2."""
    return 0.5 * math.pi * spec.rho * spec.D * spec.r**4


class Handedness(enum.Enum):
    L = "L"
    R = "R"
    LINEAR = "linear"


# plate-1 kick per photon, hbar units; plate 2 gets the negative
_KICK = {Handedness.L: 2, Handedness.R: -2, Handedness.LINEAR: 0}


@dataclass(frozen=True)
class DetectorRecord:
    l1: int = 0
    l2: int = 0
    photon_count: int = 0

    @property
    def delta_l(self) -> int:
        """l2 - l1 in units of hbar."""
        return self.l2 - self.l1

    def in_si(self, hbar: float = CONSTANTS.hbar) -> tuple[float, float, float]:
        return self.l1 * hbar, self.l2 * hbar, self.delta_l * hbar


def apply_photon(record: DetectorRecord, handedness: Handedness) -> DetectorRecord:
    return apply_photons(record, handedness, 1)


def apply_photons(record: DetectorRecord, handedness: Handedness, count: int) -> DetectorRecord:
    """Accumulate `count` identical photons at once (exact integer arithmetic)."""
    if count < 0:
        raise ValueError("photon count must be non-negative")
    handedness = Handedness(handedness)
    kick = _KICK[handedness] * count
    return DetectorRecord(record.l1 + kick, record.l2 - kick, record.photon_count + count)


def classify(state: PolarizationState) -> Handedness:
    p_l, p_r = circular_content(state)
    if abs(p_l - 1.0) < _CP_TOL:
        return Handedness.L
    if abs(p_r - 1.0) < _CP_TOL:
        return Handedness.R
    if abs(p_l - p_r) < _CP_TOL:
        return Handedness.LINEAR
    raise ValueError("elliptical input: the detector model handles only CP or LP photons")


def detect(
    record: DetectorRecord, state: PolarizationState
) -> tuple[DetectorRecord, PolarizationState]:
    """Pass one photon through the detector.

    The photon leaves in the same polarization state it arrived in; the
    returned state is the very object that was passed in.
    """
    return apply_photon(record, classify(state)), state


def kick_angular_velocity(I_m: float, hbar: float = CONSTANTS.hbar) -> float:
    """Per-photon, per-plate change of angular speed, 2 hbar / I (rad/s)."""
    if not I_m > 0:
        raise ValueError(f"moment of inertia must be positive, got {I_m!r}")
    return 2.0 * hbar / I_m


def omega_p(G: float, delta_N: float, I_m: float, hbar: float = CONSTANTS.hbar) -> float:
    """Change of relative angular velocity of the two plates, 4 hbar G dN / I.

    `delta_N` is signed (n_L - n_R at Alice), so the result is too.
    """
    if not I_m > 0:
        raise ValueError(f"moment of inertia must be positive, got {I_m!r}")
    if not G >= 1:
        raise ValueError(f"gain must be >= 1, got {G!r}")
    return 4.0 * hbar * G * delta_N / I_m


def relative_angular_velocity(record: DetectorRecord, I_m: float, hbar: float = CONSTANTS.hbar) -> float:
    """delta_l hbar / I for an accumulated record."""
    if not I_m > 0:
        raise ValueError(f"moment of inertia must be positive, got {I_m!r}")
    return record.delta_l * hbar / I_m


def rotation_angle(omega: float, tau: float) -> float:
    """Relative rotation after free rotation for `tau` seconds, in degrees."""
    if tau < 0:
        raise ValueError(f"rotation time must be non-negative, got {tau!r}")
    return math.degrees(omega * tau)
