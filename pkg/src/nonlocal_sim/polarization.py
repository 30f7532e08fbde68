"""Single- and two-photon polarization states.

Handedness convention (used everywhere in the package)::

    |L> = (|H> - i|V>) / sqrt(2)
    |R> = (|H> + i|V>) / sqrt(2)

Optics texts disagree on which of these is "left"; this module is the only
place the choice is made.

Two-photon amplitudes are ordered over the product basis (HH, HV, VH, VV),
first letter = photon 1 (Alice), second letter = photon 2 (Bob/Charlie).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
_SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class PolarizationState:
    a_h: complex
    a_v: complex

    def __post_init__(self):
        norm = abs(self.a_h) ** 2 + abs(self.a_v) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"polarization state not normalized (|a|^2 = {norm!r})")

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "PolarizationState":
        vec = np.asarray(vec, dtype=complex)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            vec = vec / norm
        return cls(complex(vec[0]), complex(vec[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a_h, self.a_v], dtype=complex)

    def overlap(self, other: "PolarizationState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.vector, other.vector))


H = PolarizationState(1.0 + 0j, 0j)
V = PolarizationState(0j, 1.0 + 0j)
L = PolarizationState(_SQRT_HALF + 0j, -1j * _SQRT_HALF)
R = PolarizationState(_SQRT_HALF + 0j, 1j * _SQRT_HALF)


@dataclass(frozen=True)
class MeasurementBasis:
    e0: PolarizationState
    e1: PolarizationState
    name: str = ""

    def __post_init__(self):
        if abs(self.e0.overlap(self.e1)) >= NORM_TOL:
            raise ValueError("measurement basis is not orthogonal")

    def __getitem__(self, index: int) -> PolarizationState:
        return (self.e0, self.e1)[index]

    @property
    def matrix(self) -> np.ndarray:
        # columns are the basis kets
        return np.column_stack([self.e0.vector, self.e1.vector])


LINEAR_BASIS = MeasurementBasis(H, V, "HV")
CIRCULAR_BASIS = MeasurementBasis(L, R, "LR")


@dataclass(frozen=True)
class BipartiteState:
    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 4:
            raise ValueError("a two-photon state needs exactly 4 amplitudes")
        object.__setattr__(self, "amplitudes", amps)
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"two-photon state not normalized (|a|^2 = {norm!r})")

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as a 2x2 array indexed [photon1, photon2]."""
        return self.vector.reshape(2, 2)

    @classmethod
    def product(cls, s1: PolarizationState, s2: PolarizationState) -> "BipartiteState":
        return cls(tuple(np.kron(s1.vector, s2.vector)))


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome_index: int
    probability: float
    outcome_state: PolarizationState
    collapsed_partner: PolarizationState


def bell_state() -> BipartiteState:
    """(|HH> + |VV>)/sqrt(2); identical to (|LR> + |RL>)/sqrt(2)."""
    return BipartiteState((_SQRT_HALF, 0j, 0j, _SQRT_HALF))


def express_in_basis(
    state: BipartiteState, basis1: MeasurementBasis, basis2: MeasurementBasis
) -> np.ndarray:
    """Coefficients of `state` over the product basis (e0e0, e0e1, e1e0, e1e1)."""
    u1 = basis1.matrix
    u2 = basis2.matrix
    coeffs = u1.conj().T @ state.matrix @ u2.conj()
    return coeffs.reshape(4)


def from_basis_amplitudes(
    coeffs, basis1: MeasurementBasis, basis2: MeasurementBasis
) -> BipartiteState:
    """Inverse of :func:`express_in_basis`."""
    c = np.asarray(coeffs, dtype=complex).reshape(2, 2)
    m = basis1.matrix @ c @ basis2.matrix.T
    return BipartiteState(tuple(m.reshape(4)))


def _partner_vector(state: BipartiteState, party: int, ket: PolarizationState) -> np.ndarray:
    m = state.matrix
    if party == 1:
        return ket.vector.conj() @ m
    if party == 2:
        return m @ ket.vector.conj()
    raise ValueError(f"party must be 1 or 2, got {party!r}")


def born_probability(state: BipartiteState, party: int, ket: PolarizationState) -> float:
    vec = _partner_vector(state, party, ket)
    return float(np.vdot(vec, vec).real)


def measure_party(
    state: BipartiteState, party: int, basis: MeasurementBasis, u: float
) -> MeasurementOutcome:
    """Projectively measure one photon and collapse its partner.

    `u` is a uniform draw in [0, 1); outcome 0 is selected when
    ``u < P(e0)``. The partner state is renormalized but keeps whatever
    global phase the projection produced.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"uniform draw must lie in [0, 1), got {u!r}")
    p0 = born_probability(state, party, basis.e0)
    index = 0 if u < p0 else 1
    prob = p0 if index == 0 else 1.0 - p0
    ket = basis[index]
    partner = _partner_vector(state, party, ket)
    return MeasurementOutcome(
        outcome_index=index,
        probability=prob,
        outcome_state=ket,
        collapsed_partner=PolarizationState.from_vector(partner, normalize=True),
    )


def circular_content(state: PolarizationState) -> tuple[float, float]:
    """(P_L, P_R) for a single photon."""
    return abs(L.overlap(state)) ** 2, abs(R.overlap(state)) ** 2
