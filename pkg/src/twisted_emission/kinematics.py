"""Beam, transition, and photon kinematics for center-of-mass emission.

Conventions: hbar = 1, momenta and energies in matched natural units, the
beam axis is z.  A twisted beam is a Bessel state with total momentum P,
opening angle theta_a (so p_z = P cos(theta_a), kappa = P sin(theta_a)) and
orbital angular momentum projection m_oam.  A plane-wave beam is the
theta_a = 0 special case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NoEmissionPeakError

__all__ = [
    "BeamKind",
    "BeamState",
    "TransitionLine",
    "PhotonMode",
    "TriangleGeom",
    "RecoilState",
    "make_triangle",
    "beam_energy",
    "recoil_state",
    "theta_pw",
    "discontinuity_angles",
]

# Tolerated arccos overshoot before declaring the triangle data inconsistent.
_ARCCOS_SLACK = 1e-12


class BeamKind(Enum):
    PLANE_WAVE = "planewave"
    TWISTED = "twisted"


@dataclass(frozen=True)
class BeamState:
    """Center-of-mass state of the emitting atom before the photon leaves."""

    kind: BeamKind
    mass: float
    momentum: float
    theta_a: float = 0.0
    m_oam: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, BeamKind):
            raise ValueError("kind must be a BeamKind")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError("mass must be positive and finite")
        if not (math.isfinite(self.momentum) and self.momentum >= 0):
            raise ValueError("momentum must be non-negative and finite")
        if not (0 <= self.theta_a < 0.5 * math.pi):
            raise ValueError("theta_a must lie in [0, pi/2)")
        if self.kind is BeamKind.PLANE_WAVE and self.theta_a != 0.0:
            raise ValueError("a plane-wave beam has theta_a = 0")
        if not isinstance(self.m_oam, int):
            raise ValueError("m_oam must be an integer")

    @classmethod
    def plane_wave(cls, mass: float, momentum: float) -> "BeamState":
        return cls(BeamKind.PLANE_WAVE, mass, momentum)

    @classmethod
    def twisted(
        cls, mass: float, momentum: float, theta_a: float, m_oam: int = 0
    ) -> "BeamState":
        return cls(BeamKind.TWISTED, mass, momentum, theta_a, m_oam)

    @property
    def p_z(self) -> float:
        """Longitudinal momentum P cos(theta_a)."""
        return self.momentum * math.cos(self.theta_a)

    @property
    def kappa(self) -> float:
        """Transverse momentum P sin(theta_a)."""
        return self.momentum * math.sin(self.theta_a)

    @property
    def energy(self) -> float:
        """Kinetic energy P**2 / (2 M); identical for all cone components."""
        return 0.5 * self.momentum * self.momentum / self.mass


@dataclass(frozen=True)
class TransitionLine:
    """Internal electronic transition: level energies and line strength.

    ``strength`` is the squared (constant) electronic matrix element; it
    scales every density linearly and defaults to 1.
    """

    upper: float
    lower: float
    strength: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.upper) and math.isfinite(self.lower)):
            raise ValueError("level energies must be finite")
        if not self.upper > self.lower:
            raise ValueError("upper level must lie above lower level")
        if not (math.isfinite(self.strength) and self.strength >= 0):
            raise ValueError("strength must be non-negative and finite")


@dataclass(frozen=True)
class PhotonMode:
    """Emitted photon: energy omega and direction (theta_p, phi_p)."""

    omega: float
    theta_p: float
    phi_p: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be positive and finite")
        if not (0 <= self.theta_p <= math.pi):
            raise ValueError("theta_p must lie in [0, pi]")
        if not (0 <= self.phi_p < 2 * math.pi):
            raise ValueError("phi_p must lie in [0, 2*pi)")

    @property
    def k_z(self) -> float:
        return self.omega * math.cos(self.theta_p)

    @property
    def kappa_p(self) -> float:
        return self.omega * math.sin(self.theta_p)


@dataclass(frozen=True)
class TriangleGeom:
    """Transverse-momentum triangle (kappa_a, kappa_b, kappa_p).

    ``valid`` is the closed triangle condition
    ``|kappa_a - kappa_p| <= kappa_b <= kappa_a + kappa_p``.  When it fails,
    ``area`` and the phases are None.  A valid triangle with ``area == 0``
    is degenerate (collinear momenta).
    """

    kappa_a: float
    kappa_b: float
    kappa_p: float
    valid: bool
    area: float | None
    phase_b: float | None
    phase_x: float | None


@dataclass(frozen=True)
class RecoilState:
    """Final center-of-mass state fixed by energy-momentum conservation."""

    kappa_b: float
    energy: float


def _checked_arccos(num: float, den: float) -> float:
    if den == 0.0:
        # Zero-length side: the angle is immaterial (area is 0 as well).
        return 0.0
    r = num / den
    if abs(r) > 1.0 + _ARCCOS_SLACK:
        raise RuntimeError(
            f"triangle marked valid but arccos argument is {r!r}; "
            "inconsistent side lengths"
        )
    return math.acos(min(1.0, max(-1.0, r)))


def make_triangle(kappa_a: float, kappa_b: float, kappa_p: float) -> TriangleGeom:
    """Classify the side triple and attach area and opening phases.

    The phases follow the law-of-cosines conventions
    ``kappa_a**2 - kappa_b**2 - kappa_p**2 = 2 kappa_b kappa_p cos(phase_b)``
    and
    ``kappa_a**2 + kappa_p**2 - kappa_b**2 = 2 kappa_a kappa_p cos(phase_x)``,
    so ``phase_b`` is the supplement of the interior angle between the
    kappa_b and kappa_p sides.
    """
    for name, v in (("kappa_a", kappa_a), ("kappa_b", kappa_b), ("kappa_p", kappa_p)):
        if not (math.isfinite(v) and v >= 0):
            raise ValueError(f"{name} must be non-negative and finite")
    valid = abs(kappa_a - kappa_p) <= kappa_b <= kappa_a + kappa_p
    if not valid:
        return TriangleGeom(kappa_a, kappa_b, kappa_p, False, None, None, None)
    disc = 4.0 * kappa_b**2 * kappa_p**2 - (kappa_a**2 - kappa_b**2 - kappa_p**2) ** 2
    area = 0.25 * math.sqrt(max(disc, 0.0))
    phase_b = _checked_arccos(kappa_a**2 - kappa_b**2 - kappa_p**2, 2.0 * kappa_b * kappa_p)
    phase_x = _checked_arccos(kappa_a**2 + kappa_p**2 - kappa_b**2, 2.0 * kappa_a * kappa_p)
    return TriangleGeom(kappa_a, kappa_b, kappa_p, True, area, phase_b, phase_x)


def beam_energy(beam: BeamState) -> float:
    """Kinetic energy of the beam state, P**2 / (2 M)."""
    return beam.energy


def recoil_state(
    beam: BeamState, line: TransitionLine, photon: PhotonMode
) -> RecoilState | None:
    """Solve energy and longitudinal-momentum conservation for the recoil.

    Returns None when the channel is closed at this photon direction, i.e.
    the squared transverse recoil momentum comes out negative.
    """
    p_zb = beam.p_z - photon.k_z
    detuning = line.upper - line.lower - photon.omega
    kb2 = 2.0 * beam.mass * detuning + beam.momentum**2 - p_zb**2
    if kb2 < 0.0:
        return None
    return RecoilState(math.sqrt(kb2), 0.5 * (kb2 + p_zb * p_zb) / beam.mass)


def theta_pw(beam: BeamState, line: TransitionLine, omega: float) -> float:
    """Polar angle at which the smeared energy delta is centered.

    Root of ``detuning + p_z * omega * cos(theta) / M - omega**2 / (2 M)``
    in theta.  Raises ``NoEmissionPeakError`` when the root falls outside
    the physical range (|cos| > 1) or the equation degenerates (p_z = 0).
    """
    if not (math.isfinite(omega) and omega > 0):
        raise ValueError("omega must be positive and finite")
    denom = beam.p_z * omega
    if denom == 0.0:
        raise NoEmissionPeakError("p_z * omega vanishes; no peak equation")
    detuning = line.upper - line.lower - omega
    c = (0.5 * omega * omega - beam.mass * detuning) / denom
    if abs(c) > 1.0:
        raise NoEmissionPeakError(f"peak condition needs cos(theta) = {c!r}")
    return math.acos(c)


def discontinuity_angles(
    beam: BeamState, line: TransitionLine, omega: float
) -> tuple[float, float]:
    """Angles where the exact twisted density jumps: theta_pw(plane) -+ theta_a.

    The reference angle is the plane-wave peak of a beam with the same
    total momentum (p_z = P).  At the lower angle the recoil momentum
    reaches the upper triangle bound kappa_a + kappa_p, at the upper angle
    the lower bound |kappa_a - kappa_p|.
    """
    plane = BeamState.plane_wave(beam.mass, beam.momentum)
    center = theta_pw(plane, line, omega)
    return center - beam.theta_a, center + beam.theta_a
