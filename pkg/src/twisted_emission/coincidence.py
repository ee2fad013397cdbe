"""Twisted-to-plane-wave coincidence channel.

When the final center-of-mass state is detected as a plane wave with
transverse momentum kappa_b at azimuth phi_b, the photon's transverse
momentum is pinned to a circle: the vector sum kappa_b + kappa_p must have
the magnitude kappa_a of the initial twisted state.  In the photon's
transverse plane (kappa_x, kappa_y) that circle has center (-kappa_b, 0)
(for phi_b = 0) and radius kappa_a.

The matrix element magnitude on the ring is independent of the beam's
orbital angular momentum; m_oam enters only as the phase m_oam * phi_x0,
with phi_x0 the azimuth of the summed transverse vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateBeamError, SingularKinematicsError
from .kinematics import BeamKind, BeamState, PhotonMode, TransitionLine
from .specfun import GaussianDelta, gaussian_delta

__all__ = [
    "RingGeometry",
    "DetectorWindow",
    "ring_geometry",
    "tw_pw_matrix_element",
    "allowed_kappa_p",
    "coincidence_density",
    "sample_ring",
]


@dataclass(frozen=True)
class RingGeometry:
    """Circle of allowed photon transverse momenta: center and radius."""

    center_x: float
    center_y: float
    radius: float


@dataclass(frozen=True)
class DetectorWindow:
    """Final-state detector acceptance: kappa_b bin of finite width.

    The width doubles as the resolution of the regularized radial delta,
    and must stay narrow against the bin center (width < 0.1 * kappa_b).
    """

    kappa_b: float
    width: float
    phi_b: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.kappa_b) and self.kappa_b >= 0):
            raise ValueError("kappa_b must be non-negative and finite")
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError("width must be positive and finite")
        if not self.width < 0.1 * self.kappa_b:
            raise ValueError("window too wide: need width < 0.1 * kappa_b")
        if not math.isfinite(self.phi_b):
            raise ValueError("phi_b must be finite")


def ring_geometry(kappa_a: float, kappa_b: float) -> RingGeometry:
    """Ring of photon transverse momenta for detector azimuth phi_b = 0."""
    if not (math.isfinite(kappa_a) and kappa_a > 0):
        raise DegenerateBeamError("kappa_a must be positive for a ring")
    if not (math.isfinite(kappa_b) and kappa_b >= 0):
        raise ValueError("kappa_b must be non-negative and finite")
    return RingGeometry(center_x=-kappa_b, center_y=0.0, radius=kappa_a)


def _x0(kappa_b: float, kappa_p: float, dphi: float) -> float:
    return math.sqrt(
        kappa_b * kappa_b
        + kappa_p * kappa_p
        + 2.0 * kappa_b * kappa_p * math.cos(dphi)
    )


def tw_pw_matrix_element(
    beam: BeamState,
    kappa_b: float,
    phi_b: float,
    photon: PhotonMode,
    tol: float = 1e-9,
) -> tuple[float, float] | None:
    """Finite part of the twisted-to-plane-wave matrix element.

    Returns ``(magnitude, phase)`` when the radial constraint
    ``|kappa_b + kappa_p| = kappa_a`` holds within ``tol * kappa_a``, else
    None.  ``magnitude`` is ``1 / (2 sqrt(E_a E_b kappa_a))``; the delta
    functions and volume regulators are excluded.  ``phase`` is
    ``m_oam * phi_x0`` with ``phi_x0`` the azimuth of the summed transverse
    vector; the magnitude carries no m_oam dependence at all.
    """
    if beam.kind is not BeamKind.TWISTED:
        raise ValueError("tw_pw_matrix_element needs a twisted beam")
    ka = beam.kappa
    if ka == 0.0:
        raise DegenerateBeamError("twisted beam with kappa_a = 0")
    if not (math.isfinite(kappa_b) and kappa_b >= 0):
        raise ValueError("kappa_b must be non-negative and finite")
    kp = photon.kappa_p
    x0 = _x0(kappa_b, kp, photon.phi_p - phi_b)
    if abs(x0 - ka) > tol * ka:
        return None
    x0x = kappa_b * math.cos(phi_b) + kp * math.cos(photon.phi_p)
    x0y = kappa_b * math.sin(phi_b) + kp * math.sin(photon.phi_p)
    phi_x0 = math.atan2(x0y, x0x)
    p_zb = beam.p_z - photon.k_z
    e_b = 0.5 * (kappa_b * kappa_b + p_zb * p_zb) / beam.mass
    e_a = beam.energy
    if e_a == 0.0 or e_b == 0.0:
        raise SingularKinematicsError("vanishing state energy in normalization")
    magnitude = 0.5 / math.sqrt(e_a * e_b * ka)
    return magnitude, beam.m_oam * phi_x0


def allowed_kappa_p(kappa_a: float, kappa_b: float, phi_p: float) -> list[float]:
    """Photon transverse momenta on the ring at a fixed azimuth.

    Non-negative real roots of ``kappa_b**2 + kappa_p**2 + 2 kappa_b
    kappa_p cos(phi_p) - kappa_a**2 = 0``, ascending; 0, 1, or 2 of them.
    """
    if not (math.isfinite(kappa_a) and kappa_a > 0):
        raise DegenerateBeamError("kappa_a must be positive")
    if not (math.isfinite(kappa_b) and kappa_b >= 0):
        raise ValueError("kappa_b must be non-negative and finite")
    if not math.isfinite(phi_p):
        raise ValueError("phi_p must be finite")
    c = math.cos(phi_p)
    s2 = 1.0 - c * c
    disc = kappa_a * kappa_a - kappa_b * kappa_b * s2
    if disc < 0.0:
        return []
    r = math.sqrt(disc)
    roots = (-kappa_b * c - r, -kappa_b * c + r)
    out: list[float] = []
    for root in roots:
        if root >= 0.0:
            v = root + 0.0  # normalize -0.0
            if not out or abs(v - out[-1]) > 0.0:
                out.append(v)
    return out


def coincidence_density(
    beam: BeamState,
    line: TransitionLine,
    window: DetectorWindow,
    photon: PhotonMode,
    delta: GaussianDelta,
) -> float:
    """Reduced coincidence response of a kappa_b detector bin.

    strength * G(detuning + E_a - E_b) * G_radial(kappa_a - x0) * kappa_b *
    width / (4 E_b E_a kappa_a), where x0 is the summed transverse momentum
    magnitude and the radial delta is regularized with the window width.
    """
    if beam.kind is not BeamKind.TWISTED:
        raise ValueError("coincidence_density needs a twisted beam")
    ka = beam.kappa
    if ka == 0.0:
        raise DegenerateBeamError("twisted beam with kappa_a = 0")
    kb = window.kappa_b
    x0 = _x0(kb, photon.kappa_p, photon.phi_p - window.phi_b)
    p_zb = beam.p_z - photon.k_z
    e_b = 0.5 * (kb * kb + p_zb * p_zb) / beam.mass
    e_a = beam.energy
    if e_a == 0.0 or e_b == 0.0:
        raise SingularKinematicsError("vanishing state energy")
    energy_arg = line.upper - line.lower - photon.omega + e_a - e_b
    radial = gaussian_delta(ka - x0, GaussianDelta(window.width))
    return (
        line.strength
        * gaussian_delta(energy_arg, delta)
        * radial
        * kb
        * window.width
        / (4.0 * e_b * e_a * ka)
    )


def sample_ring(geometry: RingGeometry, n: int) -> list[tuple[float, float]]:
    """n points uniform in angle along the ring, starting at angle 0."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    out = []
    for j in range(n):
        t = 2.0 * math.pi * j / n
        out.append(
            (
                geometry.center_x + geometry.radius * math.cos(t),
                geometry.center_y + geometry.radius * math.sin(t),
            )
        )
    return out
