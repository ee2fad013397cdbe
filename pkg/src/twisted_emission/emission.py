"""Differential photon emission densities for plane and twisted beams.

All densities are "reduced": the constant electronic matrix element enters
only through ``line.strength``, volume regulators are stripped, and the
energy delta is replaced by a narrow Gaussian.  Angular densities are per
photon energy and solid angle, with the photon-energy weight included.

For a twisted beam the angular distribution is governed by a single master
integral over the transverse recoil momentum.  Two routes compute it:

* ``IntegralMode.EXACT`` integrates the delta analytically.  The result is
  supported strictly between two critical angles where the recoil momentum
  meets the triangle-domain boundary, diverging (integrably) at both.
* ``IntegralMode.QUADRATURE`` keeps the Gaussian-smoothed delta and
  integrates numerically, which smears the two divergences into finite
  peaks.

Away from the critical angles the two routes must agree; near them only
the quadrature route is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    EmptyChannelError,
    SingularGeometryError,
    SingularKinematicsError,
)
from .kinematics import BeamKind, BeamState, TransitionLine, TriangleGeom
from .quadrature import QuadratureConfig, integrate
from .specfun import GaussianDelta, gaussian_delta

__all__ = [
    "Channel",
    "IntegralMode",
    "EmissionProblem",
    "ScanResult",
    "planewave_density",
    "master_integral_exact",
    "master_integral_quad",
    "twisted_density",
    "twisted_pair_weight",
    "scan",
]

_TWO_PI = 2.0 * math.pi
# Relative half-width of the boundary zone where the exact master integral
# is treated as pinned on the triangle edge.
_BOUNDARY_TOL = 1e-12


class Channel(Enum):
    PLANE_WAVE = "planewave"
    TWISTED_EXACT = "twisted-exact"
    TWISTED_QUAD = "twisted-quad"


class IntegralMode(Enum):
    EXACT = "exact"
    QUADRATURE = "quad"


@dataclass(frozen=True)
class EmissionProblem:
    """One emission configuration: beam, transition, photon energy, width."""

    beam: BeamState
    line: TransitionLine
    omega: float
    delta: GaussianDelta

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be positive and finite")
        if not isinstance(self.delta, GaussianDelta):
            raise ValueError("delta must be a GaussianDelta")
        # The channel must be open somewhere: the squared transverse recoil
        # momentum, maximized over photon direction, has to be non-negative.
        p_z = self.beam.p_z
        best = 0.0 if abs(p_z) <= self.omega else (abs(p_z) - self.omega)
        kb2_max = (
            2.0 * self.beam.mass * self.detuning
            + self.beam.momentum**2
            - best * best
        )
        if kb2_max < 0.0:
            raise ValueError("channel closed for every photon direction")

    @property
    def detuning(self) -> float:
        return self.line.upper - self.line.lower - self.omega


@dataclass(frozen=True)
class ScanResult:
    """Angular scan with max-normalization metadata and peak locations.

    ``values`` are the densities divided by ``scale`` (the raw maximum), so
    ``values * scale`` recovers raw densities.  ``peaks`` lists angles of
    strict local maxima whose normalized height exceeds 0.5.
    """

    thetas: np.ndarray
    values: np.ndarray
    normalized: bool
    peaks: tuple[float, ...]
    scale: float


def _require_kind(beam: BeamState, kind: BeamKind, what: str) -> None:
    if beam.kind is not kind:
        raise ValueError(f"{what} needs a {kind.value} beam, got {beam.kind.value}")


def planewave_density(problem: EmissionProblem, theta_p: float) -> float:
    """Reduced angular density for a plane-wave beam (p_z = P).

    strength / (2 pi)**2 * 1 / (8 E_a) * G(detuning + p_z w cos(theta)/M
    - w**2/(2M)) * omega / E_b, with E_b the recoil kinetic energy.  The
    Gaussian G is the smeared energy delta.
    """
    _require_kind(problem.beam, BeamKind.PLANE_WAVE, "planewave_density")
    beam, line, omega = problem.beam, problem.line, problem.omega
    e_a = beam.energy
    if e_a == 0.0:
        raise SingularKinematicsError("beam at rest: flux normalization diverges")
    m = beam.mass
    c = math.cos(theta_p)
    arg = problem.detuning + beam.p_z * omega * c / m - 0.5 * omega * omega / m
    e_b = (0.5 * beam.p_z * beam.p_z - beam.p_z * omega * c + 0.5 * omega * omega) / m
    if e_b <= 0.0:
        raise SingularKinematicsError("vanishing recoil energy at this angle")
    return (
        line.strength
        / (_TWO_PI * _TWO_PI)
        * 0.125
        / e_a
        * gaussian_delta(arg, problem.delta)
        * omega
        / e_b
    )


def _recoil_kb2(problem: EmissionProblem, theta_p: float) -> tuple[float, float]:
    """Squared transverse recoil momentum and longitudinal recoil momentum."""
    beam = problem.beam
    p_zb = beam.p_z - problem.omega * math.cos(theta_p)
    kb2 = 2.0 * beam.mass * problem.detuning + beam.momentum**2 - p_zb * p_zb
    return kb2, p_zb


def master_integral_exact(problem: EmissionProblem, theta_p: float) -> float:
    """Master integral with the energy delta taken exactly.

    Returns ``4 M / (E_b * sqrt((hi - u)(u - lo)))`` with ``u`` the squared
    transverse recoil momentum and ``lo, hi`` the squared triangle bounds
    ``(kappa_a -+ kappa_p)**2``; 0 when ``u`` lies outside ``[lo, hi]``.
    Raises ``SingularGeometryError`` when ``u`` is pinned on a bound within
    a 1e-12 relative zone, where the exact form diverges.
    """
    _require_kind(problem.beam, BeamKind.TWISTED, "master_integral_exact")
    beam = problem.beam
    kp = problem.omega * math.sin(theta_p)
    ka = beam.kappa
    lo = (ka - kp) ** 2
    hi = (ka + kp) ** 2
    u, p_zb = _recoil_kb2(problem, theta_p)
    tol = _BOUNDARY_TOL * max(1.0, hi)
    if abs(u - lo) <= tol or abs(u - hi) <= tol:
        raise SingularGeometryError(
            "recoil momentum pinned on the triangle boundary; "
            "the exact density diverges at this angle"
        )
    if u < lo or u > hi:
        return 0.0
    e_b = 0.5 * (u + p_zb * p_zb) / beam.mass
    if e_b <= 0.0:
        raise SingularKinematicsError("vanishing recoil energy")
    return 4.0 * beam.mass / (e_b * math.sqrt((hi - u) * (u - lo)))


def master_integral_quad(
    problem: EmissionProblem,
    theta_p: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Master integral with the Gaussian-smeared delta kept in place.

    Integrates ``4 G((u_tilde - kb**2)/(2M)) kb / (E_b sqrt((hi - kb**2)
    (kb**2 - lo)))`` over the triangle window ``kb in [|kappa_a - kappa_p|,
    kappa_a + kappa_p]``.  The integrand has inverse-square-root endpoint
    singularities (desingularized by the integrator) and a Gaussian spike
    at the recoil momentum (declared to the integrator).  Returns 0 for a
    zero-width window (kappa_p = 0 or kappa_a = 0).
    """
    _require_kind(problem.beam, BeamKind.TWISTED, "master_integral_quad")
    beam = problem.beam
    mass = beam.mass
    kp = problem.omega * math.sin(theta_p)
    ka = beam.kappa
    a = abs(ka - kp)
    b = ka + kp
    if not b > a:
        return 0.0
    u_tilde, p_zb = _recoil_kb2(problem, theta_p)
    lo = a * a
    hi = b * b
    delta = problem.delta
    pzb2 = p_zb * p_zb

    def f(kb: float) -> float:
        u = kb * kb
        e_b = 0.5 * (u + pzb2) / mass
        weight = (hi - u) * (u - lo)
        arg = 0.5 * (u_tilde - u) / mass
        return 4.0 * gaussian_delta(arg, delta) * kb / (e_b * math.sqrt(weight))

    spikes = None
    if u_tilde > 0.0:
        center = math.sqrt(u_tilde)
        # Width of the energy Gaussian mapped to the kb axis.
        spikes = [(center, delta.sigma_e * mass / center)]
    value, _ = integrate(f, a, b, cfg, spikes=spikes)
    return value


def twisted_density(
    problem: EmissionProblem, theta_p: float, mode: IntegralMode
) -> float:
    """Reduced angular density for a twisted beam.

    strength / (2 pi)**4 * 1 / (8 E_a) * (I1 / (2 pi)) * omega, with I1
    the master integral in the selected mode.  The orbital angular momentum
    of the beam cancels from this observable, so the value is independent
    of ``beam.m_oam`` by construction.
    """
    _require_kind(problem.beam, BeamKind.TWISTED, "twisted_density")
    e_a = problem.beam.energy
    if e_a == 0.0:
        raise SingularKinematicsError("beam at rest: flux normalization diverges")
    if mode is IntegralMode.EXACT:
        i1 = master_integral_exact(problem, theta_p)
    elif mode is IntegralMode.QUADRATURE:
        i1 = master_integral_quad(problem, theta_p)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return (
        problem.line.strength
        / (_TWO_PI**4)
        * 0.125
        / e_a
        * (i1 / _TWO_PI)
        * problem.omega
    )


def twisted_pair_weight(m_a: int, m_b: int, tri: TriangleGeom) -> float:
    """Relative weight of one (m_a -> m_b) transition at fixed recoil.

    ``(1 + cos(2 m_a phase_x - 2 m_b phase_b)) * kappa_b / (4 area)``.
    Requires a valid, non-degenerate triangle.
    """
    if not tri.valid:
        raise ValueError("pair weight needs a valid triangle")
    if tri.area == 0.0:
        raise SingularGeometryError("degenerate triangle: weight diverges")
    phase = 2.0 * m_a * tri.phase_x - 2.0 * m_b * tri.phase_b
    return (1.0 + math.cos(phase)) * tri.kappa_b / (4.0 * tri.area)


def _channel_evaluator(problem: EmissionProblem, channel: Channel):
    if channel is Channel.PLANE_WAVE:
        _require_kind(problem.beam, BeamKind.PLANE_WAVE, "a planewave scan")
        return lambda t: planewave_density(problem, t)
    _require_kind(problem.beam, BeamKind.TWISTED, "a twisted scan")
    if channel is Channel.TWISTED_EXACT:
        return lambda t: twisted_density(problem, t, IntegralMode.EXACT)
    if channel is Channel.TWISTED_QUAD:
        return lambda t: twisted_density(problem, t, IntegralMode.QUADRATURE)
    raise ValueError(f"unknown channel {channel!r}")


def scan(
    problem: EmissionProblem, channel: Channel, grid: Sequence[float] | np.ndarray
) -> ScanResult:
    """Evaluate one channel on a strictly increasing angle grid.

    Values are max-normalized; the raw maximum is kept in ``scale``.  An
    all-zero scan raises ``EmptyChannelError``.  For the exact channel the
    caller must keep grid points away from the two critical angles (the
    default command-line grid insets them by 1e-6 rad).
    """
    thetas = np.asarray(grid, dtype=float)
    if thetas.ndim != 1 or thetas.size < 2:
        raise ValueError("grid must be one-dimensional with at least two points")
    if not np.all(np.isfinite(thetas)):
        raise ValueError("grid must be finite")
    if thetas[0] < 0 or thetas[-1] > math.pi or not np.all(np.diff(thetas) > 0):
        raise ValueError("grid must be strictly increasing within [0, pi]")
    evaluate = _channel_evaluator(problem, channel)
    raw = np.array([evaluate(float(t)) for t in thetas])
    scale = float(raw.max())
    if scale == 0.0:
        raise EmptyChannelError("density vanished at every grid point")
    values = raw / scale
    peaks = tuple(
        float(thetas[i])
        for i in range(1, len(thetas) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1] and values[i] > 0.5
    )
    return ScanResult(thetas=thetas, values=values, normalized=True, peaks=peaks, scale=scale)
