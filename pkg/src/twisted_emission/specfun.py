"""Special functions and regularized distributions.

Three ingredients feed the emission densities:

* integer-order Bessel functions of the first kind (``bessel_j``),
* a Gaussian-regularized energy delta (``gaussian_delta``),
* the overlap integral of three Bessel functions sharing one radial
  coordinate, for which a closed form in terms of the transverse-momentum
  triangle exists (``triple_bessel_closed``).

The closed form is cheap but non-obvious, so a slow independent oracle is
provided: the same integral with an exponential damping factor, evaluated
by adaptive quadrature over a finite range (``triple_bessel_oracle``).
Extrapolating the damping to zero (``triple_bessel_extrapolate``) recovers
the undamped value and must reproduce the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import jv as _scipy_jv

from .errors import ConvergenceError, DomainError, SingularGeometryError
from .kinematics import TriangleGeom
from .quadrature import integrate_panels

__all__ = [
    "GaussianDelta",
    "gaussian_delta",
    "bessel_j",
    "triple_bessel_closed",
    "triple_bessel_oracle",
    "triple_bessel_extrapolate",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GaussianDelta:
    """Finite-width stand-in for an energy-conservation delta function.

    ``sigma_e`` is a purely numerical resolution parameter: results are
    meaningful where they are insensitive to it, and the width only has to
    be small against every other energy scale in play.
    """

    sigma_e: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma_e) and self.sigma_e > 0):
            raise ValueError("sigma_e must be positive and finite")


def gaussian_delta(energy: float, delta: GaussianDelta) -> float:
    """Unit-area Gaussian of width ``delta.sigma_e`` evaluated at ``energy``."""
    if not math.isfinite(energy):
        raise DomainError("energy argument must be finite")
    s = delta.sigma_e
    z = energy / s
    return math.exp(-0.5 * z * z) / (_SQRT_2PI * s)


def bessel_j(order: int, x):
    """Bessel function of the first kind for integer order.

    Accepts a scalar or an ndarray for ``x``; entries must be finite and
    non-negative.  Negative orders are reduced through the reflection
    J_{-m}(x) = (-1)**m J_m(x), so both signs share one code path.

    The positive-order evaluation is delegated to scipy's jv, which keeps
    the absolute error comfortably below 1e-12 for |order| <= 64 over the
    x <= 1e3 range used here.
    """
    if not isinstance(order, (int, np.integer)):
        raise DomainError("order must be an integer")
    order = int(order)
    if order < 0:
        value = bessel_j(-order, x)
        return -value if order % 2 else value
    scalar = np.isscalar(x)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite")
    if np.any(arr < 0):
        raise DomainError("x must be non-negative")
    out = _scipy_jv(order, arr)
    return float(out) if scalar else out


def triple_bessel_closed(m_a: int, m_b: int, tri: TriangleGeom) -> float:
    """Closed form of the radial triple-Bessel overlap.

    Value of ``integral_0^inf J_{m_b}(kappa_b rho) J_{m_a}(kappa_a rho)
    J_{m_a - m_b}(kappa_p rho) rho d rho`` as a function of the side
    triangle: ``cos(m_a * phase_x - m_b * phase_b) / (2 pi area)`` inside
    the triangle domain and exactly 0 outside it.

    Raises ``SingularGeometryError`` on a degenerate (zero-area) triangle,
    where the undamped integral does not converge to a finite value.
    """
    if not isinstance(m_a, (int, np.integer)) or not isinstance(m_b, (int, np.integer)):
        raise DomainError("m_a and m_b must be integers")
    if not tri.valid:
        return 0.0
    if tri.area == 0.0:
        raise SingularGeometryError(
            "degenerate triangle: collinear transverse momenta"
        )
    return math.cos(m_a * tri.phase_x - m_b * tri.phase_b) / (_TWO_PI * tri.area)


def triple_bessel_oracle(
    m_a: int,
    m_b: int,
    kappa_a: float,
    kappa_b: float,
    kappa_p: float,
    damping: float,
    rho_max: float,
) -> float:
    """Damped triple-Bessel overlap, integrated numerically.

    Evaluates ``integral_0^rho_max J_{m_b}(kappa_b rho) J_{m_a}(kappa_a rho)
    J_{m_a - m_b}(kappa_p rho) rho exp(-damping rho) d rho`` with adaptive
    panel quadrature, panels sized to the fastest Bessel oscillation.
    ``rho_max`` must be large enough that the damped tail is negligible at
    the accuracy of interest (``damping * rho_max >= ~20``).

    This is deliberately independent of :func:`triple_bessel_closed`: it
    never touches the triangle construction, only Bessel evaluations.
    """
    for name, v in (
        ("kappa_a", kappa_a),
        ("kappa_b", kappa_b),
        ("kappa_p", kappa_p),
    ):
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive and finite")
    if not (math.isfinite(damping) and damping > 0):
        raise ValueError("damping must be positive and finite")
    if not (math.isfinite(rho_max) and rho_max > 0):
        raise ValueError("rho_max must be positive and finite")

    def f(rho: np.ndarray) -> np.ndarray:
        return (
            bessel_j(m_b, kappa_b * rho)
            * bessel_j(m_a, kappa_a * rho)
            * bessel_j(m_a - m_b, kappa_p * rho)
            * rho
            * np.exp(-damping * rho)
        )

    # Half-period of the fastest oscillation keeps each panel single-lobed.
    panel = math.pi / max(kappa_a, kappa_b, kappa_p)
    n_panels = max(8, int(math.ceil(rho_max / panel)))
    edges = np.linspace(0.0, rho_max, n_panels + 1)
    value, _ = integrate_panels(f, edges, rel_tol=1e-10, abs_tol=1e-13)
    return value


def triple_bessel_extrapolate(
    m_a: int,
    m_b: int,
    kappa_a: float,
    kappa_b: float,
    kappa_p: float,
    dampings: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
    rho_max: float | None = None,
) -> float:
    """Oracle value extrapolated to zero damping.

    Runs :func:`triple_bessel_oracle` over a decreasing damping sequence
    and extrapolates polynomially to damping 0 (Richardson/Neville).  Three
    points suffice because the damped integral is analytic in the damping
    parameter.  Raises ``ConvergenceError`` when successive estimates move
    apart instead of settling, which signals a non-convergent configuration
    (for instance a degenerate triangle).
    """
    lams = [float(d) for d in dampings]
    if len(lams) < 2 or any(d <= 0 for d in lams) or any(
        b >= a for a, b in zip(lams, lams[1:])
    ):
        raise ValueError("dampings must be a decreasing sequence of positive values")
    if rho_max is None:
        rho_max = 20.0 / min(lams)
    vals = [
        triple_bessel_oracle(m_a, m_b, kappa_a, kappa_b, kappa_p, lam, rho_max)
        for lam in lams
    ]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    scale = max(abs(v) for v in vals) + 1e-30
    for d_prev, d_next in zip(diffs, diffs[1:]):
        if d_next > d_prev and d_next > 1e-12 * scale:
            raise ConvergenceError(
                f"damping sequence diverges: |diffs| = {diffs!r}"
            )
    # Neville tableau evaluated at damping = 0.
    tableau = list(vals)
    n = len(lams)
    for level in range(1, n):
        for i in range(n - level):
            x0, x1 = lams[i], lams[i + level]
            tableau[i] = (x1 * tableau[i] - x0 * tableau[i + 1]) / (x1 - x0)
    return tableau[0]
