"""Photon emission densities for plane-wave and twisted atom beams.

The package models a two-level atom whose center of mass is prepared
either as a plane wave or as a Bessel (twisted) wave and computes the
differential density of spontaneously emitted photons, the exact and
quadrature forms of the twisted master integral, and the transverse-plane
coincidence ring that appears when the recoil momentum is detected
together with the photon.
"""

from .coincidence import (
    DetectorWindow,
    RingGeometry,
    allowed_kappa_p,
    coincidence_density,
    ring_geometry,
    sample_ring,
    tw_pw_matrix_element,
)
from .emission import (
    Channel,
    EmissionProblem,
    IntegralMode,
    ScanResult,
    master_integral_exact,
    master_integral_quad,
    planewave_density,
    scan,
    twisted_density,
    twisted_pair_weight,
)
from .errors import (
    AccuracyError,
    ConfigError,
    ConvergenceError,
    DegenerateBeamError,
    DomainError,
    EmptyChannelError,
    NoEmissionPeakError,
    SingularGeometryError,
    SingularKinematicsError,
    TwistedEmissionError,
)
from .kinematics import (
    BeamKind,
    BeamState,
    PhotonMode,
    RecoilState,
    TransitionLine,
    TriangleGeom,
    beam_energy,
    discontinuity_angles,
    make_triangle,
    recoil_state,
    theta_pw,
)
from .quadrature import QuadratureConfig, integrate, integrate_panels
from .specfun import (
    GaussianDelta,
    bessel_j,
    gaussian_delta,
    triple_bessel_closed,
    triple_bessel_extrapolate,
    triple_bessel_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BeamKind",
    "BeamState",
    "Channel",
    "ConfigError",
    "ConvergenceError",
    "DegenerateBeamError",
    "DetectorWindow",
    "DomainError",
    "EmissionProblem",
    "EmptyChannelError",
    "GaussianDelta",
    "IntegralMode",
    "NoEmissionPeakError",
    "PhotonMode",
    "QuadratureConfig",
    "RecoilState",
    "RingGeometry",
    "ScanResult",
    "SingularGeometryError",
    "SingularKinematicsError",
    "TransitionLine",
    "TriangleGeom",
    "TwistedEmissionError",
    "allowed_kappa_p",
    "beam_energy",
    "bessel_j",
    "coincidence_density",
    "discontinuity_angles",
    "gaussian_delta",
    "integrate",
    "integrate_panels",
    "make_triangle",
    "master_integral_exact",
    "master_integral_quad",
    "planewave_density",
    "recoil_state",
    "ring_geometry",
    "sample_ring",
    "scan",
    "theta_pw",
    "triple_bessel_closed",
    "triple_bessel_extrapolate",
    "triple_bessel_oracle",
    "tw_pw_matrix_element",
    "twisted_density",
    "twisted_pair_weight",
    "__version__",
]
