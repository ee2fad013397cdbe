"""Special functions: Bessel evaluations, Gaussian delta, triple-Bessel forms.

The Bessel oracle here is a truncated ascending power series, written
independently of the implementation so the two can disagree.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_emission.errors import (
    ConvergenceError,
    DomainError,
    SingularGeometryError,
)
from twisted_emission.kinematics import make_triangle
from twisted_emission.quadrature import integrate
from twisted_emission.specfun import (
    GaussianDelta,
    bessel_j,
    gaussian_delta,
    triple_bessel_closed,
    triple_bessel_extrapolate,
    triple_bessel_oracle,
)

# First positive zero of J_0, found below by bisecting the power series.
J0_FIRST_ZERO = 2.404825557695773


def series_j(m: int, x: float, terms: int = 60) -> float:
    """Ascending series for J_m(x), m >= 0.  Good to ~1e-14 for x <= 12."""
    half = 0.5 * x
    term = half**m / math.factorial(m)
    total = term
    for k in range(1, terms):
        term *= -(half * half) / (k * (k + m))
        total += term
    return total


def test_series_oracle_finds_frozen_j0_zero() -> None:
    lo, hi = 2.0, 3.0
    assert series_j(0, lo) > 0 > series_j(0, hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if series_j(0, mid) > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    assert abs(root - J0_FIRST_ZERO) < 1e-13
    assert abs(bessel_j(0, J0_FIRST_ZERO)) < 1e-13


@pytest.mark.parametrize("m", [0, 1, 2, 3, 5, 9])
def test_bessel_matches_series(m: int) -> None:
    # The alternating series cancels to ~1e-12 near x = 12; the bound
    # reflects the oracle's roundoff, not the implementation's.
    for x in np.linspace(0.0, 12.0, 49):
        assert abs(bessel_j(m, float(x)) - series_j(m, float(x))) < 1e-11


def test_bessel_array_matches_scalar() -> None:
    x = np.linspace(0.0, 30.0, 301)
    arr = bessel_j(3, x)
    assert isinstance(arr, np.ndarray)
    assert arr.shape == x.shape
    for xi, vi in zip(x[::25], arr[::25]):
        assert vi == bessel_j(3, float(xi))


def test_bessel_reflection_is_exact() -> None:
    # Negative orders reuse the positive-order path, so the sign relation
    # holds bitwise, not merely to rounding.
    for m in range(1, 65):
        for x in (0.05, 1.0, 7.3, 64.0, 99.9):
            expected = bessel_j(m, x) if m % 2 == 0 else -bessel_j(m, x)
            assert bessel_j(-m, x) == expected


@settings(max_examples=150, deadline=None, derandomize=True)
@given(
    m=st.integers(min_value=-64, max_value=64),
    x=st.floats(min_value=1e-2, max_value=100.0, allow_nan=False),
)
def test_bessel_recurrence(m: int, x: float) -> None:
    lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x)
    rhs = 2.0 * m / x * bessel_j(m, x)
    assert abs(lhs - rhs) < 1e-10


def test_bessel_domain_errors() -> None:
    with pytest.raises(DomainError):
        bessel_j(2, -1.0)
    with pytest.raises(DomainError):
        bessel_j(2, math.nan)
    with pytest.raises(DomainError):
        bessel_j(0, np.array([1.0, -2.0]))


def test_gaussian_delta_basics() -> None:
    delta = GaussianDelta(sigma_e=5e-4)
    peak = gaussian_delta(0.0, delta)
    assert abs(peak - 1.0 / (5e-4 * math.sqrt(2 * math.pi))) < 1e-9
    assert gaussian_delta(1e-3, delta) == gaussian_delta(-1e-3, delta)
    with pytest.raises(ValueError):
        GaussianDelta(sigma_e=0.0)
    with pytest.raises(DomainError):
        gaussian_delta(math.inf, delta)


def test_gaussian_delta_unit_mass() -> None:
    delta = GaussianDelta(sigma_e=3e-3)
    value, _ = integrate(
        lambda e: gaussian_delta(e, delta),
        -0.05,
        0.05,
        spikes=[(0.0, delta.sigma_e)],
    )
    assert abs(value - 1.0) < 1e-10


class TestTripleBesselClosed:
    def test_classic_345_triangle(self) -> None:
        tri = make_triangle(5.0, 4.0, 3.0)
        value = triple_bessel_closed(0, 0, tri)
        assert abs(value - 1.0 / (12.0 * math.pi)) < 1e-15

    def test_equilateral_phases(self) -> None:
        tri = make_triangle(2.0, 2.0, 2.0)
        # Interior angles are pi/3, so the outer phase is pi/3 and the
        # recoil phase is its supplement 2*pi/3; the cosine comes out -1/2.
        expected = -0.5 / (2.0 * math.pi * math.sqrt(3.0))
        assert abs(triple_bessel_closed(0, 1, tri) - expected) < 1e-15
        assert abs(triple_bessel_closed(2, 2, tri) - expected) < 1e-15

    def test_invalid_triangle_is_exactly_zero(self) -> None:
        tri = make_triangle(5.0, 1.0, 1.0)
        assert triple_bessel_closed(0, 0, tri) == 0.0
        assert triple_bessel_closed(3, -7, tri) == 0.0

    def test_degenerate_triangle_raises(self) -> None:
        tri = make_triangle(2.0, 1.0, 1.0)
        with pytest.raises(SingularGeometryError):
            triple_bessel_closed(0, 0, tri)


def test_oracle_agrees_with_closed_form_quickly() -> None:
    # One cheap case here; the full ten-case sweep lives in the acceptance
    # suite with its runtime budget.
    tri = make_triangle(5.0, 4.0, 3.0)
    closed = triple_bessel_closed(1, 2, tri)
    oracle = triple_bessel_extrapolate(1, 2, 5.0, 4.0, 3.0)
    assert abs(oracle - closed) / abs(closed) < 1e-6


def test_oracle_single_damping_is_biased_but_close() -> None:
    tri = make_triangle(5.0, 4.0, 3.0)
    closed = triple_bessel_closed(0, 0, tri)
    raw = triple_bessel_oracle(0, 0, 5.0, 4.0, 3.0, damping=1e-2, rho_max=2000.0)
    # Finite damping shifts the value; extrapolation is what removes the bias.
    assert abs(raw - closed) / abs(closed) < 0.05
    assert abs(raw - closed) > 1e-6


def test_extrapolate_rejects_bad_damping_sequences() -> None:
    for bad in [(1e-3, 5e-3), (1e-2,), (1e-2, -1e-3), (1e-2, 1e-2)]:
        with pytest.raises(ValueError):
            triple_bessel_extrapolate(0, 0, 5.0, 4.0, 3.0, dampings=bad)


def test_extrapolate_flags_degenerate_divergence() -> None:
    # On the triangle boundary the zero-damping limit does not exist; the
    # damped values grow as the damping shrinks and that must be reported,
    # not extrapolated through.
    with pytest.raises(ConvergenceError):
        triple_bessel_extrapolate(2, 1, 2.0, 1.0, 1.0)
