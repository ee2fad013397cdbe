"""Command-line interface.

Four subcommands::

    scan      angular density of one channel on a theta_p grid
    compare   plane-wave, twisted-quadrature and twisted-exact side by side
    ring      sample the coincidence ring in the transverse plane
    verify    self-contained oracle suite; exits 1 on any failed check

Parameter precedence is CLI flag > config file > built-in default.  The
config file is a flat ``key = value`` text file; ``--config PATH`` selects
it explicitly, otherwise the ``TWISTED_EMISSION_CONFIG`` environment
variable is consulted.

Exit codes: 0 success, 1 verify failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import coincidence as co
from . import emission as em
from . import kinematics as kin
from . import quadrature as quad
from . import specfun as sf
from .errors import ConfigError, NoEmissionPeakError, TwistedEmissionError

__all__ = ["main", "RunConfig"]

_TWO_PI = 2.0 * math.pi

_CHANNELS = ("planewave", "twisted-exact", "twisted-quad")
_FORMATS = ("csv", "json")

# Threshold below which compare reports the plane-wave-limit deviation.
_LIMIT_THETA_A = 0.05

_FLOAT_KEYS = ("P", "M", "omega", "detuning", "theta_a", "sigma_e", "inset", "kappa_b")
_INT_KEYS = ("m_oam", "n_samples", "seed")
_STR_KEYS = ("grid", "format", "out", "channel")


@dataclass
class RunConfig:
    """Resolved run parameters shared by the subcommands."""

    P: float = 1.0
    M: float = 1.0
    omega: float = 0.1
    detuning: float = 1e-3
    theta_a: float = math.pi / 6
    m_oam: int = 0
    sigma_e: float = 5e-4
    grid: str | None = None
    inset: float = 1e-6
    kappa_b: float | None = None
    n_samples: int = 360
    seed: int = 0
    format: str = "csv"
    out: str | None = None
    channel: str = "twisted-exact"


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        out[key] = value
    return out


def _convert(key: str, value: str):
    try:
        if key in _FLOAT_KEYS:
            v = float(value)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        if key in _INT_KEYS:
            return int(value)
        if key in _STR_KEYS:
            return value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from exc
    raise ConfigError(f"unknown config key {key!r}")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    path = args.config or os.environ.get("TWISTED_EMISSION_CONFIG")
    if path:
        for key, raw in _parse_config_file(path).items():
            setattr(cfg, key, _convert(key, raw))
    for key in (*_FLOAT_KEYS, *_INT_KEYS, *_STR_KEYS):
        flag = getattr(args, key, None)
        if flag is not None:
            cfg = replace(cfg, **{key: flag})
    if cfg.format not in _FORMATS:
        raise ConfigError(f"format must be one of {_FORMATS}, got {cfg.format!r}")
    if cfg.channel not in _CHANNELS:
        raise ConfigError(f"channel must be one of {_CHANNELS}, got {cfg.channel!r}")
    for name in ("P", "M", "omega", "sigma_e"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if cfg.inset < 0:
        raise ConfigError("inset must be non-negative")
    if cfg.n_samples < 1:
        raise ConfigError("n_samples must be at least 1")
    return cfg


def _parse_grid(spec: str) -> tuple[float, float, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like min:max:n, got {spec!r}")
    try:
        gmin, gmax, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"grid must look like min:max:n, got {spec!r}") from exc
    if not (math.isfinite(gmin) and math.isfinite(gmax)):
        raise ConfigError("grid bounds must be finite")
    if not (0.0 <= gmin < gmax <= math.pi):
        raise ConfigError("grid bounds must satisfy 0 <= min < max <= pi")
    if n < 2:
        raise ConfigError("grid needs at least 2 points")
    return gmin, gmax, n


def _build_line(cfg: RunConfig) -> kin.TransitionLine:
    try:
        return kin.TransitionLine(upper=cfg.detuning + cfg.omega, lower=0.0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _twisted_beam(cfg: RunConfig) -> kin.BeamState:
    try:
        return kin.BeamState.twisted(cfg.M, cfg.P, cfg.theta_a, cfg.m_oam)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _problem(cfg: RunConfig, beam: kin.BeamState) -> em.EmissionProblem:
    try:
        return em.EmissionProblem(
            beam, _build_line(cfg), cfg.omega, sf.GaussianDelta(cfg.sigma_e)
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _theta_center(cfg: RunConfig) -> float | None:
    """Plane-wave peak angle for the full beam momentum, if one exists."""
    plane = kin.BeamState.plane_wave(cfg.M, cfg.P)
    try:
        return kin.theta_pw(plane, _build_line(cfg), cfg.omega)
    except NoEmissionPeakError:
        return None


def _build_grid(cfg: RunConfig, drop_near_discontinuities: bool) -> np.ndarray:
    center = _theta_center(cfg)
    if cfg.grid is not None:
        gmin, gmax, n = _parse_grid(cfg.grid)
    elif center is None:
        gmin, gmax, n = 1e-9, math.pi - 1e-9, 2000
    else:
        half = 2.0 * cfg.theta_a if cfg.theta_a > 0 else 0.05
        gmin = max(0.0, center - half)
        gmax = min(math.pi, center + half)
        n = 2000
    grid = np.linspace(gmin, gmax, n)
    if drop_near_discontinuities and center is not None and cfg.inset > 0:
        lo_d = center - cfg.theta_a
        hi_d = center + cfg.theta_a
        keep = (np.abs(grid - lo_d) >= cfg.inset) & (np.abs(grid - hi_d) >= cfg.inset)
        grid = grid[keep]
        if grid.size < 2:
            raise ConfigError("inset removed almost the whole grid")
    return grid


def _echo_pairs(cfg: RunConfig, grid: np.ndarray | None, keys: Sequence[str]) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for key in keys:
        if key == "grid":
            if grid is not None:
                pairs.append(
                    ("grid", f"{_fmt(grid[0])}:{_fmt(grid[-1])}:{grid.size}")
                )
            continue
        value = getattr(cfg, key)
        if value is None:
            continue
        if isinstance(value, float):
            pairs.append((key, _fmt(value)))
        else:
            pairs.append((key, str(value)))
    return pairs


def _write_csv(path: str, echo: list[tuple[str, str]], columns: dict[str, Sequence[float]]) -> None:
    names = list(columns)
    n_rows = len(columns[names[0]])
    lines = [f"# {k}={v}" for k, v in echo]
    lines.append(",".join(names))
    for i in range(n_rows):
        lines.append(",".join(_fmt(columns[name][i]) for name in names))
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: str, echo: list[tuple[str, str]], columns: dict[str, Sequence[float]], extras: dict) -> None:
    obj = {
        "config": dict(echo),
        "columns": {name: [float(v) for v in vals] for name, vals in columns.items()},
    }
    obj.update(extras)
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path!r}: {exc}") from exc


def _write_output(
    cfg: RunConfig,
    default_stem: str,
    echo: list[tuple[str, str]],
    columns: dict[str, Sequence[float]],
    extras: dict,
) -> str:
    path = cfg.out or f"{default_stem}.{cfg.format}"
    if cfg.format == "csv":
        _write_csv(path, echo, columns)
    else:
        _write_json(path, echo, columns, extras)
    return path


def _print_peaks(label: str, peaks: Sequence[float]) -> None:
    if peaks:
        print(f"{label}: " + " ".join(_fmt(p) for p in peaks))
    else:
        print(f"{label}: none")


_SCAN_ECHO = (
    "channel", "P", "M", "omega", "detuning", "theta_a", "m_oam",
    "sigma_e", "grid", "inset", "seed", "format",
)


def cmd_scan(cfg: RunConfig, plot: str | None) -> int:
    if cfg.channel == "planewave":
        beam = kin.BeamState.plane_wave(cfg.M, cfg.P)
        channel = em.Channel.PLANE_WAVE
    else:
        beam = _twisted_beam(cfg)
        channel = em.Channel(cfg.channel)
    problem = _problem(cfg, beam)
    grid = _build_grid(cfg, drop_near_discontinuities=(channel is em.Channel.TWISTED_EXACT))
    result = em.scan(problem, channel, grid)
    raw = result.values * result.scale
    columns = {
        "theta_p": [float(t) for t in result.thetas],
        "density_raw": [float(v) for v in raw],
        "density_normalized": [float(v) for v in result.values],
    }
    center = _theta_center(cfg)
    echo = _echo_pairs(cfg, result.thetas, _SCAN_ECHO)
    extras = {
        "peaks": [float(p) for p in result.peaks],
        "theta_pw": None if center is None else float(center),
    }
    path = _write_output(cfg, "scan", echo, columns, extras)
    print(f"channel: {cfg.channel}")
    print(f"theta_pw: {'none' if center is None else _fmt(center)}")
    _print_peaks("peaks", result.peaks)
    print(f"wrote: {path}")
    if plot:
        from . import plotting

        discs = None
        if center is not None and cfg.channel != "planewave":
            discs = (center - cfg.theta_a, center + cfg.theta_a)
        plotting.plot_scan(
            columns["theta_p"],
            {"density_normalized": columns["density_normalized"]},
            plot,
            theta_pw=center,
            discontinuities=discs,
            title=f"{cfg.channel} angular density",
        )
        print(f"plot: {plot}")
    return 0


def cmd_compare(cfg: RunConfig, plot: str | None) -> int:
    plane_problem = _problem(cfg, kin.BeamState.plane_wave(cfg.M, cfg.P))
    tw_problem = _problem(cfg, _twisted_beam(cfg))
    grid = _build_grid(cfg, drop_near_discontinuities=True)
    res_pw = em.scan(plane_problem, em.Channel.PLANE_WAVE, grid)
    res_quad = em.scan(tw_problem, em.Channel.TWISTED_QUAD, grid)
    res_exact = em.scan(tw_problem, em.Channel.TWISTED_EXACT, grid)
    columns = {
        "theta_p": [float(t) for t in grid],
        "pw": [float(v) for v in res_pw.values],
        "tw_quad": [float(v) for v in res_quad.values],
        "tw_exact": [float(v) for v in res_exact.values],
    }
    center = _theta_center(cfg)
    echo = _echo_pairs(cfg, grid, tuple(k for k in _SCAN_ECHO if k != "channel"))
    extras = {
        "peaks": {
            "pw": [float(p) for p in res_pw.peaks],
            "tw_quad": [float(p) for p in res_quad.peaks],
            "tw_exact": [float(p) for p in res_exact.peaks],
        },
        "theta_pw": None if center is None else float(center),
    }
    limit_dev = None
    if cfg.theta_a <= _LIMIT_THETA_A:
        pw_raw = res_pw.values * res_pw.scale
        quad_raw = res_quad.values * res_quad.scale
        mask = pw_raw > 1e-280
        if mask.any():
            ratio = _TWO_PI**2 * quad_raw[mask] / pw_raw[mask]
            limit_dev = float(np.max(np.abs(ratio - 1.0)))
            extras["limit_deviation"] = limit_dev
    path = _write_output(cfg, "compare", echo, columns, extras)
    print(f"theta_pw: {'none' if center is None else _fmt(center)}")
    _print_peaks("peaks_pw", res_pw.peaks)
    _print_peaks("peaks_tw_quad", res_quad.peaks)
    _print_peaks("peaks_tw_exact", res_exact.peaks)
    if limit_dev is not None:
        print(f"limit_deviation: {_fmt(limit_dev)}")
    print(f"wrote: {path}")
    if plot:
        from . import plotting

        discs = None
        if center is not None:
            discs = (center - cfg.theta_a, center + cfg.theta_a)
        plotting.plot_scan(
            columns["theta_p"],
            {k: columns[k] for k in ("pw", "tw_quad", "tw_exact")},
            plot,
            theta_pw=center,
            discontinuities=discs,
            title="channel comparison",
        )
        print(f"plot: {plot}")
    return 0


_RING_ECHO = ("P", "M", "theta_a", "kappa_b", "n_samples", "seed", "format")


def cmd_ring(cfg: RunConfig, plot: str | None) -> int:
    beam = _twisted_beam(cfg)
    if beam.kappa == 0.0:
        raise ConfigError("ring needs a twisted beam: set theta_a > 0")
    kappa_b = cfg.kappa_b if cfg.kappa_b is not None else 0.5 * beam.kappa
    if kappa_b < 0:
        raise ConfigError("kappa_b must be non-negative")
    geom = co.ring_geometry(beam.kappa, kappa_b)
    points = co.sample_ring(geom, cfg.n_samples)
    cfg_echo = replace(cfg, kappa_b=kappa_b)
    columns = {
        "kappa_x": [p[0] for p in points],
        "kappa_y": [p[1] for p in points],
    }
    echo = _echo_pairs(cfg_echo, None, _RING_ECHO)
    echo.append(("center_x", _fmt(geom.center_x)))
    echo.append(("center_y", _fmt(geom.center_y)))
    echo.append(("radius", _fmt(geom.radius)))
    extras = {
        "center": [float(geom.center_x), float(geom.center_y)],
        "radius": float(geom.radius),
    }
    path = _write_output(cfg_echo, "ring", echo, columns, extras)
    print(f"center: {_fmt(geom.center_x)} {_fmt(geom.center_y)}")
    print(f"radius: {_fmt(geom.radius)}")
    print(f"wrote: {path}")
    if plot:
        from . import plotting

        plotting.plot_ring(
            points,
            (geom.center_x, geom.center_y),
            geom.radius,
            plot,
            title="coincidence ring",
        )
        print(f"plot: {plot}")
    return 0


# ---------------------------------------------------------------------------
# verify: self-contained oracle suite


def _check_bessel_recurrence() -> tuple[float, float]:
    worst = 0.0
    for m in (-64, -33, -8, -2, 0, 3, 17, 64):
        for x in (0.3, 1.0, 3.7, 10.0, 42.5, 100.0):
            lhs = sf.bessel_j(m - 1, x) + sf.bessel_j(m + 1, x)
            rhs = 2.0 * m / x * sf.bessel_j(m, x)
            worst = max(worst, abs(lhs - rhs))
    return worst, 1e-10


def _check_bessel_reflection() -> tuple[float, float]:
    worst = 0.0
    for m in range(1, 65):
        for x in (0.5, 2.0, 17.0, 64.0, 99.5):
            worst = max(
                worst, abs(sf.bessel_j(-m, x) - (-1.0) ** m * sf.bessel_j(m, x))
            )
    return worst, 1e-15


def _check_gaussian_norm() -> tuple[float, float]:
    delta = sf.GaussianDelta(5e-4)
    value, _ = quad.integrate(
        lambda e: sf.gaussian_delta(e, delta),
        -12 * delta.sigma_e,
        12 * delta.sigma_e,
        spikes=[(0.0, delta.sigma_e)],
    )
    return abs(value - 1.0), 1e-8


def _check_quadrature_analytic() -> tuple[float, float]:
    cases: list[tuple[Callable[[float], float], float, float, float, list | None]] = [
        (lambda x: x * x, 0.0, 1.0, 1.0 / 3.0, None),
        (math.sin, 0.0, math.pi, 2.0, None),
        (lambda x: 1.0 / math.sqrt(x), 0.0, 1.0, 2.0, None),
        (math.log, 0.0, 1.0, -1.0, None),
        (
            lambda x: math.exp(-0.5 * ((x - 0.3) / 1e-5) ** 2) / (1e-5 * math.sqrt(2 * math.pi)),
            0.0,
            1.0,
            1.0,
            [(0.3, 1e-5)],
        ),
    ]
    worst = 0.0
    for f, a, b, truth, spikes in cases:
        value, _ = quad.integrate(f, a, b, spikes=spikes)
        worst = max(worst, abs(value - truth) / max(1.0, abs(truth)))
    return worst, 1e-8


_ORACLE_CASES = (
    (0, 0, (5.0, 4.0, 3.0)),
    (1, 2, (5.0, 4.0, 3.0)),
    (0, 1, (2.0, 2.0, 2.0)),
    (2, 2, (2.0, 2.0, 2.0)),
    (1, 0, (3.0, 2.2, 1.5)),
    (3, 1, (5.0, 4.5, 2.1)),
    (0, 2, (1.0, 0.8, 0.5)),
    (2, -1, (4.0, 3.3, 1.2)),
    (-2, 1, (5.0, 4.0, 3.0)),
    (1, 1, (2.4, 1.7, 1.1)),
)


def _check_triple_bessel(full: bool) -> tuple[float, float]:
    cases = _ORACLE_CASES if full else _ORACLE_CASES[:3]
    worst = 0.0
    for m_a, m_b, sides in cases:
        tri = kin.make_triangle(*sides)
        closed = sf.triple_bessel_closed(m_a, m_b, tri)
        oracle = sf.triple_bessel_extrapolate(m_a, m_b, *sides)
        worst = max(worst, abs(oracle - closed) / abs(closed))
    return worst, 1e-3


def _reference_problem(theta_a: float) -> tuple[em.EmissionProblem, em.EmissionProblem, float]:
    beam_tw = kin.BeamState.twisted(1.0, 1.0, theta_a)
    beam_pw = kin.BeamState.plane_wave(1.0, 1.0)
    line = kin.TransitionLine(upper=0.101, lower=0.0)
    delta = sf.GaussianDelta(5e-4)
    tw = em.EmissionProblem(beam_tw, line, 0.1, delta)
    pw = em.EmissionProblem(beam_pw, line, 0.1, delta)
    center = kin.theta_pw(beam_pw, line, 0.1)
    return tw, pw, center


def _check_exact_vs_quad(full: bool) -> tuple[float, float]:
    theta_a = math.pi / 6
    tw, _, center = _reference_problem(theta_a)
    n = 101 if full else 21
    margin = 0.05
    grid = np.linspace(center - theta_a + margin, center + theta_a - margin, n)
    worst = 0.0
    for t in grid:
        exact = em.master_integral_exact(tw, float(t))
        approx = em.master_integral_quad(tw, float(t))
        worst = max(worst, abs(approx - exact) / exact)
    return worst, 0.02


def _check_planewave_limit(full: bool) -> tuple[float, float]:
    theta_a = 1e-3
    tw, pw, center = _reference_problem(theta_a)
    n = 41 if full else 21
    grid = np.linspace(center - 2 * theta_a, center + 2 * theta_a, n)
    worst = 0.0
    for t in grid:
        ratio = (
            _TWO_PI**2
            * em.twisted_density(tw, float(t), em.IntegralMode.QUADRATURE)
            / em.planewave_density(pw, float(t))
        )
        worst = max(worst, abs(ratio - 1.0))
    return worst, 0.01


def _check_partial_sum(full: bool) -> tuple[float, float]:
    n_max = 10_000 if full else 1_000
    tri = kin.make_triangle(5.0, 4.0, 3.0)
    total = 0.0
    for m_b in range(-n_max, n_max + 1):
        total += sf.triple_bessel_closed(1, m_b, tri) ** 2
    mean = total / (2 * n_max + 1)
    target = 1.0 / (2.0 * (_TWO_PI * tri.area) ** 2)
    return abs(mean / target - 1.0), 0.05


def _check_ring_roots() -> tuple[float, float]:
    rng = np.random.default_rng(20260819)
    worst = 0.0
    for _ in range(500):
        ka = float(rng.uniform(0.1, 2.0))
        kb = float(rng.uniform(0.0, 2.5))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        for kp in co.allowed_kappa_p(ka, kb, phi):
            x = kp * math.cos(phi) + kb
            y = kp * math.sin(phi)
            worst = max(worst, abs(math.hypot(x, y) - ka))
    geom = co.ring_geometry(1.0, 0.5)
    for px, py in co.sample_ring(geom, 257):
        worst = max(
            worst,
            abs(math.hypot(px - geom.center_x, py - geom.center_y) - geom.radius),
        )
    return worst, 1e-10


def _check_triangle_gate(full: bool) -> tuple[float, float]:
    n = 100_000 if full else 2_000
    rng = np.random.default_rng(715)
    tw, _, _ = _reference_problem(math.pi / 6)
    worst = 0.0
    checked = 0
    while checked < n:
        theta_a = float(rng.uniform(1e-3, 1.2))
        beam = kin.BeamState.twisted(
            float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.1, 2.0)), theta_a
        )
        omega = float(rng.uniform(0.01, 0.5))
        upper = omega + float(rng.uniform(-0.5, 1.0)) * 0.05
        if upper <= 0:
            continue
        line = kin.TransitionLine(upper=upper, lower=0.0)
        try:
            problem = em.EmissionProblem(beam, line, omega, tw.delta)
        except ValueError:
            continue
        theta_p = float(rng.uniform(0.0, math.pi))
        kp = omega * math.sin(theta_p)
        rec = kin.recoil_state(beam, line, kin.PhotonMode(omega, theta_p))
        u = -1.0 if rec is None else rec.kappa_b ** 2
        lo = (beam.kappa - kp) ** 2
        hi = (beam.kappa + kp) ** 2
        pad = 1e-9 * max(1.0, hi)
        if lo - pad < u < hi + pad:
            continue
        worst = max(worst, abs(em.master_integral_exact(problem, theta_p)))
        checked += 1
    return worst, 0.0


def cmd_verify(level: str) -> int:
    full = level == "full"
    checks: list[tuple[str, Callable[[], tuple[float, float]]]] = [
        ("bessel_recurrence", _check_bessel_recurrence),
        ("bessel_reflection", _check_bessel_reflection),
        ("gaussian_delta_norm", _check_gaussian_norm),
        ("quadrature_analytic", _check_quadrature_analytic),
        ("triple_bessel_closed_vs_oracle", lambda: _check_triple_bessel(full)),
        ("master_integral_exact_vs_quad", lambda: _check_exact_vs_quad(full)),
        ("planewave_limit", lambda: _check_planewave_limit(full)),
        ("partial_sum_scaling", lambda: _check_partial_sum(full)),
        ("ring_roots_on_circle", _check_ring_roots),
        ("triangle_gate_zero_outside", lambda: _check_triangle_gate(full)),
    ]
    failures = 0
    print(f"verify level: {level}")
    for name, fn in checks:
        try:
            measured, limit = fn()
            ok = measured <= limit
        except TwistedEmissionError as exc:
            measured, limit, ok = math.nan, math.nan, False
            detail = f" ({exc})"
        else:
            detail = ""
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{status}  {name:<32} measured={measured:.3e} limit={limit:.3e}{detail}")
    total = len(checks)
    print(f"verify: {'PASS' if failures == 0 else 'FAIL'} ({total - failures}/{total})")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--P", type=float, help="beam momentum")
    parser.add_argument("--M", type=float, help="atom mass")
    parser.add_argument("--omega", type=float, help="photon energy")
    parser.add_argument(
        "--detuning", type=float, help="upper - lower - omega level mismatch"
    )
    parser.add_argument("--theta-a", dest="theta_a", type=float, help="beam opening angle (rad)")
    parser.add_argument("--m-oam", dest="m_oam", type=int, help="beam orbital angular momentum")
    parser.add_argument("--sigma-e", dest="sigma_e", type=float, help="energy delta width")
    parser.add_argument("--grid", type=str, help="theta grid as min:max:n")
    parser.add_argument("--inset", type=float, help="exclusion half-width around exact discontinuities (rad)")
    parser.add_argument("--kappa-b", dest="kappa_b", type=float, help="detected transverse recoil momentum")
    parser.add_argument("--n-samples", dest="n_samples", type=int, help="ring sample count")
    parser.add_argument("--seed", type=int, help="seed echoed into outputs")
    parser.add_argument("--format", choices=_FORMATS, help="output format")
    parser.add_argument("--out", type=str, help="output path")
    parser.add_argument("--config", type=str, help="flat key=value config file")
    parser.add_argument("--plot", type=str, help="also render a figure to this path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twisted-emission",
        description="Photon emission densities for plane-wave and twisted atom beams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="angular density of one channel")
    p_scan.add_argument("--channel", choices=_CHANNELS, help="density channel")
    _add_common_flags(p_scan)

    p_compare = sub.add_parser("compare", help="all channels on a shared grid")
    _add_common_flags(p_compare)

    p_ring = sub.add_parser("ring", help="sample the coincidence ring")
    _add_common_flags(p_ring)

    p_verify = sub.add_parser("verify", help="run the oracle suite")
    p_verify.add_argument("--level", choices=("fast", "full"), default="fast")
    _add_common_flags(p_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.level)
        cfg = _resolve_config(args)
        if args.command == "scan":
            return cmd_scan(cfg, args.plot)
        if args.command == "compare":
            return cmd_compare(cfg, args.plot)
        if args.command == "ring":
            return cmd_ring(cfg, args.plot)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TwistedEmissionError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
