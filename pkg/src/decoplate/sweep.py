"""Visibility over the (flight height, slit separation) plane."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import interference, profiles, timescales
from .errors import DecoplateError, DomainError
from .quantities import Quantity, metre
from .timescales import ExperimentSpec

COLUMNS = ("z_m", "dx_m", "tau_r_s", "tau_d_s", "t_flight_s", "d_magnitude", "visibility")


@dataclass(frozen=True)
class SweepGrid:
    z_values: tuple[float, ...]
    dx_values: tuple[float, ...]
    spec: ExperimentSpec

    def __post_init__(self):
        for name in ("z_values", "dx_values"):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, values)
            if not values:
                raise DomainError(f"{name} is empty")
            if not all(0 < v < math.inf for v in values):
                raise DomainError(f"{name} must be finite and > 0 (degenerate separation or height)")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise DomainError(f"{name} must be strictly increasing")

    @classmethod
    def spaced(cls, spec: ExperimentSpec, z_min: float, z_max: float, z_count: int,
               dx_min: float, dx_max: float, dx_count: int, spacing: str = "log") -> "SweepGrid":
        if spacing == "log":
            if min(z_min, dx_min) <= 0:
                raise DomainError("log spacing needs positive bounds")
            axis = np.geomspace
        elif spacing == "linear":
            axis = np.linspace
        else:
            raise DomainError(f"spacing must be 'log' or 'linear', got {spacing!r}")
        return cls(tuple(axis(z_min, z_max, z_count)), tuple(axis(dx_min, dx_max, dx_count)), spec)


@dataclass(frozen=True)
class SweepRow:
    z: float
    dx: float
    tau_r: float
    tau_d: float
    t_flight: float
    D_magnitude: float
    visibility: float

    def values(self) -> tuple[float, ...]:
        return (self.z, self.dx, self.tau_r, self.tau_d, self.t_flight, self.D_magnitude, self.visibility)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def column(self, name: str) -> np.ndarray:
        i = COLUMNS.index(name)
        return np.array([row.values()[i] for row in self.rows])


def coherence_factor(spec: ExperimentSpec, z: Quantity, dx: Quantity, profile_kind: str = "quadratic",
                     correlation_length: Quantity | None = None) -> tuple[float, float, float, float]:
    """Return ``(tau_r, tau_d, t_flight, |D|)`` at one grid point.

    ``tau_d`` is ``1 / Gamma(dx)`` for the chosen profile, which reduces to the
    closed-form decoherence time for the quadratic profile.
    """
    rep = timescales.report(spec, z, dx)
    if profile_kind == "quadratic":
        return rep.tau_r.value, rep.tau_d.value, rep.t_flight.value, rep.D_magnitude
    prof = profiles.DecoherenceProfile(profile_kind, rep.tau_r, rep.lambda_dB, correlation_length)
    gamma = profiles.rate(prof, dx).value
    tau_d = math.inf if gamma == 0 else 1 / gamma
    return rep.tau_r.value, tau_d, rep.t_flight.value, math.exp(-gamma * rep.t_flight.value)


def slit_geometry(spec: ExperimentSpec, dx: float) -> interference.SlitGeometry:
    """Screen geometry for slit separation ``dx``.

    Slit width keeps the configured width/separation ratio and the window
    spans the configured number of fringe periods, so envelope flatness is
    the same at every grid point.
    """
    g = spec.geometry
    ratio = g.slit_width / g.slit_separation
    window = None
    if g.window is not None:
        base = interference.SlitGeometry.for_particle(
            spec.particle, g.slit_separation, g.slit_width, g.screen_distance, g.window, g.n_samples)
        window = g.window / base.fringe_period
    geom = interference.SlitGeometry.for_particle(
        spec.particle, dx, ratio * dx, g.screen_distance, None, g.n_samples)
    if window is not None:
        geom = replace(geom, screen_window=window * geom.fringe_period)
    return geom


def evaluate_point(spec: ExperimentSpec, z: float, dx: float, profile_kind: str = "quadratic",
                   correlation_length: Quantity | None = None) -> SweepRow:
    tau_r, tau_d, t_flight, mag = coherence_factor(spec, metre(z), metre(dx), profile_kind,
                                                   correlation_length)
    vis = interference.visibility(interference.pattern(slit_geometry(spec, dx), mag))
    return SweepRow(z, dx, tau_r, tau_d, t_flight, mag, vis)


def run_sweep(grid: SweepGrid, profile_kind: str = "quadratic",
              correlation_length: Quantity | None = None, workers: int = 1) -> SweepResult:
    """Evaluate every grid point; rows come back z-major whatever ``workers`` is."""
    points = [(z, dx) for z in grid.z_values for dx in grid.dx_values]

    def one(point):
        z, dx = point
        try:
            return evaluate_point(grid.spec, z, dx, profile_kind, correlation_length)
        except DecoplateError as exc:
            raise type(exc)(f"at grid point z={z!r} m, dx={dx!r} m: {exc}") from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]
    return SweepResult(tuple(rows))


def crossover_curve(grid: SweepGrid) -> list[tuple[float, float]]:
    return [(dx, timescales.crossing_height(grid.spec, metre(dx)).value) for dx in grid.dx_values]
