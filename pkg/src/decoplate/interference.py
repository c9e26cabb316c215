"""Far-field double-slit pattern with a complex decoherence factor.

For equal-amplitude slits a distance ``d`` apart, each of width ``a``::

    P(Q) ~ sinc**2(pi a Q / (lam L)) * (1 + |D| cos(2 pi d Q / (lam L) + arg D))

so the fringe visibility equals ``|D|`` when the envelope is flat over a
fringe period.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError
from .quantities import CODATA2018, ParticleSpec

DEFAULT_SAMPLES = 2001
DEFAULT_WINDOW_PERIODS = 3.0
ENVELOPE_FLATNESS = 0.05


class EnvelopeWarning(UserWarning):
    """The single-slit envelope varies by more than 5% across the central fringe."""


@dataclass(frozen=True)
class GeometrySpec:
    """Experiment geometry as configured, independent of the particle.

    ``window`` of ``None`` means +/- ``DEFAULT_WINDOW_PERIODS`` fringe periods.
    """

    z: float = 1e-4
    slit_separation: float = 1e-4
    slit_width: float = 1e-7
    screen_distance: float = 1.0
    window: float | None = None
    n_samples: int = DEFAULT_SAMPLES


@dataclass(frozen=True)
class SlitGeometry:
    slit_separation: float
    slit_width: float
    screen_distance: float
    motion_wavelength: float
    screen_window: float
    n_samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if not (0 < self.slit_width < self.slit_separation < math.inf):
            raise GeometryError(
                f"need 0 < slit_width < slit_separation, got {self.slit_width!r}, {self.slit_separation!r}")
        if not (0 < self.screen_distance < math.inf):
            raise GeometryError("screen_distance must be > 0")
        if not (0 < self.motion_wavelength < math.inf):
            raise GeometryError("motion_wavelength must be > 0")
        if not (0 < self.screen_window < math.inf):
            raise GeometryError("screen_window must be > 0")
        if int(self.n_samples) != self.n_samples or self.n_samples < 16:
            raise GeometryError(f"n_samples must be an integer >= 16, got {self.n_samples!r}")

    @property
    def fringe_period(self) -> float:
        return self.motion_wavelength * self.screen_distance / self.slit_separation

    @classmethod
    def for_particle(cls, particle: ParticleSpec, slit_separation: float, slit_width: float,
                     screen_distance: float, window: float | None = None,
                     n_samples: int = DEFAULT_SAMPLES) -> "SlitGeometry":
        """Geometry with the de Broglie wavelength h/(m v) of the beam particle."""
        lam = CODATA2018.h / (particle.mass.value * particle.speed.value)
        if window is None:
            window = DEFAULT_WINDOW_PERIODS * lam * screen_distance / slit_separation
        return cls(slit_separation, slit_width, screen_distance, lam, window, n_samples)


@dataclass(frozen=True)
class Pattern:
    positions: np.ndarray
    density: np.ndarray
    normalization: float
    envelope: np.ndarray
    fringe_period: float

    @property
    def spacing(self) -> float:
        return float(self.positions[1] - self.positions[0])


def screen_positions(window: float, n_samples: int) -> np.ndarray:
    # built from offsets about the centre so the grid is exactly symmetric
    offsets = np.arange(n_samples) - (n_samples - 1) / 2
    return offsets * (2 * window / (n_samples - 1))


def pattern(geom: SlitGeometry, D: complex = 1.0) -> Pattern:
    mag = abs(D)
    if mag > 1 + 1e-12 or math.isnan(mag):
        raise DomainError(f"|D| must be <= 1, got {mag!r}")
    mag = min(mag, 1.0)
    phase = cmath.phase(D) if mag > 0 else 0.0

    q = screen_positions(geom.screen_window, geom.n_samples)
    scale = geom.motion_wavelength * geom.screen_distance
    envelope = np.sinc(geom.slit_width * q / scale) ** 2
    fringes = 1.0 + mag * np.cos(2 * np.pi * geom.slit_separation * q / scale + phase)
    density = np.maximum(envelope * fringes, 0.0)
    return Pattern(
        positions=q,
        density=density,
        normalization=float(np.trapezoid(density, q)),
        envelope=envelope,
        fringe_period=geom.fringe_period,
    )


def _refine(y: np.ndarray, i: int) -> float:
    """Parabolic estimate of the extremum value near sample ``i``."""
    if i == 0 or i == len(y) - 1:
        return float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curvature = y0 - 2 * y1 + y2
    if curvature == 0:
        return float(y1)
    return float(y1 - (y0 - y2) ** 2 / (8 * curvature))


def envelope_variation(p: Pattern) -> float:
    window = np.abs(p.positions) <= p.fringe_period / 2
    env = p.envelope[window]
    return float((env.max() - env.min()) / env.max())


def visibility(p: Pattern) -> float:
    """Fringe visibility (P_max - P_min) / (P_max + P_min) over the central period.

    Extremum values are refined by a three-point parabola so the result does
    not depend on whether a sample lands exactly on a fringe extremum.
    Warns with :class:`EnvelopeWarning` when the envelope is not flat enough
    for the result to equal ``|D|``.
    """
    half = p.fringe_period / 2
    q = p.positions
    if q[-1] - q[0] < p.fringe_period * (1 - 1e-9):
        raise GeometryError(
            f"screen window {q[-1] - q[0]:g} m is narrower than one fringe period {p.fringe_period:g} m")
    window = np.flatnonzero(np.abs(q) <= half * (1 + 1e-12))
    if len(window) < 8:
        raise GeometryError(f"only {len(window)} samples across the central fringe period")
    if envelope_variation(p) > ENVELOPE_FLATNESS:
        warnings.warn(
            f"envelope varies by {envelope_variation(p):.3g} across the central fringe period",
            EnvelopeWarning, stacklevel=2)

    y = p.density
    local = y[window]
    i_max = window[int(np.argmax(local))]
    i_min = window[int(np.argmin(local))]
    p_max = max(_refine(y, i_max), float(y[i_max]))
    p_min = min(max(_refine(y, i_min), 0.0), float(y[i_min]))
    if p_max + p_min <= 0:
        raise GeometryError("pattern vanishes over the central fringe period")
    return float(np.clip((p_max - p_min) / (p_max + p_min), 0.0, 1.0))
