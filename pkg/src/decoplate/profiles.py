"""Separation-dependent decoherence rates.

``quadratic``   Gamma(dx) = (dx / lambda_dB)**2 / tau_r
``saturating``  Gamma(dx) = Gamma_inf (1 - exp(-dx**2 / (2 l_c**2))),
                Gamma_inf = 2 l_c**2 / (tau_r lambda_dB**2)
``none``        Gamma = 0 (coherent reference)

The saturating form has the same small-dx limit as the quadratic one and
levels off at separations beyond the correlation length ``l_c``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quantities import Dim, Quantity, per_second
from .timescales import ExperimentSpec, relaxation_time, thermal_de_broglie

KINDS = ("quadratic", "saturating", "none")


@dataclass(frozen=True)
class DecoherenceProfile:
    kind: str
    tau_r: Quantity
    lambda_dB: Quantity
    correlation_length: Quantity | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown profile kind {self.kind!r}; expected one of {KINDS}")
        tau_r = self.tau_r.to(Dim.TIME)
        lam = self.lambda_dB.to(Dim.LENGTH)
        if not (0 < tau_r < math.inf) or not (0 < lam < math.inf):
            raise DomainError("profile needs finite positive tau_r and lambda_dB")
        if self.kind == "saturating":
            if self.correlation_length is None:
                raise DomainError("saturating profile needs a correlation_length")
            if not 0 < self.correlation_length.to(Dim.LENGTH) < math.inf:
                raise DomainError("correlation_length must be finite and > 0")

    @property
    def saturation_rate(self) -> float:
        """Large-separation limit of the rate (inf for quadratic, 0 for none)."""
        if self.kind == "none":
            return 0.0
        if self.kind == "quadratic":
            return math.inf
        ell = self.correlation_length.value
        return 2 * ell**2 / (self.tau_r.value * self.lambda_dB.value**2)


def rate_array(profile: DecoherenceProfile, dx) -> np.ndarray:
    """Vectorized rate in 1/s for bare separations in metres."""
    dx = np.asarray(dx, dtype=float)
    if np.any(dx < 0) or np.any(np.isnan(dx)):
        raise DomainError("separations must be >= 0")
    if profile.kind == "none":
        return np.zeros_like(dx)
    tau_r = profile.tau_r.value
    lam = profile.lambda_dB.value
    if profile.kind == "quadratic":
        return (dx / lam) ** 2 / tau_r
    ell = profile.correlation_length.value
    return -profile.saturation_rate * np.expm1(-(dx**2) / (2 * ell**2))


def rate(profile: DecoherenceProfile, dx: Quantity) -> Quantity:
    value = dx.to(Dim.LENGTH)
    if value < 0:
        raise DomainError(f"separation must be >= 0, got {value!r}")
    return per_second(float(rate_array(profile, value)))


def influence_exponents(profile: DecoherenceProfile, separations, dt: float) -> np.ndarray:
    """``sum_k Gamma(separations[..., k]) * dt`` along the last axis."""
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    return rate_array(profile, separations).sum(axis=-1) * dt


def influence_factor(profile: DecoherenceProfile,
                     separation_history: Iterable[tuple[Quantity, Quantity]]) -> float:
    """Overlap of the environment states left by two paths.

    ``separation_history`` is a sequence of ``(dx, dt)`` segments; the factor
    is ``exp(-sum Gamma(dx_k) dt_k)``.
    """
    exponent = 0.0
    for dx, dt in separation_history:
        step = dt.to(Dim.TIME)
        if not (0 < step < math.inf):
            raise DomainError(f"segment duration must be finite and > 0, got {step!r}")
        exponent += rate(profile, dx).value * step
    return math.exp(-exponent)


def from_experiment(spec: ExperimentSpec, z: Quantity, kind: str = "quadratic",
                    correlation_length: Quantity | None = None) -> DecoherenceProfile:
    tau_r = relaxation_time(spec.particle, spec.plate, z)
    lam = thermal_de_broglie(spec.particle.mass, spec.environment.temperature)
    return DecoherenceProfile(kind, tau_r, lam, correlation_length)
