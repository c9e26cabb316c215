"""Closed-form time scales for a charge flying over a resistive plate.

Bare conductor (scaling exponent 3)::

    P_joule = q**2 rho v**2 / (16 pi z**3)
    tau_r   = m v**2 / P_joule = 16 pi z**3 m / (q**2 rho)
    tau_d   = tau_r (lambda_dB / dx)**2,   lambda_dB = h / sqrt(2 m k_B T)

With an insulating over-layer the dissipation goes as z**-4 and there is no
absolute coefficient, so ``tau_r`` is calibrated from a reference point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import optimize

from .errors import DomainError, NumericError, UnsupportedModelError
from .interference import GeometrySpec
from .quantities import (
    CODATA2018,
    Dim,
    ParticleSpec,
    Quantity,
    kelvin,
    metre,
    second,
    watt,
)

DEFAULT_TEMPERATURE = 300.0  # K


@dataclass(frozen=True)
class PlateSpec:
    resistivity: Quantity
    length_along_flight: Quantity
    scaling_exponent: int = 3
    reference_height: Quantity | None = None
    reference_relaxation_time: Quantity | None = None

    def __post_init__(self):
        self.resistivity.to(Dim.RESISTIVITY)
        if not self.length_along_flight.to(Dim.LENGTH) > 0:
            raise DomainError("plate length must be > 0")
        if self.scaling_exponent not in (3, 4):
            raise DomainError(f"scaling exponent must be 3 or 4, got {self.scaling_exponent!r}")
        if self.scaling_exponent == 4:
            if self.reference_height is None or self.reference_relaxation_time is None:
                raise DomainError("scaling exponent 4 needs reference_height and reference_relaxation_time")
            if not self.reference_height.to(Dim.LENGTH) > 0:
                raise DomainError("reference height must be > 0")
            t = self.reference_relaxation_time.to(Dim.TIME)
            if not (0 < t < math.inf):
                raise DomainError("reference relaxation time must be finite and > 0")


@dataclass(frozen=True)
class EnvironmentSpec:
    temperature: Quantity = field(default_factory=lambda: kelvin(DEFAULT_TEMPERATURE))

    def __post_init__(self):
        self.temperature.to(Dim.TEMPERATURE)


@dataclass(frozen=True)
class ExperimentSpec:
    particle: ParticleSpec
    plate: PlateSpec
    environment: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    geometry: GeometrySpec = field(default_factory=GeometrySpec)


@dataclass(frozen=True)
class TimescaleReport:
    p_joule: Quantity | None  # None for the calibrated z**-4 model
    tau_r: Quantity
    lambda_dB: Quantity
    tau_d: Quantity
    t_flight: Quantity
    D_magnitude: float

    def as_dict(self) -> dict:
        return {
            "p_joule_w": None if self.p_joule is None else self.p_joule.value,
            "tau_r_s": self.tau_r.value,
            "lambda_db_m": self.lambda_dB.value,
            "tau_d_s": self.tau_d.value,
            "t_flight_s": self.t_flight.value,
            "d_magnitude": self.D_magnitude,
        }


def _height(z: Quantity) -> float:
    value = z.to(Dim.LENGTH)
    if not (0 < value < math.inf):
        raise DomainError(f"height z must be finite and > 0, got {value!r}")
    return value


def joule_heating(particle: ParticleSpec, plate: PlateSpec, z: Quantity) -> Quantity:
    z = _height(z)
    if plate.scaling_exponent != 3:
        raise UnsupportedModelError("no absolute Joule power is available for the z**-4 (insulator) model")
    q = particle.charge.value
    rho = plate.resistivity.value
    v = particle.speed.value
    return watt(q * q * rho * v * v / (16 * math.pi * z**3))


def relaxation_time(particle: ParticleSpec, plate: PlateSpec, z: Quantity) -> Quantity:
    z = _height(z)
    if plate.scaling_exponent == 4:
        ratio = z / plate.reference_height.value
        return second(plate.reference_relaxation_time.value * ratio**4)
    q = particle.charge.value
    # m v**2 / P_joule with v cancelled
    return second(16 * math.pi * z**3 * particle.mass.value / (q * q * plate.resistivity.value))


def thermal_de_broglie(mass: Quantity, temperature: Quantity) -> Quantity:
    m = mass.to(Dim.MASS)
    t = temperature.to(Dim.TEMPERATURE)
    return metre(CODATA2018.h / math.sqrt(2 * m * CODATA2018.k_B * t))


def decoherence_time(tau_r: Quantity, lambda_dB: Quantity, dx: Quantity) -> Quantity:
    """Time for two paths ``dx`` apart to lose coherence; infinite for ``dx == 0``."""
    tau_r = tau_r.to(Dim.TIME)
    lam = lambda_dB.to(Dim.LENGTH)
    dx = dx.to(Dim.LENGTH)
    if dx == 0:
        return second(math.inf)
    return second(tau_r * (lam / dx) ** 2)


def time_of_flight(spec: ExperimentSpec) -> Quantity:
    return spec.plate.length_along_flight / spec.particle.speed


def report(spec: ExperimentSpec, z: Quantity, dx: Quantity) -> TimescaleReport:
    p_joule = None
    if spec.plate.scaling_exponent == 3:
        p_joule = joule_heating(spec.particle, spec.plate, z)
    tau_r = relaxation_time(spec.particle, spec.plate, z)
    lam = thermal_de_broglie(spec.particle.mass, spec.environment.temperature)
    tau_d = decoherence_time(tau_r, lam, dx)
    t_flight = time_of_flight(spec)
    return TimescaleReport(
        p_joule=p_joule,
        tau_r=tau_r,
        lambda_dB=lam,
        tau_d=tau_d,
        t_flight=t_flight,
        D_magnitude=math.exp(-t_flight.value / tau_d.value),
    )


def _tau_d_at(spec: ExperimentSpec, z: float, dx: Quantity) -> float:
    tau_r = relaxation_time(spec.particle, spec.plate, metre(z))
    lam = thermal_de_broglie(spec.particle.mass, spec.environment.temperature)
    return decoherence_time(tau_r, lam, dx).value


def _reference_height(spec: ExperimentSpec) -> float:
    if spec.plate.scaling_exponent == 4:
        return spec.plate.reference_height.value
    return spec.geometry.z


def crossing_height_closed_form(spec: ExperimentSpec, dx: Quantity) -> Quantity:
    dx = _separation(dx)
    z_ref = _reference_height(spec)
    n = spec.plate.scaling_exponent
    t_flight = time_of_flight(spec).value
    return metre(z_ref * (t_flight / _tau_d_at(spec, z_ref, dx)) ** (1.0 / n))


def crossing_height_bisect(spec: ExperimentSpec, dx: Quantity, lo: float, hi: float,
                           rtol: float = 1e-13) -> Quantity:
    """Bisection on ``log(tau_d(z) / t_flight)`` over ``[lo, hi]``."""
    dx = _separation(dx)
    if not (0 < lo < hi < math.inf):
        raise DomainError(f"invalid search interval [{lo!r}, {hi!r}]")
    t_flight = time_of_flight(spec).value

    def f(log_z):
        return math.log(_tau_d_at(spec, math.exp(log_z), dx) / t_flight)

    a, b = math.log(lo), math.log(hi)
    fa, fb = f(a), f(b)
    if fa == 0:
        return metre(lo)
    if fb == 0:
        return metre(hi)
    if fa * fb > 0:
        raise NumericError(f"interval [{lo:g}, {hi:g}] m does not bracket tau_d(z) = t_flight")
    # tolerance in log z is a relative tolerance in z
    root = optimize.bisect(f, a, b, xtol=rtol, rtol=4 * 2.3e-16, maxiter=400)
    return metre(math.exp(root))


def crossing_height(spec: ExperimentSpec, dx: Quantity, rtol: float = 1e-10) -> Quantity:
    """Height at which the decoherence time equals the time of flight.

    Returns the power-law closed form after confirming it against an
    independent bisection to ``rtol``.
    """
    closed = crossing_height_closed_form(spec, dx).value
    lo, hi = _bracket(spec, dx)
    z = crossing_height_bisect(spec, dx, lo, hi).value
    if abs(z - closed) > rtol * closed:
        raise NumericError(f"closed form {closed!r} and bisection {z!r} disagree beyond {rtol}")
    return metre(closed)


def _bracket(spec: ExperimentSpec, dx: Quantity, max_decades: int = 40) -> tuple[float, float]:
    # tau_d grows with z, so widen geometrically around the reference height
    t_flight = time_of_flight(spec).value
    z_ref = _reference_height(spec)
    lo, hi = z_ref / 2, z_ref * 2
    for _ in range(max_decades):
        if _tau_d_at(spec, lo, dx) <= t_flight <= _tau_d_at(spec, hi, dx):
            return lo, hi
        lo, hi = lo / 10, hi * 10
    raise NumericError(f"no bracket for tau_d(z) = t_flight within {max_decades} decades")


def _separation(dx: Quantity) -> Quantity:
    value = dx.to(Dim.LENGTH)
    if not (0 < value < math.inf):
        raise DomainError(f"separation dx must be finite and > 0, got {value!r}")
    return dx
