"""Unit-tagged SI scalars, CODATA 2018 constants and particle presets.

The dimension system is a closed set of tags rather than a general
exponent-vector algebra: only the combinations this package needs are legal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError, DimensionError, DomainError


class Dim(str, Enum):
    MASS = "mass_kg"
    CHARGE = "charge_C"
    LENGTH = "length_m"
    TIME = "time_s"
    SPEED = "speed_m_per_s"
    TEMPERATURE = "temperature_K"
    RESISTIVITY = "resistivity_ohm_m"
    POWER = "power_W"
    RATE = "rate_per_s"
    DIMENSIONLESS = "dimensionless"


# must be strictly positive on construction
_POSITIVE = {Dim.MASS, Dim.TEMPERATURE, Dim.RESISTIVITY}
# may be zero (coincident paths, empty histories) or +inf (tau_d at dx=0), never negative
_NON_NEGATIVE = {Dim.LENGTH, Dim.TIME, Dim.SPEED, Dim.POWER, Dim.RATE}

_MUL = {
    (Dim.SPEED, Dim.TIME): Dim.LENGTH,
    (Dim.TIME, Dim.SPEED): Dim.LENGTH,
    (Dim.RATE, Dim.TIME): Dim.DIMENSIONLESS,
    (Dim.TIME, Dim.RATE): Dim.DIMENSIONLESS,
}

_DIV = {
    (Dim.LENGTH, Dim.TIME): Dim.SPEED,
    (Dim.LENGTH, Dim.SPEED): Dim.TIME,
    (Dim.DIMENSIONLESS, Dim.TIME): Dim.RATE,
    (Dim.DIMENSIONLESS, Dim.RATE): Dim.TIME,
}


@dataclass(frozen=True)
class Quantity:
    value: float
    dim: Dim

    def __post_init__(self):
        object.__setattr__(self, "dim", Dim(self.dim))
        object.__setattr__(self, "value", float(self.value))
        if math.isnan(self.value):
            raise DomainError(f"{self.dim.value} is NaN")
        if self.dim in _POSITIVE and not self.value > 0:
            raise DomainError(f"{self.dim.value} must be > 0, got {self.value!r}")
        if self.dim in _NON_NEGATIVE and self.value < 0:
            raise DomainError(f"{self.dim.value} must be >= 0, got {self.value!r}")

    def __add__(self, other):
        return checked_add(self, other)

    def __mul__(self, other):
        return checked_mul(self, other)

    def __truediv__(self, other):
        return checked_div(self, other)

    def __float__(self):
        return self.value

    def to(self, dim: Dim | str) -> float:
        """Return the bare value after asserting the dimension tag."""
        dim = Dim(dim)
        if self.dim is not dim:
            raise DimensionError(f"expected {dim.value}, got {self.dim.value}")
        return self.value

    def __str__(self):
        return f"{self.value:g} {self.dim.value}"


def checked_add(a: Quantity, b: Quantity) -> Quantity:
    if a.dim is not b.dim:
        raise DimensionError(f"cannot add {a.dim.value} and {b.dim.value}")
    return Quantity(a.value + b.value, a.dim)


def checked_mul(a: Quantity, b: Quantity) -> Quantity:
    if a.dim is Dim.DIMENSIONLESS:
        dim = b.dim
    elif b.dim is Dim.DIMENSIONLESS:
        dim = a.dim
    else:
        try:
            dim = _MUL[(a.dim, b.dim)]
        except KeyError:
            raise DimensionError(f"{a.dim.value} * {b.dim.value} has no supported tag") from None
    return Quantity(a.value * b.value, dim)


def checked_div(a: Quantity, b: Quantity) -> Quantity:
    if a.dim is b.dim:
        dim = Dim.DIMENSIONLESS
    elif b.dim is Dim.DIMENSIONLESS:
        dim = a.dim
    else:
        try:
            dim = _DIV[(a.dim, b.dim)]
        except KeyError:
            raise DimensionError(f"{a.dim.value} / {b.dim.value} has no supported tag") from None
    return Quantity(a.value / b.value, dim)


def kg(x): return Quantity(x, Dim.MASS)
def coulomb(x): return Quantity(x, Dim.CHARGE)
def metre(x): return Quantity(x, Dim.LENGTH)
def second(x): return Quantity(x, Dim.TIME)
def m_per_s(x): return Quantity(x, Dim.SPEED)
def kelvin(x): return Quantity(x, Dim.TEMPERATURE)
def ohm_m(x): return Quantity(x, Dim.RESISTIVITY)
def watt(x): return Quantity(x, Dim.POWER)
def per_second(x): return Quantity(x, Dim.RATE)
def dimensionless(x): return Quantity(x, Dim.DIMENSIONLESS)


@dataclass(frozen=True)
class Constants:
    h: float
    hbar: float
    k_B: float
    e: float
    m_e: float
    m_p: float


_H = 6.62607015e-34
CODATA2018 = Constants(
    h=_H,
    hbar=_H / (2 * math.pi),
    k_B=1.380649e-23,
    e=1.602176634e-19,
    m_e=9.1093837015e-31,
    m_p=1.67262192369e-27,
)

DEFAULT_SPEED = 1.0e3  # m/s


@dataclass(frozen=True)
class ParticleSpec:
    mass: Quantity
    charge: Quantity
    speed: Quantity
    label: str = "custom"

    def __post_init__(self):
        self.mass.to(Dim.MASS)
        self.charge.to(Dim.CHARGE)
        self.speed.to(Dim.SPEED)
        if self.charge.value == 0:
            raise DomainError("particle charge must be non-zero")
        if not self.speed.value > 0 or math.isinf(self.speed.value):
            raise DomainError(f"particle speed must be finite and > 0, got {self.speed.value!r}")


def make_preset(name: str, speed: float = DEFAULT_SPEED) -> ParticleSpec:
    c = CODATA2018
    masses = {"electron": c.m_e, "proton": c.m_p}
    if name not in masses:
        raise ConfigError(f"unknown particle preset {name!r}; expected one of {sorted(masses)}")
    # singly charged; the sign is irrelevant since every formula uses q**2
    return ParticleSpec(kg(masses[name]), coulomb(c.e), m_per_s(speed), label=name)
