"""Decoherence of charged particles flying over a resistive conducting plate.

Closed-form time scales (:mod:`.timescales`), decoherence-rate profiles
(:mod:`.profiles`), the double-slit observable (:mod:`.interference`), a
lattice density-matrix evolver with a brute-force path-sum oracle
(:mod:`.evolver`) and (z, dx) parameter sweeps (:mod:`.sweep`).
"""
from .errors import (
    ConfigError,
    DecoplateError,
    DimensionError,
    DomainError,
    GeometryError,
    NumericError,
    SizeError,
    UnsupportedModelError,
)
from .quantities import CODATA2018, Dim, ParticleSpec, Quantity, make_preset
from .timescales import EnvironmentSpec, ExperimentSpec, PlateSpec, TimescaleReport

__version__ = "0.1.0"
