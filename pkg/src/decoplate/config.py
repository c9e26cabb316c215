"""JSON configuration: parsing, schema checks, defaults and spec construction.

Schema problems (unknown or missing keys, wrong types, duplicate keys) raise
:class:`ConfigError`; non-physical values raise :class:`DomainError`.  Both
messages name the offending key by its dotted path.
"""
from __future__ import annotations

import copy
import json
import math

from .errors import ConfigError, DomainError
from .interference import DEFAULT_SAMPLES, GeometrySpec
from .profiles import KINDS
from .quantities import (
    CODATA2018,
    DEFAULT_SPEED,
    ParticleSpec,
    coulomb,
    kelvin,
    kg,
    m_per_s,
    make_preset,
    metre,
    ohm_m,
    second,
)
from .timescales import DEFAULT_TEMPERATURE, EnvironmentSpec, ExperimentSpec, PlateSpec

NUMBER = "number"
INTEGER = "integer"
TEXT = "text"

# section -> key -> (type, default, must be positive, nullable)
SCHEMA = {
    "plate": {
        "resistivity_ohm_m": (NUMBER, 1e-6, True, False),
        "length_m": (NUMBER, 1e-2, True, False),
        "scaling_exponent": (INTEGER, 3, True, False),
        "reference_height_m": (NUMBER, None, True, True),
        "reference_tau_r_s": (NUMBER, None, True, True),
    },
    "environment": {
        "temperature_K": (NUMBER, DEFAULT_TEMPERATURE, True, False),
    },
    "geometry": {
        "z_m": (NUMBER, 1e-4, True, False),
        "slit_separation_m": (NUMBER, 1e-4, True, False),
        "slit_width_m": (NUMBER, 1e-7, True, False),
        "screen_distance_m": (NUMBER, 1.0, True, False),
        "window_m": (NUMBER, None, True, True),
        "n_samples": (INTEGER, DEFAULT_SAMPLES, True, False),
    },
    "profile": {
        "kind": (TEXT, "quadratic", False, False),
        "correlation_length_m": (NUMBER, None, True, True),
    },
    "sweep": {
        "z_min": (NUMBER, 1e-5, True, False),
        "z_max": (NUMBER, 1e-3, True, False),
        "z_count": (INTEGER, 25, True, False),
        "dx_min": (NUMBER, 1e-6, True, False),
        "dx_max": (NUMBER, 1e-3, True, False),
        "dx_count": (INTEGER, 25, True, False),
        "spacing": (TEXT, "log", False, False),
    },
}

PARTICLE_CUSTOM = {"mass_kg", "charge_e", "charge_C", "speed_m_per_s"}


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ConfigError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _reject_constant(token):
    raise ConfigError(f"non-finite number {token} is not allowed")


def parse(text: str) -> dict:
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return normalize(raw)


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse(text)


def _check_value(path: str, value, kind: str, positive: bool, nullable: bool):
    if value is None:
        if nullable:
            return None
        raise ConfigError(f"{path} must not be null")
    if kind == TEXT:
        if not isinstance(value, str):
            raise ConfigError(f"{path} must be a string")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a {kind}")
    if kind == INTEGER:
        if isinstance(value, float):
            if not value.is_integer():
                raise ConfigError(f"{path} must be an integer")
            value = int(value)
    else:
        value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{path} must be finite")
    if positive and not value > 0:
        raise DomainError(f"{path} must be > 0, got {value!r}")
    return value


def _section(raw: dict, name: str) -> dict:
    given = raw.get(name, {})
    if not isinstance(given, dict):
        raise ConfigError(f"{name} must be an object")
    schema = SCHEMA[name]
    for key in given:
        if key not in schema:
            raise ConfigError(f"unknown key {name}.{key}")
    out = {}
    for key, (kind, default, positive, nullable) in schema.items():
        value = given.get(key, default)
        out[key] = _check_value(f"{name}.{key}", value, kind, positive, nullable)
    return out


def _particle(raw: dict) -> dict:
    if "particle" not in raw:
        raise ConfigError("missing required key particle")
    given = raw["particle"]
    if not isinstance(given, dict):
        raise ConfigError("particle must be an object")
    if ("preset" in given) == ("custom" in given):
        raise ConfigError("particle needs exactly one of particle.preset or particle.custom")
    if "preset" in given:
        for key in given:
            if key not in ("preset", "speed_m_per_s"):
                raise ConfigError(f"unknown key particle.{key}")
        name = _check_value("particle.preset", given["preset"], TEXT, False, False)
        if name not in ("electron", "proton"):
            raise ConfigError(f"particle.preset {name!r} is not one of 'electron', 'proton'")
        speed = _check_value("particle.speed_m_per_s", given.get("speed_m_per_s", DEFAULT_SPEED),
                             NUMBER, True, False)
        return {"preset": name, "speed_m_per_s": speed}
    for key in given:
        if key != "custom":
            raise ConfigError(f"unknown key particle.{key}")
    custom = given["custom"]
    if not isinstance(custom, dict):
        raise ConfigError("particle.custom must be an object")
    for key in custom:
        if key not in PARTICLE_CUSTOM:
            raise ConfigError(f"unknown key particle.custom.{key}")
    if "mass_kg" not in custom:
        raise ConfigError("missing required key particle.custom.mass_kg")
    if ("charge_e" in custom) == ("charge_C" in custom):
        raise ConfigError("particle.custom needs exactly one of charge_e or charge_C")
    out = {"mass_kg": _check_value("particle.custom.mass_kg", custom["mass_kg"], NUMBER, True, False)}
    for key in ("charge_e", "charge_C"):
        if key in custom:
            value = _check_value(f"particle.custom.{key}", custom[key], NUMBER, False, False)
            if value == 0:
                raise DomainError(f"particle.custom.{key} must be non-zero")
            out[key] = value
    out["speed_m_per_s"] = _check_value("particle.custom.speed_m_per_s",
                                        custom.get("speed_m_per_s", DEFAULT_SPEED), NUMBER, True, False)
    return {"custom": out}


def normalize(raw: dict) -> dict:
    """Validate a parsed config and fill in defaults."""
    for key in raw:
        if key != "particle" and key not in SCHEMA:
            raise ConfigError(f"unknown key {key}")
    cfg = {"particle": _particle(raw)}
    for name in SCHEMA:
        cfg[name] = _section(raw, name)

    plate = cfg["plate"]
    if plate["scaling_exponent"] not in (3, 4):
        raise DomainError(f"plate.scaling_exponent must be 3 or 4, got {plate['scaling_exponent']!r}")
    if plate["scaling_exponent"] == 4:
        for key in ("reference_height_m", "reference_tau_r_s"):
            if plate[key] is None:
                raise ConfigError(f"plate.{key} is required when plate.scaling_exponent is 4")
    profile = cfg["profile"]
    if profile["kind"] not in KINDS:
        raise ConfigError(f"profile.kind must be one of {KINDS}, got {profile['kind']!r}")
    if profile["kind"] == "saturating" and profile["correlation_length_m"] is None:
        raise ConfigError("profile.correlation_length_m is required when profile.kind is 'saturating'")
    geometry = cfg["geometry"]
    if geometry["slit_width_m"] >= geometry["slit_separation_m"]:
        raise DomainError("geometry.slit_width_m must be smaller than geometry.slit_separation_m")
    if geometry["n_samples"] < 16:
        raise DomainError("geometry.n_samples must be >= 16")
    sweep = cfg["sweep"]
    if sweep["spacing"] not in ("log", "linear"):
        raise ConfigError(f"sweep.spacing must be 'log' or 'linear', got {sweep['spacing']!r}")
    for axis in ("z", "dx"):
        if sweep[f"{axis}_max"] < sweep[f"{axis}_min"]:
            raise DomainError(f"sweep.{axis}_max must be >= sweep.{axis}_min")
        if sweep[f"{axis}_count"] > 1 and sweep[f"{axis}_max"] == sweep[f"{axis}_min"]:
            raise DomainError(f"sweep.{axis}_max must exceed sweep.{axis}_min for more than one point")
    return copy.deepcopy(cfg)


def dumps(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=False)


def particle_from_config(cfg: dict) -> ParticleSpec:
    p = cfg["particle"]
    if "preset" in p:
        return make_preset(p["preset"], p["speed_m_per_s"])
    c = p["custom"]
    charge = c["charge_C"] if "charge_C" in c else c["charge_e"] * CODATA2018.e
    return ParticleSpec(kg(c["mass_kg"]), coulomb(charge), m_per_s(c["speed_m_per_s"]))


def experiment_from_config(cfg: dict) -> ExperimentSpec:
    plate = cfg["plate"]
    ref_h = plate["reference_height_m"]
    ref_t = plate["reference_tau_r_s"]
    g = cfg["geometry"]
    return ExperimentSpec(
        particle=particle_from_config(cfg),
        plate=PlateSpec(
            ohm_m(plate["resistivity_ohm_m"]),
            metre(plate["length_m"]),
            plate["scaling_exponent"],
            None if ref_h is None else metre(ref_h),
            None if ref_t is None else second(ref_t),
        ),
        environment=EnvironmentSpec(kelvin(cfg["environment"]["temperature_K"])),
        geometry=GeometrySpec(
            z=g["z_m"],
            slit_separation=g["slit_separation_m"],
            slit_width=g["slit_width_m"],
            screen_distance=g["screen_distance_m"],
            window=g["window_m"],
            n_samples=g["n_samples"],
        ),
    )


def correlation_length(cfg: dict):
    value = cfg["profile"]["correlation_length_m"]
    return None if value is None else metre(value)


def headline_default(preset: str = "electron") -> ExperimentSpec:
    """Experiment with every documented default: the headline scenario."""
    return experiment_from_config(normalize({"particle": {"preset": preset}}))
