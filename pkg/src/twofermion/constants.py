"""Physical constants and conversions between dimensionless and physical units.

Energies are carried internally in units of the electron rest energy ``mc^2``
and lengths in electron Compton lengths ``lambda_e``. The Bohr radius is
``a_B = lambda_e / alpha``.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

ALPHA_PAPER = 1.0 / 137.0
ALPHA_CODATA = 1.0 / 137.035999084
ELECTRON_REST_ENERGY_EV = 510998.95


class AlphaMode(str, enum.Enum):
    PAPER = "paper"
    CODATA = "codata"
    CUSTOM = "custom"


class Unit(str, enum.Enum):
    DIMENSIONLESS_M = "dimensionless_m"
    EV = "eV"
    BOHR_RADIUS = "bohr_radius"
    COMPTON_LENGTH = "compton_length"


ENERGY_UNITS = (Unit.DIMENSIONLESS_M, Unit.EV)
LENGTH_UNITS = (Unit.BOHR_RADIUS, Unit.COMPTON_LENGTH)


class ConfigError(ValueError):
    """Invalid coupling configuration."""


@dataclass(frozen=True)
class CouplingConfig:
    alpha: float = ALPHA_PAPER
    electron_rest_energy: float = ELECTRON_REST_ENERGY_EV
    alpha_mode: AlphaMode = AlphaMode.PAPER

    def __post_init__(self):
        mode = AlphaMode(self.alpha_mode)
        object.__setattr__(self, "alpha_mode", mode)
        if mode is AlphaMode.PAPER and self.alpha != ALPHA_PAPER:
            raise ConfigError("alpha_mode='paper' fixes alpha = 1/137")
        if mode is AlphaMode.CODATA and self.alpha != ALPHA_CODATA:
            raise ConfigError("alpha_mode='codata' fixes alpha = 1/137.035999084")
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (math.isfinite(self.electron_rest_energy) and self.electron_rest_energy > 0.0):
            raise ConfigError(
                f"electron_rest_energy must be positive, got {self.electron_rest_energy!r}"
            )

    @classmethod
    def from_mode(cls, mode="paper", alpha=None, electron_rest_energy=ELECTRON_REST_ENERGY_EV):
        mode = AlphaMode(mode)
        if mode is AlphaMode.PAPER:
            value = ALPHA_PAPER
        elif mode is AlphaMode.CODATA:
            value = ALPHA_CODATA
        else:
            if alpha is None:
                raise ConfigError("alpha_mode='custom' requires an explicit alpha")
            value = float(alpha)
        return cls(alpha=value, electron_rest_energy=float(electron_rest_energy), alpha_mode=mode)

    @classmethod
    def from_dict(cls, data: dict) -> "CouplingConfig":
        unknown = set(data) - {"alpha_mode", "alpha", "electron_rest_energy_eV"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls.from_mode(
                data.get("alpha_mode", "paper"),
                data.get("alpha"),
                data.get("electron_rest_energy_eV", ELECTRON_REST_ENERGY_EV),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "alpha_mode": self.alpha_mode.value,
            "alpha": self.alpha,
            "electron_rest_energy_eV": self.electron_rest_energy,
        }


def load_config(path) -> CouplingConfig:
    """Read a UTF-8 JSON config file; absent keys take their defaults."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return CouplingConfig.from_dict(data)


@dataclass(frozen=True)
class PhysicalQuantity:
    value: float
    unit: Unit = field(default=Unit.DIMENSIONLESS_M)

    def __post_init__(self):
        object.__setattr__(self, "unit", Unit(self.unit))

    def to(self, unit, cfg: CouplingConfig) -> "PhysicalQuantity":
        return convert(self, unit, cfg)

    def to_dict(self) -> dict:
        return {"value": self.value, "unit": self.unit.value}


def convert(q: PhysicalQuantity, unit, cfg: CouplingConfig) -> PhysicalQuantity:
    """Convert between the two energy units or between the two length units."""
    unit = Unit(unit)
    if unit is q.unit:
        return q
    if q.unit in ENERGY_UNITS and unit in ENERGY_UNITS:
        mc2 = cfg.electron_rest_energy
        value = q.value * mc2 if unit is Unit.EV else q.value / mc2
    elif q.unit in LENGTH_UNITS and unit in LENGTH_UNITS:
        # a_B = lambda_e / alpha
        value = q.value / cfg.alpha if unit is Unit.COMPTON_LENGTH else q.value * cfg.alpha
    else:
        raise ValueError(f"cannot convert {q.unit.value} to {unit.value}")
    return PhysicalQuantity(value, unit)


def binding_energy_eV(E: float, cfg: CouplingConfig) -> PhysicalQuantity:
    """Binding energy ``mc^2 (2 - E)`` in eV for a dimensionless total energy ``E``."""
    return PhysicalQuantity(cfg.electron_rest_energy * (2.0 - E), Unit.EV)


def damping_radius(beta: float, state_class: str, cfg: CouplingConfig) -> PhysicalQuantity:
    """Decay length ``1/beta`` of ``exp(-beta x)``.

    Positronium-like states are reported in Bohr radii (``a_B alpha / beta``),
    deep states in Compton lengths (``lambda_e / beta``).
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if state_class == "positronium":
        return PhysicalQuantity(cfg.alpha / beta, Unit.BOHR_RADIUS)
    if state_class == "deep":
        return PhysicalQuantity(1.0 / beta, Unit.COMPTON_LENGTH)
    raise ValueError(f"unknown state class {state_class!r}")
