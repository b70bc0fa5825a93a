"""Detector, field and switching configuration plus the mode-space ingredients.

Units: the detector gap is the unit of energy (Omega = 1). Energies are given as
E/Omega, durations and radii as Omega*T and Omega*R, velocities as fractions of c.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Union

import numpy as np

from .specfun import unit_sphere_area

__all__ = [
    "ClosedFormDimensionError",
    "DegenerateFieldError",
    "ConfigError",
    "PerturbativeWarning",
    "SwitchingKind",
    "DetectorConfig",
    "FieldConfig",
    "SwitchingProfile",
    "check_dimension",
    "effective_scale",
    "lorentz_factor",
    "switching_function",
    "switching_fourier",
    "smearing_function",
    "smearing_fourier",
    "coherent_amplitude",
    "coherent_amplitude_modulus",
    "CONFIG_KEYS",
    "parse_config",
    "load_config",
]

VELOCITY_GUARD = 0.999


class ClosedFormDimensionError(ValueError):
    pass


class DegenerateFieldError(ValueError):
    """The amplitude distribution is undefined for a field of zero mean energy."""


class ConfigError(ValueError):
    def __init__(self, message: str, key: str = None, line: int = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.key = key
        self.line = line


class PerturbativeWarning(UserWarning):
    pass


class SwitchingKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    DELTA = "delta"


@dataclass(frozen=True)
class DetectorConfig:
    omega: float = 1.0
    mean_radius: float = 1.0
    velocity: float = 0.0
    coupling: float = 1e-3

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.mean_radius < 0:
            raise ValueError("mean_radius must be non-negative")
        if not 0 <= self.velocity < 1:
            raise ValueError("velocity must lie in [0, 1)")
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")
        if self.coupling > 0.1:
            warnings.warn(f"coupling {self.coupling} is outside the perturbative regime",
                          PerturbativeWarning, stacklevel=3)

    @property
    def gamma(self) -> float:
        return lorentz_factor(self.velocity)


@dataclass(frozen=True)
class FieldConfig:
    mean_energy: float
    phase_r: int = 1

    def __post_init__(self):
        if self.mean_energy < 0:
            raise ValueError("mean_energy must be non-negative")
        if self.phase_r not in (0, 1):
            raise ValueError("phase_r must be 0 or 1")

    def with_energy(self, energy: float) -> "FieldConfig":
        return FieldConfig(energy, self.phase_r)


@dataclass(frozen=True)
class SwitchingProfile:
    kind: SwitchingKind = SwitchingKind.GAUSSIAN
    mean_duration: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SwitchingKind(self.kind))
        if self.kind is SwitchingKind.GAUSSIAN and not self.mean_duration > 0:
            raise ValueError("Gaussian switching requires mean_duration > 0")
        if self.kind is SwitchingKind.DELTA:
            object.__setattr__(self, "mean_duration", 0.0)

    @classmethod
    def gaussian(cls, duration: float) -> "SwitchingProfile":
        return cls(SwitchingKind.GAUSSIAN, duration)

    @classmethod
    def delta(cls) -> "SwitchingProfile":
        return cls(SwitchingKind.DELTA, 0.0)

    @classmethod
    def from_duration(cls, duration: float) -> "SwitchingProfile":
        """Gaussian of the given mean duration, or the delta profile when it is 0."""
        return cls.delta() if duration == 0 else cls.gaussian(duration)

    @property
    def is_delta(self) -> bool:
        return self.kind is SwitchingKind.DELTA

    @property
    def duration(self) -> float:
        return self.mean_duration


def check_dimension(n: int, closed_form: bool = True) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"spatial dimension must be a positive integer, got {n}")
    if closed_form and n not in (1, 3):
        raise ClosedFormDimensionError(f"closed forms are available for n in {{1, 3}}, got {n}")
    return int(n)


def effective_scale(n: int, x: float) -> float:
    """Rescale E or R by ``s_{n+1} / (pi s_n)``: 1 for n=1 and 1/2 for n=3."""
    check_dimension(n, closed_form=False)
    if x < 0:
        raise ValueError("effective_scale needs x >= 0")
    return unit_sphere_area(n + 1) / (math.pi * unit_sphere_area(n)) * x


def lorentz_factor(velocity: float) -> float:
    if not 0 <= velocity < 1:
        raise ValueError("velocity must lie in [0, 1)")
    return 1.0 / math.sqrt(1.0 - velocity * velocity)


def switching_function(profile: SwitchingProfile, tau):
    """Gaussian switching ``exp(-tau^2/(pi T^2)) / (pi T)``; unit area."""
    if profile.is_delta:
        raise ValueError("the delta profile has no pointwise values")
    T = profile.mean_duration
    tau = np.asarray(tau, dtype=float)
    return np.exp(-tau * tau / (math.pi * T * T)) / (math.pi * T)


def switching_fourier(profile: SwitchingProfile, argument):
    """Fourier transform of the switching function at the given frequency."""
    argument = np.asarray(argument, dtype=float)
    if profile.is_delta:
        return np.ones_like(argument)
    T = profile.mean_duration
    return np.exp(-math.pi * argument * argument * T * T / 4.0)


def smearing_function(n: int, R: float, radius):
    """Gaussian smearing profile in n dimensions, normalised to unit volume."""
    Rn = effective_scale(n, R)
    radius = np.asarray(radius, dtype=float)
    return np.exp(-radius * radius / (math.pi * Rn * Rn)) / (math.pi * Rn) ** n


def smearing_fourier(n: int, R: float, k):
    """``exp(-pi k^2 R_n^2 / 4)``; depends only on |k| and is strictly positive."""
    Rn = effective_scale(n, R)
    k = np.asarray(k, dtype=float)
    return np.exp(-math.pi * k * k * Rn * Rn / 4.0)


def coherent_amplitude_modulus(n: int, mean_energy: float, k):
    if not mean_energy > 0:
        raise DegenerateFieldError("amplitude distribution undefined for zero mean energy")
    En = effective_scale(n, mean_energy)
    k = np.asarray(k, dtype=float)
    return np.exp(-k * k / (2.0 * math.pi * En * En)) / (math.pi * En) ** (n / 2)


def coherent_amplitude(n: int, field: FieldConfig, k):
    """Gaussian coherent amplitude with phase ``pi r / 2`` and one quantum on average."""
    modulus = coherent_amplitude_modulus(n, field.mean_energy, k)
    return modulus * (1j if field.phase_r == 1 else 1.0)


# ---------------------------------------------------------------------------
# key=value configuration files

CONFIG_KEYS = {
    "dimension": int,
    "energy": str,
    "duration": str,
    "radius": str,
    "velocity": str,
    "phase_r": int,
    "coupling": float,
    "switching_kind": str,
}


def parse_config(text: str) -> Dict[str, Union[int, float, str]]:
    """Parse ``key = value`` lines. ``#`` starts a comment; blank lines are skipped.

    Sweepable keys (energy, duration, radius, velocity) keep their raw string so
    that ``start:stop:count`` grids can be expanded by the caller.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if not value:
            raise ConfigError("missing value", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        try:
            parsed = CONFIG_KEYS[key](value)
        except ValueError:
            raise ConfigError(f"cannot parse {value!r} as {CONFIG_KEYS[key].__name__}",
                              key=key, line=lineno) from None
        if key == "dimension" and parsed not in (1, 3):
            raise ConfigError("dimension must be 1 or 3", key=key, line=lineno)
        if key == "phase_r" and parsed not in (0, 1):
            raise ConfigError("phase_r must be 0 or 1", key=key, line=lineno)
        if key == "coupling" and not parsed > 0:
            raise ConfigError("coupling must be positive", key=key, line=lineno)
        if key == "switching_kind":
            try:
                parsed = SwitchingKind(value.lower()).value
            except ValueError:
                raise ConfigError("switching_kind must be 'gaussian' or 'delta'",
                                  key=key, line=lineno) from None
        values[key] = parsed
    return values


def load_config(path: Union[str, Path]) -> Dict[str, Union[int, float, str]]:
    return parse_config(Path(path).read_text())
