"""Shared value types, unit conventions and validation.

All internal arithmetic is done in angular frequency (rad/s, or any consistent
rate unit when working dimensionlessly).  Values quoted as "X MHz" mean
omega/2pi = X MHz and are multiplied by 2pi on the way in.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

TWO_PI = 2.0 * math.pi

_UNIT_SCALE = {
    "rad/s": 1.0,
    "1": 1.0,
    "Hz": TWO_PI,
    "kHz": TWO_PI * 1e3,
    "MHz": TWO_PI * 1e6,
    "GHz": TWO_PI * 1e9,
}


class AmpError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AmpError, ValueError):
    """Invalid parameters or configuration."""


class NumericalError(AmpError, ArithmeticError):
    """A linear system could not be solved to the required accuracy."""


class AngularFreq(float):
    """An angular frequency in rad/s.

    Behaves as a plain float; the constructors only take care of the 2pi.

    >>> AngularFreq.from_mhz(1.0).mhz
    1.0
    """

    def __new__(cls, value: float = 0.0):
        v = float(value)
        if not math.isfinite(v):
            raise ValidationError(f"frequency must be finite, got {value!r}")
        return super().__new__(cls, v)

    @classmethod
    def from_hz(cls, f: float) -> "AngularFreq":
        return cls(TWO_PI * f)

    @classmethod
    def from_mhz(cls, f: float) -> "AngularFreq":
        return cls(TWO_PI * 1e6 * f)

    @classmethod
    def from_ghz(cls, f: float) -> "AngularFreq":
        return cls(TWO_PI * 1e9 * f)

    @property
    def hz(self) -> float:
        return float(self) / TWO_PI

    @property
    def mhz(self) -> float:
        return float(self) / (TWO_PI * 1e6)

    @property
    def ghz(self) -> float:
        return float(self) / (TWO_PI * 1e9)


def unit_scale(unit: str) -> float:
    """Multiplier that converts a value expressed in ``unit`` to rad/s."""
    try:
        return _UNIT_SCALE[unit]
    except KeyError:
        raise ValidationError(
            f"unknown unit {unit!r}; expected one of {sorted(_UNIT_SCALE)}"
        ) from None


def parse_quantity(value) -> float:
    """Accept a number (already in rad/s) or a string such as ``"37.5 MHz"``."""
    if isinstance(value, bool):
        raise ValidationError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(AngularFreq(value))
    if isinstance(value, str):
        parts = value.split()
        try:
            if len(parts) == 1:
                return float(AngularFreq(float(parts[0])))
            if len(parts) == 2:
                return float(AngularFreq(float(parts[0]) * unit_scale(parts[1])))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
        raise ValidationError(f"cannot parse quantity {value!r}")
    raise ValidationError(f"expected a number or a 'value unit' string, got {value!r}")


def _check_finite(name: str, value) -> None:
    if value is not None and not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")


def _check_rate(name: str, value) -> None:
    _check_finite(name, value)
    if value is not None and value < 0:
        raise ValidationError(f"{name} is a rate and must be >= 0, got {value!r}")


class Scheme(str, enum.Enum):
    """Which driving configuration is being modelled."""

    THREE_LEVEL_PUMPED = "ThreeLevelPumped"
    TWO_LEVEL_RESONANT = "TwoLevelResonant"
    THREE_LEVEL_TWO_PHOTON = "ThreeLevelTwoPhoton"

    @property
    def n_levels(self) -> int:
        return 2 if self is Scheme.TWO_LEVEL_RESONANT else 3

    @property
    def dressed(self) -> bool:
        return self is not Scheme.THREE_LEVEL_PUMPED


class GeometryKind(str, enum.Enum):
    MIRROR = "mirror"
    OPEN = "open"


@dataclass(frozen=True)
class AtomParams:
    """Level structure and dissipation of the atom.

    ``gamma10``/``gamma21`` are the relaxation rates 1->0 and 2->1, the
    ``gphi*`` fields are pure-dephasing rates.  ``alpha`` is the anharmonicity
    omega21 - omega10.  For a two-level atom the 2-level fields must be None.
    """

    n_levels: int
    gamma10: float
    gamma21: Optional[float] = None
    omega10: Optional[float] = None
    alpha: Optional[float] = None
    gphi10: float = 0.0
    gphi21: Optional[float] = None
    gphi20: Optional[float] = None

    def __post_init__(self):
        if self.n_levels not in (2, 3):
            raise ValidationError(f"n_levels must be 2 or 3, got {self.n_levels!r}")
        if self.n_levels == 2:
            for name in ("gamma21", "alpha", "gphi21", "gphi20"):
                if getattr(self, name) is not None:
                    raise ValidationError(f"{name} must be absent for a two-level atom")
        else:
            if self.gamma21 is None:
                raise ValidationError("gamma21 is required for a three-level atom")
            for name in ("gphi21", "gphi20"):
                if getattr(self, name) is None:
                    object.__setattr__(self, name, 0.0)
        for name in ("gamma10", "gamma21", "gphi10", "gphi21", "gphi20"):
            _check_rate(name, getattr(self, name))
        _check_finite("omega10", self.omega10)
        _check_finite("alpha", self.alpha)

    @property
    def omega20(self) -> float:
        """Bare 0<->2 transition frequency, 2*omega10 + alpha."""
        if self.omega10 is None or self.alpha is None:
            raise ValidationError("omega20 needs both omega10 and alpha")
        return 2.0 * self.omega10 + self.alpha

    def with_rates(self, gamma10: float, gamma21: Optional[float]) -> "AtomParams":
        return replace(self, gamma10=gamma10, gamma21=gamma21)


@dataclass(frozen=True)
class DriveProbe:
    """Drive and probe amplitudes and detunings.

    ``delta_probe`` is omega10 minus the probe frequency.  ``delta_drive`` is
    the detuning of the transition the drive addresses: omega20 - omega_d for
    the pumped three-level scheme, omega10 - omega_d for the dressed schemes.
    ``omega_p_amp`` only matters for the bare-basis master equation; every
    reflection coefficient here is a linear-response quantity.
    """

    omega_d_amp: float = 0.0
    omega_p_amp: float = 0.0
    delta_probe: float = 0.0
    delta_drive: float = 0.0

    def __post_init__(self):
        _check_rate("omega_d_amp", self.omega_d_amp)
        _check_rate("omega_p_amp", self.omega_p_amp)
        _check_finite("delta_probe", self.delta_probe)
        _check_finite("delta_drive", self.delta_drive)


@dataclass(frozen=True)
class Geometry:
    """Mirror-terminated or open waveguide.

    For a mirror, giving ``L`` (m), ``v`` (m/s) and the bare transmission-line
    rates makes the atom's decay rates depend on its transition frequency.
    Leaving ``L`` unset means the rates in :class:`AtomParams` are used as is.
    """

    kind: GeometryKind = GeometryKind.MIRROR
    L: Optional[float] = None
    v: Optional[float] = None
    gamma10_tl: Optional[float] = None
    gamma21_tl: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GeometryKind(self.kind))
        if self.kind is GeometryKind.OPEN and (self.L is not None or self.v is not None):
            raise ValidationError("L and v only apply to the mirror geometry")
        if self.L is not None or self.v is not None:
            if self.L is None or self.v is None or self.gamma10_tl is None:
                raise ValidationError("mirror geometry needs L, v and gamma10_tl together")
            if not (self.L > 0 and self.v > 0):
                raise ValidationError("mirror distance L and speed v must be > 0")
        _check_rate("gamma10_tl", self.gamma10_tl)
        _check_rate("gamma21_tl", self.gamma21_tl)

    @property
    def frequency_dependent(self) -> bool:
        return self.L is not None

    @classmethod
    def mirror(cls, **kw) -> "Geometry":
        return cls(GeometryKind.MIRROR, **kw)

    @classmethod
    def open(cls, **kw) -> "Geometry":
        return cls(GeometryKind.OPEN, **kw)


@dataclass(frozen=True)
class Setup:
    """Everything needed to evaluate one reflection coefficient."""

    scheme: Scheme
    atom: AtomParams
    geometry: Geometry = field(default_factory=Geometry)
    drive: DriveProbe = field(default_factory=DriveProbe)

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.atom.n_levels != self.scheme.n_levels:
            raise ValidationError(
                f"scheme {self.scheme.value} needs a {self.scheme.n_levels}-level atom"
            )

    def replace(self, **kw) -> "Setup":
        return replace(self, **kw)


@dataclass(frozen=True)
class ReflectionResult:
    """Complex reflection coefficient plus the state that produced it.

    ``populations`` are bare-basis populations for the pumped scheme and
    dressed-state populations (ascending eigenfrequency) otherwise.
    """

    r: complex
    populations: tuple = ()

    @property
    def abs_r(self) -> float:
        return abs(self.r)

    @property
    def gain(self) -> float:
        return abs(self.r) - 1.0


def total_dephasings(p: AtomParams) -> tuple[float, float, float]:
    """Total coherence decay rates (gamma10, gamma21, gamma20).

    Relaxation contributes Gamma10/2 to gamma10 and Gamma21/2 to both gamma21
    and gamma20; the Gamma10/2 that a full ladder Lindbladian would add to
    gamma21 is deliberately left out.  Gamma20 is taken to be zero.
    """
    g10 = 0.5 * p.gamma10 + p.gphi10
    if p.n_levels == 2:
        return g10, 0.0, 0.0
    g21 = 0.5 * p.gamma21 + p.gphi21
    g20 = 0.5 * p.gamma21 + p.gphi20
    return g10, g21, g20
