"""Run configuration files (TOML or JSON).

Schema::

    scheme = "ThreeLevelPumped"      # or TwoLevelResonant, ThreeLevelTwoPhoton
    [atom]       gamma10, gamma21, omega10, alpha, gphi10, gphi21, gphi20
    [geometry]   kind = "mirror"|"open", L (m), v (m/s), gamma10_tl, gamma21_tl
    [drive]      omega_d_amp, omega_p_amp, delta_probe, delta_drive
    [sweep]      objective, branch, exact, refine, fixed = {path = value}
    [[sweep.axes]] path, min, max, n, unit
    [output]     name, format = "csv"

Frequencies are numbers in rad/s (or any consistent rate unit) or strings
such as "37.5 MHz" (meaning omega/2pi) or "2.3 Gamma10".
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .optimize import Axis, Objective, SweepSpec, to_internal
from .qcore import (
    AtomParams,
    DriveProbe,
    Geometry,
    Scheme,
    Setup,
    ValidationError,
    parse_quantity,
)


class ConfigError(ValidationError):
    def __init__(self, msg: str, source: Optional[str] = None, line: Optional[int] = None):
        self.line = line
        where = ""
        if source:
            where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + msg)


_ATOM_RATES = ("gamma10", "gamma21", "omega10", "alpha", "gphi10", "gphi21", "gphi20")
_GEOM_RATES = ("gamma10_tl", "gamma21_tl")
_DRIVE = ("omega_d_amp", "omega_p_amp", "delta_probe", "delta_drive")
_TOP = ("scheme", "atom", "geometry", "drive", "sweep", "output", "description")
_SWEEP = ("objective", "branch", "exact", "refine", "fixed", "axes")
_AXIS = ("path", "min", "max", "n", "unit")
_OUTPUT = ("name", "format")


@dataclass(frozen=True)
class RunConfig:
    setup: Setup
    sweep: Optional[SweepSpec] = None
    refine: bool = False
    name: str = "sweep"
    format: str = "csv"
    description: str = ""
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def scheme(self) -> Scheme:
        return self.setup.scheme


def _line_of(text: Optional[str], key: str) -> Optional[int]:
    if not text:
        return None
    pat = re.compile(r'^\s*(\[+\s*)?"?' + re.escape(key) + r'"?\s*[=:\]]')
    for i, line in enumerate(text.splitlines(), 1):
        if pat.search(line):
            return i
    return None


def _blamed_key(msg: str, default: str) -> str:
    """Field named at the start of a validation message, if any."""
    m = re.match(r"(?:axis \S+: )?(\w+)", msg)
    if m and m.group(1) in _ATOM_RATES + _GEOM_RATES + _DRIVE + ("L", "v", "min", "max", "n"):
        return m.group(1)
    if msg.startswith("axis ") and "min must be" in msg:
        return "min"
    return default


def _quantity(value, base_atom: Optional[AtomParams] = None) -> float:
    if isinstance(value, str):
        parts = value.split()
        if len(parts) == 2 and parts[1] in ("Gamma10", "Gamma21"):
            if base_atom is None:
                raise ValidationError(f"{value!r}: Gamma units are not available here")
            rate = base_atom.gamma10 if parts[1] == "Gamma10" else base_atom.gamma21
            if rate is None:
                raise ValidationError(f"{value!r}: the atom has no {parts[1]}")
            try:
                return float(parts[0]) * rate
            except ValueError:
                raise ValidationError(f"cannot parse quantity {value!r}") from None
    return parse_quantity(value)


def _number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    return float(value)


def _check_keys(section: str, table, allowed, ctx) -> None:
    if not isinstance(table, dict):
        raise ConfigError(f"[{section}] must be a table", *ctx(section))
    for k in table:
        if k not in allowed:
            raise ConfigError(f"unknown key {k!r} in [{section}]; allowed: {', '.join(allowed)}", *ctx(k))


def config_from_dict(data: dict, source: Optional[str] = None, text: Optional[str] = None) -> RunConfig:
    def ctx(key):
        return source, _line_of(text, key)

    if not isinstance(data, dict):
        raise ConfigError("top level must be a table", source)
    for k in data:
        if k not in _TOP:
            raise ConfigError(f"unknown top-level key {k!r}", *ctx(k))
    if "scheme" not in data:
        raise ConfigError("missing required key 'scheme'", source)
    try:
        scheme = Scheme(data["scheme"])
    except ValueError:
        raise ConfigError(
            f"unknown scheme {data['scheme']!r}; expected one of {[s.value for s in Scheme]}", *ctx("scheme")
        ) from None

    atom_t = data.get("atom", {})
    _check_keys("atom", atom_t, _ATOM_RATES + ("n_levels",), ctx)
    key = "atom"
    try:
        kw = {}
        for k, v in atom_t.items():
            key = k
            kw[k] = int(v) if k == "n_levels" else _quantity(v)
        kw.setdefault("n_levels", scheme.n_levels)
        key = "atom"
        if "gamma10" not in kw:
            raise ValidationError("atom.gamma10 is required")
        atom = AtomParams(**kw)

        geom_t = data.get("geometry", {})
        _check_keys("geometry", geom_t, ("kind", "L", "v") + _GEOM_RATES, ctx)
        gkw = {}
        for k, v in geom_t.items():
            key = k
            if k == "kind":
                gkw[k] = v
            elif k in ("L", "v"):
                gkw[k] = _number(k, v)
            else:
                gkw[k] = _quantity(v)
        key = "geometry"
        geometry = Geometry(**gkw)

        drive_t = data.get("drive", {})
        _check_keys("drive", drive_t, _DRIVE, ctx)
        dkw = {}
        for k, v in drive_t.items():
            key = k
            dkw[k] = _quantity(v, atom)
        key = "drive"
        drive = DriveProbe(**dkw)
        key = "scheme"
        setup = Setup(scheme, atom, geometry, drive)
    except ConfigError:
        raise
    except (ValidationError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc), *ctx(_blamed_key(str(exc), key))) from None

    sweep = None
    refine = False
    sweep_t = data.get("sweep")
    if sweep_t is not None:
        _check_keys("sweep", sweep_t, _SWEEP, ctx)
        axes_t = sweep_t.get("axes")
        if not isinstance(axes_t, list) or not axes_t:
            raise ConfigError("[sweep] needs a non-empty list of [[sweep.axes]]", *ctx("sweep"))
        key = "axes"
        try:
            axes = []
            for ax in axes_t:
                _check_keys("sweep.axes", ax, _AXIS, ctx)
                missing = [k for k in ("path", "min", "max", "n") if k not in ax]
                if missing:
                    raise ValidationError(f"axis is missing {', '.join(missing)}")
                key = "path"
                axes.append(Axis(
                    str(ax["path"]), _number("min", ax["min"]), _number("max", ax["max"]),
                    int(_number("n", ax["n"])), str(ax.get("unit", "1")),
                ))
                to_internal(1.0, axes[-1].unit, setup)
            key = "objective"
            objective = Objective(sweep_t.get("objective", "AbsReflection"), sweep_t.get("branch"))
            fixed = {}
            for k, v in sweep_t.get("fixed", {}).items():
                key = k
                fixed[k] = _quantity(v, atom)
            key = "sweep"
            sweep = SweepSpec(tuple(axes), objective, fixed, bool(sweep_t.get("exact", True)))
            refine = bool(sweep_t.get("refine", False))
        except ConfigError:
            raise
        except (ValidationError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc), *ctx(_blamed_key(str(exc), key))) from None

    out_t = data.get("output", {})
    _check_keys("output", out_t, _OUTPUT, ctx)
    fmt = out_t.get("format", "csv")
    if fmt != "csv":
        raise ConfigError(f"unsupported output format {fmt!r}; only 'csv'", *ctx("format"))
    name = str(out_t.get("name", "sweep"))
    if not re.fullmatch(r"[A-Za-z0-9_.-]+", name):
        raise ConfigError(f"output name {name!r} must be a plain file stem", *ctx("name"))
    return RunConfig(setup, sweep, refine, name, fmt, str(data.get("description", "")), data)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from None
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"JSON syntax error: {exc.msg}", str(path), exc.lineno) from None
    else:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            m = re.search(r"line (\d+)", str(exc))
            raise ConfigError(f"TOML syntax error: {exc}", str(path), int(m.group(1)) if m else None) from None
    return config_from_dict(data, str(path), text)
