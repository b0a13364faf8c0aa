"""Probe-reflection gain of driven two- and three-level atoms in a waveguide.

Submodules:

- ``qcore``: parameter types, units, errors
- ``liouville``: bare-basis master-equation steady states
- ``threelevel``: closed forms for the pumped three-level atom
- ``mirror``: frequency-dependent decay rates in front of a mirror
- ``dressed``: dressed-state engine for driven two- and three-level atoms
- ``optimize``: sweeps and maximisation
- ``presets``, ``config``, ``csvio``, ``acceptance``, ``cli``: the command line tool
"""
from .qcore import (
    AmpError,
    AngularFreq,
    AtomParams,
    DriveProbe,
    Geometry,
    GeometryKind,
    NumericalError,
    ReflectionResult,
    Scheme,
    Setup,
    ValidationError,
)
from .optimize import reflection

__version__ = "0.1.0"

__all__ = [
    "AmpError", "AngularFreq", "AtomParams", "DriveProbe", "Geometry", "GeometryKind",
    "NumericalError", "ReflectionResult", "Scheme", "Setup", "ValidationError", "reflection",
]
