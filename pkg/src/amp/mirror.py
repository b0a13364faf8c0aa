"""Frequency-dependent decay rates of an atom at distance L from a mirror.

The reflected field interferes with the emitted one, so each transition
decays at 2*Gamma_TL*cos^2(L*omega/v): zero at a node, twice the open-line
rate at an antinode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .qcore import AtomParams, Geometry, GeometryKind, ValidationError

# Typical transmon anharmonicity; only used when a config leaves alpha out.
DEFAULT_ALPHA = -300e6 * 2.0 * math.pi


@dataclass(frozen=True)
class MirrorRates:
    gamma10: float
    gamma21: float


def _rate(gamma_tl: float, L: float, v: float, omega: float) -> float:
    return 2.0 * gamma_tl * math.cos(L * omega / v) ** 2


def rates_at(g: Geometry, omega10: float, alpha: float) -> MirrorRates:
    if g.kind is not GeometryKind.MIRROR:
        raise ValidationError("rates are the bare Gamma_TL values in an open waveguide")
    if not g.frequency_dependent:
        raise ValidationError("mirror geometry has no L, v and gamma10_tl set")
    g10 = _rate(g.gamma10_tl, g.L, g.v, omega10)
    g21 = 0.0 if g.gamma21_tl is None else _rate(g.gamma21_tl, g.L, g.v, omega10 + alpha)
    return MirrorRates(g10, g21)


def node_spacing(g: Geometry) -> float:
    """Distance in omega between consecutive zeros of Gamma10."""
    if not g.frequency_dependent:
        raise ValidationError("mirror geometry has no L and v set")
    return math.pi * g.v / g.L


def effective_atom(atom: AtomParams, g: Geometry) -> AtomParams:
    """Atom with the decay rates the geometry imposes.

    A mirror with L set replaces gamma10 (and gamma21) by the cos^2 rates at
    atom.omega10; an open line with gamma*_tl given uses those directly.
    Otherwise the atom is returned unchanged.
    """
    if g.kind is GeometryKind.OPEN:
        if g.gamma10_tl is None:
            return atom
        g21 = g.gamma21_tl if atom.n_levels == 3 else None
        if atom.n_levels == 3 and g21 is None:
            raise ValidationError("open three-level geometry needs gamma21_tl with gamma10_tl")
        return atom.with_rates(g.gamma10_tl, g21)
    if not g.frequency_dependent:
        return atom
    if atom.omega10 is None:
        raise ValidationError("frequency-dependent mirror needs atom.omega10")
    if atom.n_levels == 2:
        return atom.with_rates(rates_at(g, atom.omega10, 0.0).gamma10, None)
    if g.gamma21_tl is None:
        raise ValidationError("three-level atom in front of a mirror needs gamma21_tl")
    alpha = DEFAULT_ALPHA if atom.alpha is None else atom.alpha
    mr = rates_at(g, atom.omega10, alpha)
    return atom.with_rates(mr.gamma10, mr.gamma21)
