"""Closed-form steady state and probe reflection of the pumped three-level atom.

Strong drive on 0<->2, weak probe on 0<->1, relaxation 2->1->0.  The
reflection coefficient is r = 1 - c*i*Gamma10*rho10/Omega_p with c = 2 in
front of a mirror and c = 1 in an open waveguide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .qcore import AtomParams, DriveProbe, GeometryKind, ValidationError, total_dephasings


@dataclass(frozen=True)
class LambdaCoeffs:
    lambda10: complex
    lambda12: complex
    lambda02: complex


@dataclass(frozen=True)
class ThreeLevelSteadyState:
    rho00: float
    rho11: float
    rho22: float
    rho10: complex
    A: float
    B: float

    @property
    def inversion(self) -> float:
        return self.rho11 - self.rho00


def lambda_coeffs(p: AtomParams, d: DriveProbe) -> LambdaCoeffs:
    g10, g21, g20 = total_dephasings(p)
    dw10, dw20 = d.delta_probe, d.delta_drive
    return LambdaCoeffs(
        lambda10=complex(g10, dw10),
        lambda12=complex(g21, dw10 - dw20),
        lambda02=complex(g20, -dw20),
    )


def _channel_factor(kind) -> float:
    return 2.0 if GeometryKind(kind) is GeometryKind.MIRROR else 1.0


def populations(p: AtomParams, d: DriveProbe) -> tuple[float, float, float]:
    """(rho00, rho11, rho22) from the rate-equation ratios A and B.

    Written with Gamma10*Omega_d^2 multiplied through, so the undriven and
    Gamma10 -> 0 limits come out without dividing by zero.
    """
    if p.n_levels != 3:
        raise ValidationError("pumped scheme needs a three-level atom")
    _, _, g20 = total_dephasings(p)
    if g20 <= 0:
        raise ValidationError("gamma20 must be > 0 for the pumped steady state")
    lam = lambda_coeffs(p, d)
    od2 = d.omega_d_amp ** 2
    a = 2.0 * p.gamma21 * abs(lam.lambda02) ** 2 / g20
    w00 = p.gamma10 * (a + od2)
    w11 = p.gamma21 * od2
    w22 = p.gamma10 * od2
    total = w00 + w11 + w22
    if total <= 0:
        raise ValidationError(
            "populations undefined (no drive and no relaxation); use the liouville oracle"
        )
    return w00 / total, w11 / total, w22 / total


def coherence_per_probe(p: AtomParams, d: DriveProbe, exact: bool = True) -> complex:
    """rho10 / Omega_p to first order in the probe.

    ``exact`` keeps the (rho00 - rho22) term; otherwise terms of order
    Gamma10/Gamma21 are dropped.
    """
    r00, r11, r22 = populations(p, d)
    lam = lambda_coeffs(p, d)
    od2 = d.omega_d_amp ** 2
    den = 2.0 * lam.lambda10 * lam.lambda12 + 0.5 * od2
    if den == 0:
        raise ValidationError("probe response undefined: no damping and no drive")
    num = lam.lambda12 * (r11 - r00)
    if exact:
        num += od2 * (r00 - r22) / (4.0 * lam.lambda02)
    return 1j * num / den


def steady_state_3lvl(p: AtomParams, d: DriveProbe, exact: bool = True) -> ThreeLevelSteadyState:
    r00, r11, r22 = populations(p, d)
    rho10 = d.omega_p_amp * coherence_per_probe(p, d, exact)
    A = r00 / r22 if r22 > 0 else math.inf
    B = r11 / r22 if r22 > 0 else math.inf
    return ThreeLevelSteadyState(r00, r11, r22, rho10, A, B)


def reflection_3lvl(p: AtomParams, d: DriveProbe, kind=GeometryKind.MIRROR, exact: bool = True) -> complex:
    """Reflection coefficient of the weak probe.

    ``exact=True`` uses the full first-order coherence; ``exact=False`` the
    form that neglects O(Gamma10/Gamma21).
    """
    x = coherence_per_probe(p, d, exact)
    return 1.0 - _channel_factor(kind) * 1j * p.gamma10 * x


def gain_vs_nu(nu: float) -> float:
    """Ideal-limit reflection 1 + 2(nu-1)/(1+nu)^2 with nu = Omega_d^2/(Gamma10 Gamma21)."""
    if nu < 0:
        raise ValidationError("nu must be >= 0")
    return 1.0 + 2.0 * (nu - 1.0) / (1.0 + nu) ** 2


def first_order_max_reflection(ratio: float) -> float:
    """Maximum reflection to first order in ratio = Gamma10/Gamma21."""
    return 1.0 + 0.25 - 0.375 * ratio


def amplification_threshold(p: AtomParams, d: DriveProbe) -> float:
    """Smallest drive amplitude that inverts 0 and 1, Omega_d^2 = 2 Gamma10 |lambda02|^2 / gamma20.

    The O(Gamma10/Gamma21) correction to the threshold is dropped.
    """
    _, _, g20 = total_dephasings(p)
    if g20 <= 0:
        raise ValidationError("threshold undefined for gamma20 = 0")
    lam02 = lambda_coeffs(p, d).lambda02
    return math.sqrt(2.0 * p.gamma10 * abs(lam02) ** 2 / g20)


def _resonant_ratios(p: AtomParams) -> tuple[float, float, float]:
    g10, g21, g20 = total_dephasings(p)
    if p.gamma10 <= 0 or g20 <= 0:
        raise ValidationError("need Gamma10 > 0 and gamma20 > 0")
    c = p.gamma10 * g20 / (g21 * g10)
    return g10, g20, c


def resonant_reflection_with_dephasing(p: AtomParams, omega_d_amp: float) -> float:
    """Resonant reflection with pure dephasing, leading order in Gamma10/Gamma21.

    r = 1 + 2 (Gamma10/gamma10) (eta-1) / ((eta+1)(eta c + 2)),
    eta = Omega_d^2 / (2 Gamma10 gamma20), c = Gamma10 gamma20 / (gamma21 gamma10).
    """
    g10, g20, c = _resonant_ratios(p)
    eta = omega_d_amp ** 2 / (2.0 * p.gamma10 * g20)
    return 1.0 + 2.0 * p.gamma10 / g10 * (eta - 1.0) / ((eta + 1.0) * (eta * c + 2.0))


def dephasing_optimum(p: AtomParams) -> tuple[float, float, float]:
    """(eta_max, optimal Omega_d, maximum r) for resonant drive and probe."""
    g10, g20, c = _resonant_ratios(p)
    eta_c = math.sqrt(2.0 * (1.0 + 2.0 / c))
    eta_max = 1.0 + eta_c
    omega_opt = math.sqrt(2.0 * p.gamma10 * g20 * eta_max)
    r_max = 1.0 + 2.0 * p.gamma10 / g10 * eta_c / ((2.0 + eta_c) * (c * (1.0 + eta_c) + 2.0))
    return eta_max, omega_opt, r_max
