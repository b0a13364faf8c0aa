"""Bare-basis Lindblad steady states for small driven systems.

Density matrices are vectorised by stacking columns, so that
vec(A X B) = (B^T kron A) vec(X).  Element rho[i, j] sits at index j*dim + i.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .qcore import AtomParams, DriveProbe, NumericalError, ValidationError, total_dephasings

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-9
NULLSPACE_TOL = 1e-8


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


def _index(i: int, j: int, dim: int) -> int:
    return j * dim + i


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def __getitem__(self, ij):
        return self.rho[ij]

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()

    def check(self) -> None:
        """Raise NumericalError unless rho is Hermitian, unit-trace and PSD."""
        rho = self.rho
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL:
            raise NumericalError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_ATOL:
            raise NumericalError(f"density matrix trace is {np.trace(rho)!r}")
        herm = 0.5 * (rho + rho.conj().T)
        if np.linalg.eigvalsh(herm).min() < -PSD_ATOL:
            raise NumericalError("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class Liouvillian:
    superop: np.ndarray

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.superop.shape[0])))

    def trace_row(self) -> np.ndarray:
        """Trace functional as a row vector acting on vec(rho)."""
        return vec(np.eye(self.dim)).astype(complex)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.superop @ vec(rho), self.dim)


def build_hamiltonian_3lvl(p: AtomParams, d: DriveProbe) -> np.ndarray:
    """Three-level Hamiltonian in the frame rotating at drive and probe.

    H = dw10 s11 + dw20 s22 + (Od/2)(s20 + s02) + (Op/2)(s10 + s01)
    """
    if p.n_levels != 3:
        raise ValidationError("build_hamiltonian_3lvl needs a three-level atom")
    H = np.zeros((3, 3), dtype=complex)
    H[1, 1] = d.delta_probe
    H[2, 2] = d.delta_drive
    H[0, 2] = H[2, 0] = 0.5 * d.omega_d_amp
    H[0, 1] = H[1, 0] = 0.5 * d.omega_p_amp
    return H


def _transition(op: np.ndarray) -> tuple[int, int]:
    """(i, j) for an operator proportional to |i><j| with i != j."""
    nz = np.argwhere(np.abs(op) > 0)
    if len(nz) != 1 or nz[0][0] == nz[0][1]:
        raise ValidationError(
            "with coherence damping given explicitly, collapse operators must be "
            "single transition operators |i><j|"
        )
    return int(nz[0][0]), int(nz[0][1])


def build_liouvillian(
    H: np.ndarray,
    collapse: Iterable[tuple[float, np.ndarray]] = (),
    dephasing: Iterable[tuple[float, tuple[int, int]]] = (),
    *,
    full_lindblad: bool = False,
) -> Liouvillian:
    """Superoperator for d(rho)/dt = -i[H, rho] + dissipator.

    By default the dissipator is written in component form: each collapse
    channel ``(rate, |j><i|)`` moves population from i to j at ``rate``, and
    every coherence rho_ij decays at the total rate given for the pair (i, j)
    in ``dephasing``.  Coherences get no damping from the collapse channels in
    this mode, which is what lets gamma21 exclude the Gamma10/2 term.

    With ``full_lindblad=True`` the collapse operators enter in the usual
    Lindblad form rate*(L rho L^+ - {L^+L, rho}/2) and ``dephasing`` adds
    extra coherence damping on top.
    """
    H = np.asarray(H, dtype=complex)
    dim = H.shape[0]
    if H.shape != (dim, dim) or np.max(np.abs(H - H.conj().T)) > 1e-12 * max(1.0, np.abs(H).max()):
        raise ValidationError("Hamiltonian must be a Hermitian square matrix")
    eye = np.eye(dim)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))

    for rate, op in collapse:
        if rate < 0:
            raise ValidationError("collapse rates must be >= 0")
        op = np.asarray(op, dtype=complex)
        if full_lindblad:
            ldl = op.conj().T @ op
            L += rate * (np.kron(op.conj(), op) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye))
        else:
            j, i = _transition(op)
            w = rate * abs(op[j, i]) ** 2
            L[_index(j, j, dim), _index(i, i, dim)] += w
            L[_index(i, i, dim), _index(i, i, dim)] -= w

    for rate, (i, j) in dephasing:
        if rate < 0:
            raise ValidationError("dephasing rates must be >= 0")
        if i == j:
            raise ValidationError("dephasing acts on coherences, i != j")
        L[_index(i, j, dim), _index(i, j, dim)] -= rate
        L[_index(j, i, dim), _index(j, i, dim)] -= rate
    return Liouvillian(L)


def pumped_liouvillian(p: AtomParams, d: DriveProbe) -> Liouvillian:
    """Liouvillian of the pumped three-level atom with relaxation 2->1->0."""
    H = build_hamiltonian_3lvl(p, d)
    s01 = np.zeros((3, 3))
    s01[0, 1] = 1.0
    s12 = np.zeros((3, 3))
    s12[1, 2] = 1.0
    g10, g21, g20 = total_dephasings(p)
    return build_liouvillian(
        H,
        collapse=[(p.gamma10, s01), (p.gamma21, s12)],
        dephasing=[(g10, (1, 0)), (g21, (2, 1)), (g20, (2, 0))],
    )


def _solve_with_trace(superop: np.ndarray, trace_row: np.ndarray) -> np.ndarray:
    n = superop.shape[0]
    scale = max(1.0, np.abs(superop).max())
    sv = np.linalg.svd(superop / scale, compute_uv=False)
    if n > 1 and sv[-2] < NULLSPACE_TOL:
        raise NumericalError("non-unique steady state: null space dimension > 1")
    M = superop.copy()
    M[0, :] = trace_row * scale
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = scale
    return np.linalg.solve(M, rhs)


def steady_state(liou: Liouvillian, *, check: bool = True) -> DensityMatrix:
    """Null vector of the Liouvillian normalised to unit trace.

    The first row (the d rho_00/dt equation, redundant because the trace is
    conserved) is replaced by the trace condition.
    """
    x = _solve_with_trace(liou.superop, liou.trace_row())
    residual = np.abs(liou.superop @ x).max()
    if residual > 1e-10 * max(1.0, np.abs(liou.superop).max()):
        raise NumericalError(f"steady-state residual {residual:.3g} too large")
    rho = unvec(x, liou.dim)
    if check:
        DensityMatrix(rho).check()
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def pumped_steady_state(p: AtomParams, d: DriveProbe) -> DensityMatrix:
    return steady_state(pumped_liouvillian(p, d))


def probe_reflection(p: AtomParams, d: DriveProbe, channels: int = 1) -> complex:
    """r = 1 - 2i (Gamma10/Omega_p) rho10 from the master equation.

    ``channels`` is 1 for a mirror and 2 for an open waveguide (the factor in
    front of the atomic term is 2/channels).
    """
    if d.omega_p_amp <= 0:
        raise ValidationError("probe_reflection needs a nonzero probe amplitude")
    rho = pumped_steady_state(p, d)
    return 1.0 - (2.0 / channels) * 1j * p.gamma10 / d.omega_p_amp * rho[1, 0]

