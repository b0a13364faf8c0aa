"""Dressed-state engine for driven two- and three-level atoms.

The atom plus classical drive is diagonalised in the frame rotating at the
drive.  Dissipation is written in that eigenbasis as a superoperator Xi
acting on the vector of expectation values <sigma_mu,nu>, and the weak probe
enters through Z.  Vectors are indexed row-major: (mu, nu) -> mu*dim + nu.

Steady state:      (i w_mn - Xi) S = 0,            sum_mu S_mumu = 1
Linear response:   (i (w_mn + D) - Xi) L = i Z S,  D = omega_p - omega_d
Reflection:        r = 1 - i sum_mn <mu|sigma_t|nu> L_mn
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qcore import (
    AtomParams,
    DriveProbe,
    GeometryKind,
    NumericalError,
    ReflectionResult,
    Scheme,
    ValidationError,
)

STEADY_RESIDUAL = 1e-10
RESPONSE_RESIDUAL = 1e-8
DEGENERATE_TOL = 1e-10

LABELS = {2: ("g", "e"), 3: ("g", "m", "e")}


@dataclass(frozen=True)
class DressedSystem:
    omega: np.ndarray       # eigenfrequencies, ascending
    basis: np.ndarray       # columns are eigenvectors
    sigma_t: np.ndarray     # <mu|sigma_t|nu>
    kind: GeometryKind = GeometryKind.MIRROR

    @property
    def dim(self) -> int:
        return len(self.omega)

    @property
    def labels(self) -> tuple:
        return LABELS[self.dim]

    def label(self, mu: int, nu: int) -> str:
        return self.labels[mu] + self.labels[nu]

    @property
    def omega_pairs(self) -> np.ndarray:
        """w_mu - w_nu in vector order."""
        return (self.omega[:, None] - self.omega[None, :]).ravel()


@dataclass(frozen=True)
class Superoperators:
    xi: np.ndarray
    zeta: np.ndarray


@dataclass(frozen=True)
class LinearResponse:
    s_steady: np.ndarray
    s_linear: np.ndarray
    r: complex


def _check_no_dephasing(p: AtomParams) -> None:
    if p.gphi10 or (p.n_levels == 3 and (p.gphi21 or p.gphi20)):
        raise ValidationError("the dressed-state engine does not model pure dephasing")


def build_atom_hamiltonian(p: AtomParams, d: DriveProbe, scheme) -> np.ndarray:
    """Atom plus drive in the drive frame.

    Two-level: diag(0, d10) + (Od/2) sx.  Two-photon three-level:
    diag(0, d10, d20) + (Od/2)(c + c^T) with c = s01 + sqrt(G21/G10) s12,
    d10 = omega10 - omega_d and d20 = 2*d10 + alpha.  The same Od is the
    Rabi amplitude on 0<->1 in every geometry.
    """
    scheme = Scheme(scheme)
    if not scheme.dressed:
        raise ValidationError(f"{scheme.value} is not a dressed-state scheme")
    if p.n_levels != scheme.n_levels:
        raise ValidationError(f"{scheme.value} needs a {scheme.n_levels}-level atom")
    half = 0.5 * d.omega_d_amp
    if scheme is Scheme.TWO_LEVEL_RESONANT:
        return np.array([[0.0, half], [half, d.delta_drive]])
    if p.alpha is None:
        raise ValidationError("two-photon scheme needs the anharmonicity alpha")
    if p.gamma10 <= 0:
        raise ValidationError("two-photon scheme needs gamma10 > 0")
    d10 = d.delta_drive
    d20 = 2.0 * d10 + p.alpha
    k = math.sqrt(p.gamma21 / p.gamma10)
    return np.array([
        [0.0, half, 0.0],
        [half, d10, k * half],
        [0.0, k * half, d20],
    ])


def bare_sigma_t(p: AtomParams, kind=GeometryKind.MIRROR) -> np.ndarray:
    """Lowering operator weighted by the square-root decay rates."""
    dim = p.n_levels
    s = np.zeros((dim, dim))
    s[0, 1] = math.sqrt(p.gamma10)
    if dim == 3:
        s[1, 2] = math.sqrt(p.gamma21)
    if GeometryKind(kind) is GeometryKind.OPEN:
        s /= math.sqrt(2.0)
    return s


def dress(H: np.ndarray, p: AtomParams, kind=GeometryKind.MIRROR) -> DressedSystem:
    H = np.asarray(H, dtype=float)
    if H.shape[0] != p.n_levels or np.max(np.abs(H - H.T)) > 1e-12 * max(1.0, np.abs(H).max()):
        raise ValidationError("H must be real symmetric with one row per atomic level")
    w, V = np.linalg.eigh(H)
    # make each eigenvector's first nonzero entry positive
    for j in range(V.shape[1]):
        col = V[:, j]
        first = col[np.argmax(np.abs(col) > 1e-14)]
        if first < 0:
            V[:, j] = -col
    s = V.T @ bare_sigma_t(p, kind) @ V
    return DressedSystem(w, V, s.astype(complex), GeometryKind(kind))


def superoperators(ds: DressedSystem) -> Superoperators:
    s = ds.sigma_t
    eye = np.eye(ds.dim)
    K = s.conj().T @ s
    xi = 0.5 * np.kron(eye, K) + 0.5 * np.kron(K.T, eye) - np.kron(s.conj(), s)
    if ds.kind is GeometryKind.OPEN:
        xi = 2.0 * xi      # two output channels
    zeta = np.kron(eye, s.conj().T) - np.kron(s.conj(), eye)
    return Superoperators(xi, zeta)


def _trace_row(dim: int) -> np.ndarray:
    return np.eye(dim).ravel().astype(complex)


def steady_state_dressed(so: Superoperators, ds: DressedSystem) -> np.ndarray:
    n = ds.dim ** 2
    M = 1j * np.diag(ds.omega_pairs) - so.xi
    scale = max(1.0, np.abs(M).max())
    sv = np.linalg.svd(M / scale, compute_uv=False)
    if sv[-2] < DEGENERATE_TOL:
        raise NumericalError("degenerate steady state: more than one stationary solution")
    A = M.copy()
    A[0, :] = _trace_row(ds.dim)
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    S = np.linalg.solve(A, rhs)
    res = np.abs(M @ S).max()
    if res > STEADY_RESIDUAL * scale:
        raise NumericalError(f"steady-state residual {res:.3g} too large")
    return S


def _response_matrices(so: Superoperators, ds: DressedSystem, offsets: np.ndarray) -> np.ndarray:
    n = ds.dim ** 2
    base = 1j * np.diag(ds.omega_pairs) - so.xi
    A = np.broadcast_to(base, (len(offsets), n, n)).copy()
    A += 1j * offsets[:, None, None] * np.eye(n)
    A[:, 0, :] = _trace_row(ds.dim)
    return A


def _offending_pair(so: Superoperators, ds: DressedSystem, offset: float) -> str:
    diag = np.abs(1j * (ds.omega_pairs + offset) - np.diag(so.xi))
    k = int(np.argmin(diag[1:])) + 1
    return ds.label(*divmod(k, ds.dim))


def linear_response_many(
    so: Superoperators, ds: DressedSystem, offsets, s_steady: np.ndarray
) -> np.ndarray:
    """Linear response per unit probe amplitude at each offset omega_p - omega_d.

    Returns an array of shape (len(offsets), dim^2).  The d<s_00>/dt row is
    replaced by the condition that the response carries no population.
    """
    offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
    A = _response_matrices(so, ds, offsets)
    b = 1j * so.zeta @ s_steady
    b[0] = 0.0
    try:
        L = np.linalg.solve(A, np.broadcast_to(b, (len(offsets), len(b)))[..., None])[..., 0]
    except np.linalg.LinAlgError:
        bad = offsets[np.argmin([abs(np.linalg.det(a)) for a in A])]
        raise NumericalError(
            f"singular linear-response system at offset {bad:.6g} "
            f"(undamped resonance on branch {_offending_pair(so, ds, bad)})"
        ) from None
    res = np.abs(np.einsum("kij,kj->ki", A, L) - b).max(axis=1)
    tol = RESPONSE_RESIDUAL * max(1.0, np.abs(b).max())
    if np.any(res > tol):
        k = int(np.argmax(res))
        raise NumericalError(
            f"linear-response residual {res[k]:.3g} at offset {offsets[k]:.6g} "
            f"(near-undamped branch {_offending_pair(so, ds, offsets[k])})"
        )
    return L


def linear_response(so: Superoperators, ds: DressedSystem, omega_p_minus_omega_d: float, s_steady) -> np.ndarray:
    return linear_response_many(so, ds, [omega_p_minus_omega_d], s_steady)[0]


def reflection_dressed(ds: DressedSystem, s_linear: np.ndarray) -> complex:
    return complex(1.0 - 1j * (ds.sigma_t.ravel() @ s_linear))


def populations(ds: DressedSystem, s_steady: np.ndarray) -> np.ndarray:
    """Dressed-state populations <sigma_mumu> in ascending-frequency order."""
    return np.real(s_steady.reshape(ds.dim, ds.dim).diagonal()).copy()


def resonant_branch_gain(ds: DressedSystem, so: Superoperators, s_steady, branch) -> float:
    """Single-branch gain |s_mn|^2 (S_nn - S_mm) / Xi_(mn),(mn).

    Valid when the probe sits on the branch, omega_p = omega_d + w_n - w_m,
    and the branch is well separated from the others.
    """
    mu, nu = branch
    if mu == nu:
        raise ValidationError("branch needs two different dressed states")
    dim = ds.dim
    k = mu * dim + nu
    pops = populations(ds, s_steady)
    val = abs(ds.sigma_t[mu, nu]) ** 2 * (pops[nu] - pops[mu]) / so.xi[k, k]
    return float(np.real(val))


def branch_frequencies(ds: DressedSystem, omega_d: float = 0.0, include_central: bool = False):
    """Probe frequencies omega_d + w_nu - w_mu of every dressed transition.

    Returns a list of ((mu, nu), omega_p).  With ``include_central`` the
    elastic line at omega_d is listed once as (0, 0).
    """
    out = []
    if include_central:
        out.append(((0, 0), float(omega_d)))
    for mu in range(ds.dim):
        for nu in range(ds.dim):
            if mu != nu:
                out.append(((mu, nu), float(omega_d + ds.omega[nu] - ds.omega[mu])))
    return out


def two_level_reflection_closed_form(p: AtomParams, omega_d_amp: float, delta: float) -> complex:
    """Two-level atom at a mirror under resonant drive, delta = omega10 - omega_p.

    Written in the package's time convention, in which an undriven atom gives
    r = 1 - 2G/(G + 2i delta); the opposite convention conjugates r.
    """
    G = p.gamma10
    if G <= 0:
        raise ValidationError("closed form needs gamma10 > 0")
    d = -delta
    O2 = omega_d_amp ** 2
    num = 2 * G**2 * (G**3 - 3j * G**2 * d - 2 * G * d**2 + 2j * d * O2)
    den = (G - 2j * d) * (G**2 + 2 * O2) * (G**2 - 3j * G * d - 2 * d**2 + 2 * O2)
    return complex(1.0 - num / den)


@dataclass(frozen=True)
class DressedModel:
    """Everything for one (atom, drive) point; reusable across probe offsets."""

    system: DressedSystem
    ops: Superoperators
    s_steady: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, p: AtomParams, d: DriveProbe, scheme, kind=GeometryKind.MIRROR) -> "DressedModel":
        _check_no_dephasing(p)
        ds = dress(build_atom_hamiltonian(p, d, scheme), p, kind)
        so = superoperators(ds)
        return cls(ds, so, steady_state_dressed(so, ds))

    @property
    def populations(self) -> np.ndarray:
        return populations(self.system, self.s_steady)

    def response(self, offset: float) -> LinearResponse:
        L = linear_response(self.ops, self.system, offset, self.s_steady)
        return LinearResponse(self.s_steady, L, reflection_dressed(self.system, L))

    def reflection(self, offset: float) -> complex:
        return self.response(offset).r

    def spectrum(self, offsets) -> np.ndarray:
        """Complex r at each probe offset omega_p - omega_d."""
        L = linear_response_many(self.ops, self.system, offsets, self.s_steady)
        return 1.0 - 1j * (L @ self.system.sigma_t.ravel())

    def branch_gain(self, branch) -> float:
        return resonant_branch_gain(self.system, self.ops, self.s_steady, branch)

    def branch_offset(self, branch) -> float:
        mu, nu = branch
        return float(self.system.omega[nu] - self.system.omega[mu])


def probe_offset(d: DriveProbe) -> float:
    """omega_p - omega_d from the two detunings."""
    return d.delta_drive - d.delta_probe


def reflection_dressed_setup(p: AtomParams, d: DriveProbe, scheme, kind=GeometryKind.MIRROR) -> ReflectionResult:
    m = DressedModel.build(p, d, scheme, kind)
    return ReflectionResult(m.reflection(probe_offset(d)), tuple(m.populations))
