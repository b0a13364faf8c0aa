"""Independent reference implementations used by the tests.

Nothing here imports the package: these are straightforward bare-basis
master-equation solvers written directly from the model definitions, so a
shared bug cannot make an implementation agree with its oracle.
"""
import numpy as np

# Frozen reference values (computed once with these oracles and kept fixed).
TWO_LEVEL_MIRROR_MAX = 1.0689993070      # at Omega_d = 2.0375 G, |delta| = 1.2282 G
TWO_LEVEL_MIRROR_ARGMAX = (2.0375, 1.2282)
TWO_LEVEL_OPEN_MAX = 1.0343844238        # at Omega_d = 2.0348 G, |delta| = 1.2155 G
PUMPED_RATIO_001_MAX = 1.2463069         # Gamma10/Gamma21 = 0.01, full coherence
FIG3_OPTIMUM = (1.20494, 59.71)          # |r|, Omega_d/2pi in MHz with alpha/2pi = -340 MHz


def _col(i, j, d):
    return j * d + i


def pumped_rho(G10, G21, gp10, gp21, gp20, dw10, dw20, Od, Op):
    """Steady state of the pumped ladder from an explicitly assembled Liouvillian.

    Relaxation moves population 2->1->0; each coherence ij decays at its own
    total rate gamma_ij (Gamma10/2 + gp10, Gamma21/2 + gp21, Gamma21/2 + gp20).
    """
    d = 3
    H = np.zeros((3, 3), complex)
    H[1, 1], H[2, 2] = dw10, dw20
    H[0, 2] = H[2, 0] = Od / 2
    H[0, 1] = H[1, 0] = Op / 2
    eye = np.eye(d)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    L[_col(1, 1, d), _col(2, 2, d)] += G21
    L[_col(2, 2, d), _col(2, 2, d)] -= G21
    L[_col(0, 0, d), _col(1, 1, d)] += G10
    L[_col(1, 1, d), _col(1, 1, d)] -= G10
    g = {(1, 0): G10 / 2 + gp10, (2, 1): G21 / 2 + gp21, (2, 0): G21 / 2 + gp20}
    for (i, j), rate in g.items():
        L[_col(i, j, d), _col(i, j, d)] -= rate
        L[_col(j, i, d), _col(j, i, d)] -= rate
    M = L.copy()
    M[0, :] = eye.ravel(order="F")
    b = np.zeros(d * d, complex)
    b[0] = 1
    return np.linalg.solve(M, b).reshape(d, d, order="F")


def pumped_r(G10, G21, Od, gp=(0, 0, 0), dw10=0.0, dw20=0.0, factor=2.0, Op=1e-7):
    rho = pumped_rho(G10, G21, *gp, dw10, dw20, Od, Op * G10)
    return 1 - factor * 1j * G10 * rho[1, 0] / (Op * G10)


def ladder(Od, G10, G21, d10, d20=None):
    """(H, sigma_t) of a driven ladder; d20=None means a two-level atom."""
    if d20 is None:
        H = np.array([[0, Od / 2], [Od / 2, d10]], float)
        s = np.array([[0, np.sqrt(G10)], [0, 0]], float)
        return H, s
    k = np.sqrt(G21 / G10)
    H = np.array([[0, Od / 2, 0], [Od / 2, d10, k * Od / 2], [0, k * Od / 2, d20]], float)
    s = np.array([[0, np.sqrt(G10), 0], [0, 0, np.sqrt(G21)], [0, 0, 0]], float)
    return H, s


def lindblad_reflection(H, s, offset, open_=False):
    """r from a full Lindblad master equation plus first-order probe response.

    The waveguide couples through sigma_t = s (mirror) or two channels of
    s/sqrt(2) (open line).  ``offset`` is omega_p - omega_d.
    """
    d = H.shape[0]
    eye = np.eye(d)
    st = s / np.sqrt(2) if open_ else s
    spre = lambda A: np.kron(eye, A)
    spost = lambda A: np.kron(A.T, eye)
    L0 = -1j * (spre(H) - spost(H))
    for _ in range(2 if open_ else 1):
        cd = st.conj().T
        L0 += np.kron(st.conj(), st) - 0.5 * spre(cd @ st) - 0.5 * spost(cd @ st)
    M = L0.copy()
    M[0, :] = eye.ravel(order="F")
    b = np.zeros(d * d, complex)
    b[0] = 1
    rho = np.linalg.solve(M, b).reshape(d, d, order="F")
    src = 1j * (st.conj().T @ rho - rho @ st.conj().T)
    rp = np.linalg.solve(L0 + 1j * offset * np.eye(d * d), src.ravel(order="F")).reshape(d, d, order="F")
    return 1 - 1j * np.trace(st @ rp)


def lindblad_populations(H, s):
    """Steady-state density matrix of the driven ladder, single channel s."""
    d = H.shape[0]
    eye = np.eye(d)
    L0 = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    cd = s.conj().T
    L0 += np.kron(s.conj(), s) - 0.5 * np.kron(eye, cd @ s) - 0.5 * np.kron((cd @ s).T, eye)
    M = L0.copy()
    M[0, :] = eye.ravel(order="F")
    b = np.zeros(d * d, complex)
    b[0] = 1
    return np.linalg.solve(M, b).reshape(d, d, order="F")
