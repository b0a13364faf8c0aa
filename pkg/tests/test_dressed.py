import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from amp import dressed, presets
from amp.qcore import AtomParams, DriveProbe, GeometryKind, NumericalError, ValidationError

MIRROR, OPEN = GeometryKind.MIRROR, GeometryKind.OPEN


def model3(od, g21=2.0, d10=0.0, alpha=-6.0, kind=MIRROR):
    p = AtomParams(3, 1.0, g21, alpha=alpha)
    return dressed.DressedModel.build(p, DriveProbe(od, delta_drive=d10), "ThreeLevelTwoPhoton", kind)


def model2(od, d10=0.0, kind=MIRROR):
    return dressed.DressedModel.build(AtomParams(2, 1.0), DriveProbe(od, delta_drive=d10), "TwoLevelResonant", kind)


# at zero offset the bare Liouvillian is singular; the engine closes it with
# the zero-trace condition instead, checked separately below
offsets = st.floats(-20, 20).filter(lambda x: abs(x) > 1e-2)


@given(od=st.floats(0.1, 10), d10=st.floats(-3, 3), off=offsets, open_=st.booleans())
def test_two_level_matches_lindblad_oracle(od, d10, off, open_):
    m = model2(od, d10, OPEN if open_ else MIRROR)
    H, s = oracles.ladder(od, 1.0, None, d10)
    assert abs(m.reflection(off) - oracles.lindblad_reflection(H, s, off, open_)) < 1e-9


@given(od=st.floats(0.1, 14), g21=st.floats(0.3, 5), d10=st.floats(-6, 6), alpha=st.floats(-15, 5),
       off=offsets, open_=st.booleans())
def test_three_level_matches_lindblad_oracle(od, g21, d10, alpha, off, open_):
    m = model3(od, g21, d10, alpha, OPEN if open_ else MIRROR)
    H, s = oracles.ladder(od, 1.0, g21, d10, 2 * d10 + alpha)
    assert abs(m.reflection(off) - oracles.lindblad_reflection(H, s, off, open_)) < 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_zero_offset_is_continuous_limit(n):
    m = model2(1.3, 0.4) if n == 2 else model3(1.3, d10=0.4)
    assert abs(m.reflection(0.0) - m.reflection(1e-7)) < 1e-5


@given(od=st.floats(0.1, 14), g21=st.floats(0.3, 5), d10=st.floats(-6, 6), alpha=st.floats(-15, 5))
def test_populations_match_lindblad_oracle(od, g21, d10, alpha):
    m = model3(od, g21, d10, alpha)
    H, s = oracles.ladder(od, 1.0, g21, d10, 2 * d10 + alpha)
    rho = oracles.lindblad_populations(H, s)
    V = m.system.basis
    assert np.allclose(np.real(np.diag(V.T @ rho @ V)), m.populations, atol=1e-10)


@given(od=st.floats(0.1, 14), g21=st.floats(0.3, 5), d10=st.floats(-6, 6), alpha=st.floats(-15, 5))
def test_eigen_invariants(od, g21, d10, alpha):
    p = AtomParams(3, 1.0, g21, alpha=alpha)
    H = dressed.build_atom_hamiltonian(p, DriveProbe(od, delta_drive=d10), "ThreeLevelTwoPhoton")
    ds = dressed.dress(H, p)
    V = ds.basis
    assert np.allclose(V.T @ V, np.eye(3), atol=1e-12)
    assert np.allclose(V @ np.diag(ds.omega) @ V.T, H, atol=1e-10)
    assert np.all(np.diff(ds.omega) >= 0)
    assert ds.omega.sum() == pytest.approx(np.trace(H), abs=1e-10)
    for j in range(3):
        col = V[:, j]
        assert col[np.argmax(np.abs(col) > 1e-14)] > 0


@given(od=st.floats(0.1, 14), g21=st.floats(0.3, 5), d10=st.floats(-6, 6), alpha=st.floats(-15, 5),
       open_=st.booleans())
def test_xi_conserves_population(od, g21, d10, alpha, open_):
    xi = model3(od, g21, d10, alpha, OPEN if open_ else MIRROR).ops.xi
    rows = [0, 4, 8]
    assert np.abs(xi[rows].sum(axis=0)).max() < 1e-12


@given(od=st.floats(0.1, 14), g21=st.floats(0.3, 5), d10=st.floats(-6, 6))
def test_open_xi_equals_mirror_xi(od, g21, d10):
    # half the amplitude into each of two channels: same total decay
    assert np.allclose(model3(od, g21, d10, kind=OPEN).ops.xi, model3(od, g21, d10).ops.xi, atol=1e-12)


def test_undriven_ground_state():
    m = model3(0.0, d10=1.0)
    assert sorted(m.populations) == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)
    S = m.s_steady.reshape(3, 3)
    V = m.system.basis
    bare = V @ S @ V.T
    assert bare[0, 0].real == pytest.approx(1.0, abs=1e-12)


def test_undriven_two_level_reflection_is_lorentzian():
    m = model2(0.0)
    for delta in (-2.0, -0.3, 0.0, 0.7):
        # offset omega_p - omega_d = -delta when omega_d = omega10 - delta_drive and d10 = 0
        r = m.reflection(-delta)
        assert r == pytest.approx(1 - 2 / (1 + 2j * delta), abs=1e-12)


@given(od=st.floats(0.05, 10), delta=st.floats(-5, 5))
def test_two_level_closed_form(od, delta):
    p = AtomParams(2, 1.0)
    cf = dressed.two_level_reflection_closed_form(p, od, delta)
    assert abs(cf - model2(od).reflection(-delta)) < 1e-10


def test_two_level_mirror_maximum_frozen():
    from scipy.optimize import minimize

    p = AtomParams(2, 1.0)
    f = lambda x: -abs(dressed.two_level_reflection_closed_form(p, x[0], x[1]))
    res = minimize(f, [2.0, 1.2], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    assert -res.fun == pytest.approx(oracles.TWO_LEVEL_MIRROR_MAX, abs=1e-9)
    assert abs(res.x[0]) == pytest.approx(oracles.TWO_LEVEL_MIRROR_ARGMAX[0], abs=1e-3)
    assert abs(res.x[1]) == pytest.approx(oracles.TWO_LEVEL_MIRROR_ARGMAX[1], abs=1e-3)


def test_dephasing_rejected():
    p = AtomParams(3, 1.0, 2.0, alpha=-6.0, gphi10=0.1)
    with pytest.raises(ValidationError, match="dephasing"):
        dressed.DressedModel.build(p, DriveProbe(1.0), "ThreeLevelTwoPhoton")


def test_scheme_mismatch_rejected():
    with pytest.raises(ValidationError):
        dressed.build_atom_hamiltonian(AtomParams(3, 1.0, 2.0, alpha=-1.0), DriveProbe(1.0), "TwoLevelResonant")
    with pytest.raises(ValidationError):
        dressed.build_atom_hamiltonian(AtomParams(3, 1.0, 2.0), DriveProbe(1.0), "ThreeLevelTwoPhoton")
    with pytest.raises(ValidationError):
        dressed.build_atom_hamiltonian(AtomParams(3, 1.0, 2.0, alpha=-1.0), DriveProbe(1.0), "ThreeLevelPumped")


def test_branch_gain_rejects_diagonal():
    with pytest.raises(ValidationError):
        model3(2.0).branch_gain((1, 1))


def test_degenerate_steady_state_detected():
    # Gamma21 = 0 and the drive leaves level 2 uncoupled and undamped
    p = AtomParams(3, 1.0, 0.0, alpha=-6.0)
    with pytest.raises(NumericalError, match="degenerate"):
        dressed.DressedModel.build(p, DriveProbe(0.0), "ThreeLevelTwoPhoton")


def test_mollow_branches():
    m = model2(20.0)
    br = dict(dressed.branch_frequencies(m.system, 0.0, include_central=True))
    assert br[(0, 0)] == 0.0
    assert br[(0, 1)] == pytest.approx(20.0)
    assert br[(1, 0)] == pytest.approx(-20.0)
    assert len(br) == 3


def test_branch_labels():
    m = model3(2.0)
    assert m.system.labels == ("g", "m", "e")
    assert m.system.label(0, 1) == "gm"
    assert presets.branch_names() == ["gm", "ge", "mg", "me", "eg", "em"]


def _crossings(x, y):
    idx = np.nonzero(np.sign(y[:-1]) != np.sign(y[1:]))[0]
    return [x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]) for i in idx]


def test_population_difference_crossings():
    od = np.linspace(0.2, 14, 691)
    rows = presets.fig5_population_differences(od)
    mm_gg, ee_gg, ee_mm = rows[:, 1], rows[:, 2], rows[:, 3]
    c_eg = _crossings(od, ee_gg)
    c_em = _crossings(od, ee_mm)
    assert len(c_eg) == 1 and c_eg[0] == pytest.approx(2.11, abs=0.05)
    assert len(c_em) == 1 and c_em[0] == pytest.approx(3.60, abs=0.05)
    assert _crossings(od, mm_gg) == []


# The imaginary part of r - 1 at a branch is the dispersive tail of the other
# lines (including the elastic line at the drive); the gain is the real part.
@pytest.mark.parametrize("branch", [(0, 1), (1, 0)])
def test_two_level_branch_consistency(branch):
    m = model2(1000.0)
    r = m.reflection(m.branch_offset(branch))
    assert abs(r.real - 1 - m.branch_gain(branch)) < 1e-6


WELL_SEPARATED = dict(od=1000.0, g21=2.0, d10=2000.0, alpha=-1000.0)


@pytest.mark.parametrize("branch", [(0, 1), (1, 0), (2, 1), (0, 2), (2, 0)])
def test_three_level_branch_consistency_well_separated(branch):
    m = model3(**WELL_SEPARATED)
    r = m.reflection(m.branch_offset(branch))
    assert abs(r.real - 1 - m.branch_gain(branch)) < 1e-6


def test_weak_branch_next_to_strong_absorber():
    # m->e is ~235 linewidths from g->m, whose gain is ~1e4 times larger; the
    # residual is that neighbour's Lorentzian tail, ~ g_gm * (gamma / spacing)^2
    m = model3(**WELL_SEPARATED)
    r = m.reflection(m.branch_offset((1, 2)))
    spacing = abs(m.branch_offset((1, 2)) - m.branch_offset((0, 1)))
    tail = abs(m.branch_gain((0, 1))) * (2.0 / spacing) ** 2
    assert abs(r.real - 1 - m.branch_gain((1, 2))) < tail


def test_spectrum_matches_pointwise():
    m = model3(5.0, d10=1.0)
    offs = np.linspace(-10, 10, 41)
    spec = m.spectrum(offs)
    assert np.allclose(spec, [m.reflection(o) for o in offs], atol=1e-13)


def test_probe_offset_convention():
    assert dressed.probe_offset(DriveProbe(delta_probe=0.3, delta_drive=1.0)) == pytest.approx(0.7)


def test_reflection_dressed_setup():
    p = AtomParams(2, 1.0)
    d = DriveProbe(2.0375, delta_probe=1.2282)
    res = dressed.reflection_dressed_setup(p, d, "TwoLevelResonant")
    assert res.abs_r == pytest.approx(oracles.TWO_LEVEL_MIRROR_MAX, abs=1e-7)
    assert sum(res.populations) == pytest.approx(1.0)
