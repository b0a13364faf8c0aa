import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from amp import optimize as opt
from amp.qcore import AtomParams, DriveProbe, Geometry, Setup, ValidationError

PUMPED = Setup("ThreeLevelPumped", AtomParams(3, 0.01, 1.0), Geometry.mirror())
TWO_LEVEL = Setup("TwoLevelResonant", AtomParams(2, 1.0), Geometry.mirror())


def two_level_spec(n1=36, n2=61, objective="AbsReflection"):
    return opt.SweepSpec(
        (opt.Axis("drive.omega_d_amp", 0.5, 4.0, n1, "Gamma10"),
         opt.Axis("drive.probe_offset", -3.0, 3.0, n2, "Gamma10")),
        opt.Objective(objective),
    )


def test_axis_validation():
    with pytest.raises(ValidationError, match="min must be"):
        opt.Axis("drive.omega_d_amp", 1.0, 1.0, 5)
    with pytest.raises(ValidationError, match="at least 2"):
        opt.Axis("drive.omega_d_amp", 0.0, 1.0, 1)
    with pytest.raises(ValidationError, match="cannot resolve"):
        opt.Axis("drive.omega_dd", 0.0, 1.0, 5)
    with pytest.raises(ValidationError, match="cannot resolve"):
        opt.Axis("atom.n_levels", 0.0, 1.0, 5)
    ax = opt.Axis("atom.omega10", 4.0, 5.0, 11, "GHz")
    assert ax.step == pytest.approx(0.1)
    assert ax.column == "omega10/GHz"


def test_objective_validation():
    with pytest.raises(ValidationError):
        opt.Objective("Fidelity")
    with pytest.raises(ValidationError):
        opt.Objective("ResonantBranchGain")
    with pytest.raises(ValidationError):
        opt.Objective("Gain", (0, 1))
    assert opt.Objective("ResonantBranchGain", "gm").branch == (0, 1)
    assert opt.Objective("ResonantBranchGain", ("m", "e")).column == "branch_gain_me"
    with pytest.raises(ValidationError):
        opt.parse_branch("gg")


def test_objective_scheme_mismatch():
    spec = opt.SweepSpec((opt.Axis("drive.omega_d_amp", 0.1, 1.0, 5),), opt.Objective("ResonantBranchGain", "gm"))
    with pytest.raises(ValidationError):
        opt.run_sweep(spec, PUMPED)
    spec2 = opt.SweepSpec((opt.Axis("drive.omega_d_amp", 0.1, 1.0, 5),), opt.Objective("ResonantBranchGain", "me"))
    with pytest.raises(ValidationError, match="out of range"):
        opt.run_sweep(spec2, TWO_LEVEL)


def test_probe_offset_needs_dressed_scheme():
    spec = opt.SweepSpec((opt.Axis("drive.probe_offset", -1.0, 1.0, 5),))
    with pytest.raises(ValidationError, match="dressed"):
        opt.run_sweep(spec, PUMPED)


def test_apply_virtual_paths():
    base = Setup("ThreeLevelPumped", AtomParams(3, 1.0, 4.0, omega10=100.0, alpha=-5.0))
    s = opt.apply(base, {"drive.omega_d": 190.0, "drive.omega_p": 101.0, "drive.nu": 2.0})
    assert s.drive.delta_drive == pytest.approx(5.0)
    assert s.drive.delta_probe == pytest.approx(-1.0)
    assert s.drive.omega_d_amp == pytest.approx(math.sqrt(8.0))
    two = Setup("TwoLevelResonant", AtomParams(2, 1.0, omega10=100.0))
    s2 = opt.apply(two, {"drive.omega_d": 99.0, "drive.probe_offset": 0.5})
    assert s2.drive.delta_drive == pytest.approx(1.0)
    assert s2.drive.delta_probe == pytest.approx(0.5)


def test_nu_sweep_argmax_at_3():
    base = Setup("ThreeLevelPumped", AtomParams(3, 1e-7, 1.0))
    spec = opt.SweepSpec((opt.Axis("drive.nu", 0.1, 10.0, 100),))
    res = opt.run_sweep(spec, base)
    assert res.argmax_coords[0] == pytest.approx(3.0)
    assert res.argmax_value == pytest.approx(1.25, abs=1e-5)


def test_sweep_deterministic_and_worker_independent():
    spec = two_level_spec(8, 9)
    a = opt.run_sweep(spec, TWO_LEVEL, workers=1)
    b = opt.run_sweep(spec, TWO_LEVEL, workers=4)
    assert np.array_equal(a.values, b.values)
    assert a.argmax_index == b.argmax_index


def test_parallel_path_matches_serial(monkeypatch):
    spec = two_level_spec(6, 7)
    serial = opt.run_sweep(spec, TWO_LEVEL, workers=1)
    monkeypatch.setattr(opt, "PARALLEL_MIN_POINTS", 1)
    par = opt.run_sweep(spec, TWO_LEVEL, workers=2)
    assert np.array_equal(serial.values, par.values)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("AMP_THREADS", "1")
    assert opt.worker_count() == 1
    monkeypatch.setenv("AMP_THREADS", "many")
    with pytest.raises(ValidationError):
        opt.worker_count()


def test_fast_path_matches_pointwise():
    spec = two_level_spec(4, 13)
    res = opt.run_sweep(spec, TWO_LEVEL)
    for i, od in enumerate(spec.axes[0].grid):
        for j, off in enumerate(spec.axes[1].grid):
            assert res.values[i, j] == pytest.approx(opt.value_at(spec, TWO_LEVEL, (od, off)), abs=1e-12)


def test_argmax_tie_break_lowest_index():
    # |r| of a two-level atom is symmetric in the probe offset at zero drive detuning
    spec = opt.SweepSpec((opt.Axis("drive.probe_offset", -3.0, 3.0, 60, "Gamma10"),),
                         fixed={"drive.omega_d_amp": 2.0})
    res = opt.run_sweep(spec, TWO_LEVEL)
    v = res.values
    k = res.argmax_index[0]
    assert v[k] == v.max()
    assert np.all(v[:k] < v[k])


def test_refine_two_level_open_maximum():
    base = TWO_LEVEL.replace(geometry=Geometry.open())
    spec = two_level_spec()
    res = opt.run_sweep(spec, base)
    ref = opt.refine_max(spec, base, res.argmax_coords)
    assert ref.converged
    assert ref.value >= res.argmax_value
    assert ref.value == pytest.approx(oracles.TWO_LEVEL_OPEN_MAX, abs=1e-8)


def test_refine_two_level_mirror_maximum():
    spec = two_level_spec()
    res = opt.run_sweep(spec, TWO_LEVEL)
    ref = opt.refine_max(spec, TWO_LEVEL, res.argmax_coords)
    assert ref.value == pytest.approx(oracles.TWO_LEVEL_MIRROR_MAX, abs=1e-8)
    od, off = ref.coords
    assert od == pytest.approx(oracles.TWO_LEVEL_MIRROR_ARGMAX[0], abs=2e-3)
    assert abs(off) == pytest.approx(oracles.TWO_LEVEL_MIRROR_ARGMAX[1], abs=2e-3)


@settings(max_examples=15)
@given(st.floats(0.5, 4.0), st.floats(-3.0, 3.0))
def test_refine_never_below_start(od, off):
    spec = two_level_spec()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        ref = opt.refine_max(spec, TWO_LEVEL, (od, off), max_passes=3)
    assert ref.value >= opt.value_at(spec, TWO_LEVEL, (od, off))


def test_refine_warns_when_not_converged():
    spec = two_level_spec()
    with pytest.warns(RuntimeWarning, match="without converging"):
        ref = opt.refine_max(spec, TWO_LEVEL, (0.6, -2.9), max_passes=1)
    assert not ref.converged


def test_refine_rejects_start_outside_grid():
    with pytest.raises(ValidationError):
        opt.refine_max(two_level_spec(), TWO_LEVEL, (10.0, 0.0))


def test_golden_max():
    x, fx = opt.golden_max(lambda t: -(t - 0.3) ** 2, -1.0, 2.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-8)


@pytest.mark.parametrize("kappa", [0.1, 10.0])
def test_scaling_invariance(kappa):
    spec = opt.SweepSpec((opt.Axis("drive.omega_d_amp", 0.05, 0.5, 10, "Gamma21"),
                          opt.Axis("drive.delta_probe", -0.02, 0.02, 9, "Gamma21")))
    scaled = PUMPED.replace(atom=AtomParams(3, 0.01 * kappa, kappa))
    a = opt.run_sweep(spec, PUMPED)
    b = opt.run_sweep(spec, scaled)
    assert np.allclose(a.values, b.values, atol=1e-12)


def test_branch_gain_sweep():
    base = Setup("ThreeLevelTwoPhoton", AtomParams(3, 1.0, 2.3, alpha=-12.0), Geometry.mirror(),
                 DriveProbe(delta_drive=6.0))
    spec = opt.SweepSpec((opt.Axis("drive.omega_d_amp", 6.0, 10.0, 9, "Gamma10"),),
                         opt.Objective("ResonantBranchGain", "gm"))
    res = opt.run_sweep(spec, base)
    assert res.argmax_value > 0.05


def test_search_near_branch_consistent_with_branch_gain():
    base = Setup("ThreeLevelTwoPhoton", AtomParams(3, 1.0, 2.0, alpha=-1000.0), Geometry.mirror(),
                 DriveProbe(1000.0, delta_drive=2000.0))
    s = opt.search_near_branch(base, (2, 0))
    assert s.gain == pytest.approx(s.branch_gain, abs=1e-6)
    assert s.offset == pytest.approx(s.branch_offset, abs=0.05)
