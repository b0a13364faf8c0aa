"""Built-in parameter sets for the reproduced figures and the summary table.

Sweep-type figures are stored as config dictionaries in the same schema as a
user config file, so ``amp sweep`` on an equivalent file produces the same
bytes as ``amp figure``.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np

from . import dressed, optimize
from .config import RunConfig, config_from_dict
from .csvio import grid_table
from .mirror import rates_at
from .optimize import Axis, Objective, SweepSpec
from .qcore import TWO_PI, AtomParams, DriveProbe, Geometry, Setup

MHZ = TWO_PI * 1e6
GHZ = TWO_PI * 1e9

# Anharmonicity for the mirror figure; not given with the figure.
FIG3_ALPHA_MHZ = -340.0
# Drive detuning omega10 - omega_d for the branch-gain maps, in Gamma10.
FIG6_DELTA10 = 6.0


@dataclass
class Artifact:
    """One CSV file: ``data`` rows under ``columns``."""

    name: str
    columns: list
    data: np.ndarray
    surface: bool = False
    meta: dict = field(default_factory=dict)


# --- config-style presets ---------------------------------------------------

FIG2A = {
    "scheme": "ThreeLevelPumped",
    "description": "|r| vs drive strength and probe detuning, pumped three-level atom at a mirror",
    "atom": {"gamma10": 0.01, "gamma21": 1.0},
    "geometry": {"kind": "mirror"},
    "drive": {"delta_drive": 0.0},
    "sweep": {
        "objective": "AbsReflection",
        "axes": [
            {"path": "drive.omega_d_amp", "min": 0.0, "max": 0.5, "n": 251, "unit": "Gamma21"},
            {"path": "drive.delta_probe", "min": -0.05, "max": 0.05, "n": 201, "unit": "Gamma21"},
        ],
    },
    "output": {"name": "fig2a"},
}

FIG4A = {
    "scheme": "TwoLevelResonant",
    "description": "|r| vs drive strength and probe offset, resonantly driven two-level atom at a mirror",
    "atom": {"gamma10": 1.0},
    "geometry": {"kind": "mirror"},
    "drive": {"delta_drive": 0.0},
    "sweep": {
        "objective": "AbsReflection",
        "axes": [
            {"path": "drive.omega_d_amp", "min": 0.0, "max": 5.0, "n": 101, "unit": "Gamma10"},
            {"path": "drive.probe_offset", "min": -5.0, "max": 5.0, "n": 201, "unit": "Gamma10"},
        ],
    },
    "output": {"name": "fig4a"},
}

FIG5_ATOM = {
    "gamma10": "40 MHz",
    "gamma21": "80 MHz",
    "omega10": "7.4 GHz",
    "alpha": "-280 MHz",
}

FIG5A = {
    "scheme": "ThreeLevelTwoPhoton",
    "description": "|r| vs drive strength and probe frequency, two-photon driven three-level atom at a mirror",
    "atom": dict(FIG5_ATOM),
    "geometry": {"kind": "mirror"},
    "drive": {"delta_drive": "140 MHz"},
    "sweep": {
        "objective": "AbsReflection",
        "axes": [
            {"path": "drive.omega_d_amp", "min": 0.0, "max": 14.0, "n": 57, "unit": "Gamma10"},
            {"path": "drive.omega_p", "min": 6.8, "max": 7.8, "n": 501, "unit": "GHz"},
        ],
    },
    "output": {"name": "fig5a"},
}


def _fig6(branch: str, ratio_max: float, n_ratio: int) -> dict:
    return {
        "scheme": "ThreeLevelTwoPhoton",
        "description": f"single-branch gain on {branch} vs drive strength and Gamma21/Gamma10",
        "atom": {"gamma10": 1.0, "gamma21": 2.0, "alpha": -2.0 * FIG6_DELTA10},
        "geometry": {"kind": "mirror"},
        "drive": {"delta_drive": FIG6_DELTA10},
        "sweep": {
            "objective": "ResonantBranchGain",
            "branch": branch,
            "axes": [
                {"path": "drive.omega_d_amp", "min": 0.5, "max": 14.0, "n": 55, "unit": "Gamma10"},
                {"path": "atom.gamma21", "min": 0.5 if ratio_max <= 5 else 1.0, "max": ratio_max, "n": n_ratio, "unit": "Gamma10"},
            ],
        },
        "output": {"name": "fig6" + {"gm": "a", "me": "b", "ge": "c"}[branch]},
    }


FIG6A = _fig6("gm", 5.0, 46)
FIG6B = _fig6("me", 5.0, 46)
FIG6C = _fig6("ge", 20.0, 96)

ASSUMPTIONS = {
    "fig3": [
        f"anharmonicity alpha/2pi = {FIG3_ALPHA_MHZ:g} MHz (not stated with the figure)",
        "drive amplitude is the Rabi frequency at the atom; drive-line coupling is not modelled",
    ],
    "fig5": ["drive detuning omega10 - omega_d = 140 MHz, omega20 = 2 omega_d"],
    "fig6": [
        f"drive detuning omega10 - omega_d = {FIG6_DELTA10:g} Gamma10 and omega20 = 2 omega_d "
        "(detuning not stated with the figure)",
        "single-branch gain uses the branch's own damping element as denominator",
    ],
}

CONFIG_PRESETS = {
    "fig2a": FIG2A,
    "fig4a": FIG4A,
    "fig5a": FIG5A,
    "fig6a": FIG6A,
    "fig6b": FIG6B,
    "fig6c": FIG6C,
}


def preset_config(fig_id: str) -> RunConfig:
    return config_from_dict(copy.deepcopy(CONFIG_PRESETS[fig_id]), f"<preset {fig_id}>")


def sweep_artifact(cfg: RunConfig, workers=None) -> tuple[Artifact, optimize.SweepResult]:
    """Run a config's sweep and package it as one CSV table."""
    res = optimize.run_sweep(cfg.sweep, cfg.setup, workers=workers)
    columns = [a.column for a in cfg.sweep.axes] + [cfg.sweep.objective.column]
    meta = {
        "name": cfg.name,
        "description": cfg.description,
        "config": cfg.raw,
        "argmax": {"coords": list(res.argmax_coords), "value": res.argmax_value},
    }
    art = Artifact(cfg.name, columns, grid_table(res.grids, res.values), len(cfg.sweep.axes) == 2, meta)
    return art, res


# --- individual figures -----------------------------------------------------

def fig2_setup(ratio: float = 0.01, kind: str = "mirror") -> Setup:
    """Pumped three-level atom in units Gamma21 = 1."""
    return Setup("ThreeLevelPumped", AtomParams(3, ratio, 1.0), Geometry(kind))


def line_sweep(base: Setup, axis: Axis, fixed: dict, objective="AbsReflection") -> np.ndarray:
    spec = SweepSpec((axis,), Objective(objective), fixed)
    return optimize.run_sweep(spec, base, workers=1).values


def fig2b() -> list:
    base = fig2_setup()
    axis = Axis("drive.omega_d_amp", 0.0, 0.5, 501, "Gamma21")
    cols = [axis.column]
    data = [axis.grid]
    for d in (0.0, 0.003, 0.01):
        cols.append(f"abs_r_delta_probe={d:g}Gamma21")
        data.append(line_sweep(base, axis, {"drive.delta_probe": d}))
    return [Artifact("fig2b", cols, np.column_stack(data))]


def fig2c() -> list:
    base = fig2_setup()
    od = math.sqrt(3.0 * base.atom.gamma10 * base.atom.gamma21)
    axis = Axis("drive.delta_probe", -0.05, 0.05, 1001, "Gamma21")
    vals = line_sweep(base, axis, {"drive.omega_d_amp": od})
    meta = {"omega_d_amp/Gamma21": od}
    return [Artifact("fig2c", [axis.column, "abs_r"], np.column_stack([axis.grid, vals]), meta=meta)]


def fig3_setup(alpha_mhz: float = FIG3_ALPHA_MHZ, dephasing: bool = True) -> Setup:
    gphi = (1.65 * MHZ, 5.0 * MHZ, 5.0 * MHZ) if dephasing else (0.0, 0.0, 0.0)
    atom = AtomParams(
        3, 2 * 37.5 * MHZ, 2 * 75.0 * MHZ, omega10=4.6 * GHZ, alpha=alpha_mhz * MHZ,
        gphi10=gphi[0], gphi21=gphi[1], gphi20=gphi[2],
    )
    geom = Geometry.mirror(L=0.033, v=9e7, gamma10_tl=37.5 * MHZ, gamma21_tl=75.0 * MHZ)
    return Setup("ThreeLevelPumped", atom, geom, DriveProbe(omega_d_amp=59.5 * MHZ))


FIG3_OMEGA10 = Axis("atom.omega10", 4.0, 5.6, 1601, "GHz")


def fig3a() -> list:
    vals = line_sweep(fig3_setup(), FIG3_OMEGA10, {})
    meta = {"omega_d_amp/MHz": 59.5, "assumptions": ASSUMPTIONS["fig3"]}
    return [Artifact("fig3a", [FIG3_OMEGA10.column, "abs_r"], np.column_stack([FIG3_OMEGA10.grid, vals]), meta=meta)]


def fig3_rates(omega10_ghz: np.ndarray, alpha_mhz: float = FIG3_ALPHA_MHZ) -> np.ndarray:
    """Rows (Gamma10, Gamma21) / 2pi in MHz."""
    g = fig3_setup(alpha_mhz).geometry
    out = []
    for f in omega10_ghz:
        mr = rates_at(g, f * GHZ, alpha_mhz * MHZ)
        out.append((mr.gamma10 / MHZ, mr.gamma21 / MHZ))
    return np.array(out)


def fig3b() -> list:
    f = FIG3_OMEGA10.grid
    rates = fig3_rates(f)
    data = np.column_stack([f, rates[:, 0], rates[:, 1], rates[:, 1] - rates[:, 0]])
    cols = [FIG3_OMEGA10.column, "Gamma10/MHz", "Gamma21/MHz", "Gamma21-Gamma10/MHz"]
    return [Artifact("fig3b", cols, data, meta={"assumptions": ASSUMPTIONS["fig3"]})]


def fig4b() -> list:
    axis = Axis("drive.probe_offset", -5.0, 5.0, 1001, "Gamma10")
    cols = [axis.column]
    data = [axis.grid]
    for kind in ("mirror", "open"):
        base = Setup("TwoLevelResonant", AtomParams(2, 1.0), Geometry(kind))
        cols.append(f"abs_r_{kind}")
        data.append(line_sweep(base, axis, {"drive.omega_d_amp": 2.0}))
    return [Artifact("fig4b", cols, np.column_stack(data), meta={"omega_d_amp/Gamma10": 2.0})]


def fig5_setup(omega_d_amp: float = 0.0) -> Setup:
    cfg = preset_config("fig5a")
    return cfg.setup.replace(drive=DriveProbe(omega_d_amp, delta_drive=cfg.setup.drive.delta_drive))


def fig5_branches(od_over_gamma: np.ndarray) -> np.ndarray:
    """Rows: Omega_d/Gamma10 then omega_p/2pi in GHz of the six dressed branches."""
    base = fig5_setup()
    g10 = base.atom.gamma10
    omega_d = base.atom.omega10 - base.drive.delta_drive
    rows = []
    for x in od_over_gamma:
        m = optimize.dressed_model(fig5_setup(x * g10))
        rows.append([x] + [w / GHZ for _, w in dressed.branch_frequencies(m.system, omega_d)])
    return np.array(rows)


def branch_names(dim: int = 3) -> list:
    labels = dressed.LABELS[dim]
    return [labels[m] + labels[n] for m in range(dim) for n in range(dim) if m != n]


def fig5a(workers=None) -> list:
    art, res = sweep_artifact(preset_config("fig5a"), workers)
    art.meta["assumptions"] = ASSUMPTIONS["fig5"]
    od = preset_config("fig5a").sweep.axes[0].grid
    br = Artifact(
        "fig5a_branches",
        ["omega_d_amp/Gamma10"] + [f"omega_p_{b}/GHz" for b in branch_names()],
        fig5_branches(od),
        meta={"note": "probe frequency omega_d + w_nu - w_mu of each dressed transition mu->nu"},
    )
    return [art, br]


def fig5_population_differences(od_over_gamma: np.ndarray) -> np.ndarray:
    """Rows: Omega_d/Gamma10, S_mm - S_gg, S_ee - S_gg, S_ee - S_mm."""
    g10 = fig5_setup().atom.gamma10
    rows = []
    for x in od_over_gamma:
        p = optimize.dressed_model(fig5_setup(x * g10)).populations
        rows.append((x, p[1] - p[0], p[2] - p[0], p[2] - p[1]))
    return np.array(rows)


def fig5c() -> list:
    od = np.linspace(0.0, 14.0, 281)
    cols = ["omega_d_amp/Gamma10", "mm_minus_gg", "ee_minus_gg", "ee_minus_mm"]
    return [Artifact("fig5c", cols, fig5_population_differences(od), meta={"assumptions": ASSUMPTIONS["fig5"]})]


def _config_figure(fig_id: str, tag: str = ""):
    def run(workers=None) -> list:
        art, _ = sweep_artifact(preset_config(fig_id), workers)
        if tag:
            art.meta["assumptions"] = ASSUMPTIONS[tag]
        return [art]

    return run


FIGURES = {
    "fig2a": _config_figure("fig2a"),
    "fig2b": lambda workers=None: fig2b(),
    "fig2c": lambda workers=None: fig2c(),
    "fig3a": lambda workers=None: fig3a(),
    "fig3b": lambda workers=None: fig3b(),
    "fig4a": _config_figure("fig4a"),
    "fig4b": lambda workers=None: fig4b(),
    "fig5a": fig5a,
    "fig5c": lambda workers=None: fig5c(),
    "fig6a": _config_figure("fig6a", "fig6"),
    "fig6b": _config_figure("fig6b", "fig6"),
    "fig6c": _config_figure("fig6c", "fig6"),
}


# --- optima used by the table and the acceptance checks ---------------------

def pumped_max(ratio: float, kind: str = "mirror") -> tuple[float, float]:
    """(max |r|, Omega_d/Gamma21) over drive strength at double resonance."""
    base = fig2_setup(ratio, kind)
    od0 = math.sqrt(3.0 * ratio)
    spec = SweepSpec((Axis("drive.omega_d_amp", 0.2 * od0, 5.0 * od0, 97, "Gamma21"),))
    res = optimize.run_sweep(spec, base, workers=1)
    ref = optimize.refine_max(spec, base, res.argmax_coords, rel_tol=1e-9)
    return ref.value, ref.coords[0]


def two_level_max(kind: str = "mirror") -> optimize.RefineResult:
    base = Setup("TwoLevelResonant", AtomParams(2, 1.0), Geometry(kind))
    spec = SweepSpec((
        Axis("drive.omega_d_amp", 0.5, 4.0, 36, "Gamma10"),
        Axis("drive.probe_offset", -3.0, 3.0, 61, "Gamma10"),
    ))
    res = optimize.run_sweep(spec, base, workers=1)
    return optimize.refine_max(spec, base, res.argmax_coords)


def fig3_optimum(alpha_mhz: float = FIG3_ALPHA_MHZ, dephasing: bool = True) -> optimize.RefineResult:
    base = fig3_setup(alpha_mhz, dephasing)
    spec = SweepSpec((
        Axis("atom.omega10", 4.4, 5.2, 81, "GHz"),
        Axis("drive.omega_d_amp", 20.0, 140.0, 121, "MHz"),
    ))
    res = optimize.run_sweep(spec, base, workers=1)
    return optimize.refine_max(spec, base, res.argmax_coords)


def fig6_setup(omega_d: float, ratio: float, kind: str = "mirror") -> Setup:
    atom = AtomParams(3, 1.0, ratio, alpha=-2.0 * FIG6_DELTA10)
    return Setup("ThreeLevelTwoPhoton", atom, Geometry(kind), DriveProbe(omega_d, delta_drive=FIG6_DELTA10))


def two_photon_search(branch: str, omega_d: float, ratio: float, kind: str = "mirror") -> optimize.BranchSearch:
    return optimize.search_near_branch(fig6_setup(omega_d, ratio, kind), branch)


TABLE1_QUOTED = [
    ("three-level pumped", "mirror", 25.0),
    ("three-level pumped", "open", 12.5),
    ("two-level", "mirror", 6.9),
    ("two-level", "open", 3.4),
    ("three-level two-photon", "mirror", 6.2),
    ("three-level two-photon", "open", 3.0),
]


def table1() -> list:
    """Rows (system, geometry, computed gain %, quoted gain %)."""
    out = []
    for system, kind, quoted in TABLE1_QUOTED:
        if system == "three-level pumped":
            g = pumped_max(1e-6, kind)[0] - 1.0
        elif system == "two-level":
            g = two_level_max(kind).value - 1.0
        else:
            g = two_photon_search("gm", 8.0, 2.3, kind).gain
        out.append((system, kind, 100.0 * g, quoted))
    return out
