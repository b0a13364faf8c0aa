"""Parameter sweeps and derivative-free maximisation of reflection objectives."""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import dressed, threelevel
from .mirror import effective_atom
from .qcore import (
    NumericalError,
    ReflectionResult,
    Scheme,
    Setup,
    ValidationError,
    unit_scale,
)

OBJECTIVES = ("AbsReflection", "Gain", "ResonantBranchGain")

# paths that only move the probe; a dressed model can be reused along them
PROBE_PATHS = ("drive.probe_offset", "drive.omega_p", "drive.delta_probe")
VIRTUAL_PATHS = ("drive.omega_d", "drive.omega_p", "drive.probe_offset", "drive.nu")
_GROUPS = {"atom": "atom", "geometry": "geometry", "drive": "drive"}

PARALLEL_MIN_POINTS = 20000


def reflection(setup: Setup, exact: bool = True) -> ReflectionResult:
    """Probe reflection for any scheme, geometry-dependent rates applied."""
    atom = effective_atom(setup.atom, setup.geometry)
    kind = setup.geometry.kind
    if setup.scheme is Scheme.THREE_LEVEL_PUMPED:
        r = threelevel.reflection_3lvl(atom, setup.drive, kind, exact=exact)
        return ReflectionResult(complex(r), threelevel.populations(atom, setup.drive))
    return dressed.reflection_dressed_setup(atom, setup.drive, setup.scheme, kind)


def dressed_model(setup: Setup) -> dressed.DressedModel:
    if not setup.scheme.dressed:
        raise ValidationError(f"{setup.scheme.value} has no dressed-state model")
    atom = effective_atom(setup.atom, setup.geometry)
    return dressed.DressedModel.build(atom, setup.drive, setup.scheme, setup.geometry.kind)


@dataclass(frozen=True)
class Objective:
    kind: str = "AbsReflection"
    branch: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in OBJECTIVES:
            raise ValidationError(f"unknown objective {self.kind!r}; expected one of {OBJECTIVES}")
        if self.kind == "ResonantBranchGain":
            if self.branch is None or len(self.branch) != 2:
                raise ValidationError("ResonantBranchGain needs a branch (mu, nu)")
            object.__setattr__(self, "branch", parse_branch(self.branch))
        elif self.branch is not None:
            raise ValidationError(f"objective {self.kind} takes no branch")

    @property
    def column(self) -> str:
        if self.kind == "AbsReflection":
            return "abs_r"
        if self.kind == "Gain":
            return "gain"
        return "branch_gain_" + "".join("gme"[i] for i in self.branch)


def parse_branch(branch) -> tuple:
    """(mu, nu) from integers or dressed-state letters, e.g. ("g", "m")."""
    if isinstance(branch, str):
        branch = tuple(branch)
    out = []
    for b in branch:
        if isinstance(b, str):
            if b not in "gme" or len(b) != 1:
                raise ValidationError(f"branch labels are g, m, e; got {b!r}")
            out.append("gme".index(b))
        else:
            out.append(int(b))
    if out[0] == out[1]:
        raise ValidationError("branch needs two different dressed states")
    return tuple(out)


def evaluate(setup: Setup, objective: Objective, exact: bool = True) -> float:
    if objective.kind == "ResonantBranchGain":
        m = dressed_model(setup)
        if max(objective.branch) >= m.system.dim:
            raise ValidationError(f"branch {objective.branch} out of range for {m.system.dim} levels")
        return m.branch_gain(objective.branch)
    r = reflection(setup, exact=exact).r
    return abs(r) if objective.kind == "AbsReflection" else abs(r) - 1.0


@dataclass(frozen=True)
class Axis:
    """One swept parameter.  ``min``/``max`` are in ``unit``.

    ``unit`` is a frequency unit ("1", "Hz", "MHz", "GHz", ...) or "Gamma10"
    / "Gamma21", meaning multiples of the base atom's rate.
    """

    path: str
    min: float
    max: float
    n: int
    unit: str = "1"

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"axis {self.path}: need at least 2 points, got {self.n}")
        if not (self.min < self.max):
            raise ValidationError(f"axis {self.path}: min must be < max ({self.min} >= {self.max})")
        check_path(self.path)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.n)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.n - 1)

    @property
    def column(self) -> str:
        name = self.path.split(".", 1)[1]
        return name if self.unit in ("1", "rad/s") else f"{name}/{self.unit}"


def check_path(path: str) -> None:
    if path in VIRTUAL_PATHS:
        return
    group, _, name = path.partition(".")
    if group not in _GROUPS or not name:
        raise ValidationError(f"cannot resolve parameter path {path!r}")
    cls = {"atom": "AtomParams", "geometry": "Geometry", "drive": "DriveProbe"}[group]
    from . import qcore

    fields = getattr(qcore, cls).__dataclass_fields__
    if name not in fields or name in ("n_levels", "kind"):
        raise ValidationError(f"cannot resolve parameter path {path!r}")


def to_internal(value: float, unit: str, base: Setup) -> float:
    if unit == "Gamma10":
        return value * base.atom.gamma10
    if unit == "Gamma21":
        if base.atom.gamma21 is None:
            raise ValidationError("unit Gamma21 needs a three-level atom")
        return value * base.atom.gamma21
    return value * unit_scale(unit)


def apply(setup: Setup, values: dict) -> Setup:
    """Return ``setup`` with parameter paths set to internal (rad/s) values.

    Ordinary fields are set first, then the derived drive quantities:
    drive.omega_d (absolute drive frequency), drive.nu (Od^2/(G10 G21)),
    then drive.omega_p (absolute probe frequency) or drive.probe_offset
    (omega_p - omega_d, dressed schemes).
    """
    groups = {}
    virtual = {}
    for path, v in values.items():
        check_path(path)
        if path in VIRTUAL_PATHS:
            virtual[path] = float(v)
            continue
        group, _, name = path.partition(".")
        groups.setdefault(group, {})[name] = float(v)
    for group, kw in groups.items():
        setup = replace(setup, **{group: replace(getattr(setup, group), **kw)})
    if not virtual:
        return setup
    atom, drive = setup.atom, setup.drive
    dkw = {}
    if "drive.omega_d" in virtual:
        ref = atom.omega20 if setup.scheme is Scheme.THREE_LEVEL_PUMPED else _omega10(atom)
        dkw["delta_drive"] = ref - virtual["drive.omega_d"]
    if "drive.nu" in virtual:
        if atom.gamma21 is None:
            raise ValidationError("drive.nu needs a three-level atom")
        dkw["omega_d_amp"] = math.sqrt(virtual["drive.nu"] * atom.gamma10 * atom.gamma21)
    if "drive.omega_p" in virtual:
        dkw["delta_probe"] = _omega10(atom) - virtual["drive.omega_p"]
    if "drive.probe_offset" in virtual:
        if not setup.scheme.dressed:
            raise ValidationError("drive.probe_offset is defined for the dressed schemes only")
        dkw["delta_probe"] = dkw.get("delta_drive", drive.delta_drive) - virtual["drive.probe_offset"]
    return replace(setup, drive=replace(drive, **dkw))


def _omega10(atom) -> float:
    if atom.omega10 is None:
        raise ValidationError("absolute frequencies need atom.omega10")
    return atom.omega10


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    objective: Objective = field(default_factory=Objective)
    fixed: dict = field(default_factory=dict)   # path -> internal value
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError(f"a sweep has 1 or 2 axes, got {len(self.axes)}")
        for path in self.fixed:
            check_path(path)

    @property
    def shape(self) -> tuple:
        return tuple(a.n for a in self.axes)


@dataclass(frozen=True)
class SweepResult:
    axes: tuple
    values: np.ndarray
    argmax_index: tuple
    argmax_coords: tuple
    argmax_value: float

    @property
    def grids(self) -> list:
        return [a.grid for a in self.axes]


def setup_at(spec: SweepSpec, base: Setup, coords: Sequence[float]) -> Setup:
    values = dict(spec.fixed)
    for ax, c in zip(spec.axes, coords):
        values[ax.path] = to_internal(c, ax.unit, base)
    return apply(base, values)


def value_at(spec: SweepSpec, base: Setup, coords: Sequence[float]) -> float:
    return evaluate(setup_at(spec, base, coords), spec.objective, spec.exact)


def _probe_fast_path(spec: SweepSpec, base: Setup) -> bool:
    return (
        base.scheme.dressed
        and spec.objective.kind != "ResonantBranchGain"
        and spec.axes[-1].path in PROBE_PATHS
    )


def _eval_row(spec: SweepSpec, base: Setup, outer) -> np.ndarray:
    """Objective along the last axis with the other coordinates fixed."""
    inner = spec.axes[-1].grid
    outer = tuple(outer)
    if _probe_fast_path(spec, base):
        setups = [setup_at(spec, base, outer + (x,)) for x in inner]
        model = dressed_model(setups[0])
        offsets = np.array([dressed.probe_offset(s.drive) for s in setups])
        r = model.spectrum(offsets)
        vals = np.abs(r)
        return vals if spec.objective.kind == "AbsReflection" else vals - 1.0
    return np.array([value_at(spec, base, outer + (x,)) for x in inner])


def _row_task(args):
    spec, base, outer = args
    return _eval_row(spec, base, outer)


def worker_count() -> int:
    n = os.cpu_count() or 1
    cap = os.environ.get("AMP_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValidationError(f"AMP_THREADS must be an integer, got {cap!r}") from None
    return n


def run_sweep(spec: SweepSpec, base: Setup, workers: Optional[int] = None) -> SweepResult:
    """Evaluate the objective on the full grid.

    Rows (fixed outer coordinate) are the unit of work; they are farmed out
    to processes for large grids and always reassembled in index order, so
    the result does not depend on the worker count.
    """
    # fail early on a bad path or objective/scheme mismatch
    value_at(spec, base, [a.min for a in spec.axes])
    outers = [()] if len(spec.axes) == 1 else [(x,) for x in spec.axes[0].grid]
    workers = worker_count() if workers is None else workers
    npts = int(np.prod(spec.shape))
    if workers > 1 and npts >= PARALLEL_MIN_POINTS and len(outers) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_task, [(spec, base, o) for o in outers], chunksize=4))
    else:
        rows = [_eval_row(spec, base, o) for o in outers]
    values = np.array(rows).reshape(spec.shape)
    if not np.all(np.isfinite(values)):
        raise NumericalError("objective is not finite somewhere on the grid")
    flat = int(np.argmax(values))   # first occurrence: lowest linear index wins ties
    idx = np.unravel_index(flat, spec.shape)
    coords = tuple(float(a.grid[i]) for a, i in zip(spec.axes, idx))
    return SweepResult(spec.axes, values, tuple(int(i) for i in idx), coords, float(values.ravel()[flat]))


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a: float, b: float, tol: float, max_iter: int = 200) -> tuple:
    """Maximise a unimodal f on [a, b]; returns (x, f(x))."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _pattern_move(spec, base, before, x, best, rel_tol):
    dx = [b - a for a, b in zip(before, x)]
    tmax = 8.0
    for ax, xi, di in zip(spec.axes, x, dx):
        if di > 0:
            tmax = min(tmax, (ax.max - xi) / di)
        elif di < 0:
            tmax = min(tmax, (ax.min - xi) / di)
    if tmax <= 0:
        return x, best

    def f(t):
        return value_at(spec, base, [xi + t * di for xi, di in zip(x, dx)])

    t, ft = golden_max(f, 0.0, tmax, rel_tol)
    if ft > best:
        return [xi + t * di for xi, di in zip(x, dx)], ft
    return x, best


@dataclass(frozen=True)
class RefineResult:
    coords: tuple
    value: float
    converged: bool
    passes: int


def refine_max(
    spec: SweepSpec,
    base: Setup,
    start: Sequence[float],
    *,
    rel_tol: float = 1e-6,
    max_passes: int = 50,
) -> RefineResult:
    """Coordinate-wise golden-section ascent from ``start`` (axis units).

    Each coordinate is searched within one grid step of its current value,
    clipped to the axis range; a move is kept only if it improves the
    objective, so the result is never below the starting value.
    """
    x = [float(c) for c in start]
    for ax, c in zip(spec.axes, x):
        if not ax.min <= c <= ax.max:
            raise ValidationError(f"start {c} outside axis {ax.path} [{ax.min}, {ax.max}]")
    best = value_at(spec, base, x)
    converged = False
    passes = 0
    while passes < max_passes:
        passes += 1
        moved = 0.0
        before = list(x)
        for k, ax in enumerate(spec.axes):
            tol = rel_tol * (ax.max - ax.min)
            lo = max(ax.min, x[k] - ax.step)
            hi = min(ax.max, x[k] + ax.step)

            def f(t, k=k):
                y = list(x)
                y[k] = t
                return value_at(spec, base, y)

            t, ft = golden_max(f, lo, hi, tol)
            if ft > best:
                moved = max(moved, abs(t - x[k]) / (ax.max - ax.min))
                x[k], best = t, ft
        if moved < rel_tol:
            converged = True
            break
        # pattern move along this pass's net displacement to follow ridges
        x, best = _pattern_move(spec, base, before, x, best, rel_tol)
    if not converged:
        warnings.warn(f"refine_max stopped after {passes} passes without converging", RuntimeWarning)
    return RefineResult(tuple(x), float(best), converged, passes)


@dataclass(frozen=True)
class BranchSearch:
    gain: float
    offset: float           # omega_p - omega_d at the maximum
    branch_offset: float    # omega_nu - omega_mu
    branch_gain: float      # single-branch estimate at the same drive


def search_near_branch(setup: Setup, branch, window: Optional[float] = None, n: int = 601) -> BranchSearch:
    """Largest |r| - 1 for probe offsets within ``window`` of a dressed branch.

    ``window`` defaults to 1.5 Gamma10 (after geometry rates are applied).
    """
    branch = parse_branch(branch)
    m = dressed_model(setup)
    w0 = m.branch_offset(branch)
    if window is None:
        window = 1.5 * effective_atom(setup.atom, setup.geometry).gamma10
    xs = np.linspace(w0 - window, w0 + window, n)
    g = np.abs(m.spectrum(xs)) - 1.0
    i = int(np.argmax(g))
    step = xs[1] - xs[0]
    x, gx = golden_max(lambda t: abs(m.reflection(t)) - 1.0, xs[i] - step, xs[i] + step, 1e-9 * window)
    if gx < g[i]:
        x, gx = xs[i], g[i]
    return BranchSearch(float(gx), float(x), w0, m.branch_gain(branch))
