"""amp: probe reflection gain of driven atoms in front of a mirror.

    amp figure <id> [--out DIR] [--gnuplot]
    amp table1
    amp sweep --config FILE [--out DIR] [--gnuplot]
    amp check [--only ID ...]

Exit codes: 0 success, 1 numerical error or failed check, 2 config error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance, optimize, presets
from .config import ConfigError, load_config
from .csvio import write_csv, write_gnuplot, write_meta
from .qcore import NumericalError, ValidationError

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2


def _write(art: presets.Artifact, out: Path, gnuplot: bool) -> Path:
    csv = write_csv(out / f"{art.name}.csv", art.columns, art.data)
    if art.meta:
        write_meta(out / f"{art.name}.meta.json", art.meta)
    if gnuplot:
        write_gnuplot(out / f"{art.name}.gp", csv.name, art.columns, art.surface)
    return csv


def cmd_figure(args) -> int:
    for art in presets.FIGURES[args.id]():
        path = _write(art, Path(args.out), args.gnuplot)
        print(f"wrote {path} ({len(art.data)} rows)")
    return EXIT_OK


def cmd_table1(args) -> int:
    print(f"{'system':<24} {'geometry':<8} {'computed %':>11} {'quoted %':>9} {'delta':>7}")
    for system, kind, got, quoted in presets.table1():
        print(f"{system:<24} {kind:<8} {got:11.3f} {quoted:9.1f} {got - quoted:+7.3f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if cfg.sweep is None:
        raise ConfigError("config has no [sweep] section", args.config)
    art, res = presets.sweep_artifact(cfg)
    path = _write(art, Path(args.out), args.gnuplot)
    coords = ", ".join(f"{a.column} = {c:.6g}" for a, c in zip(cfg.sweep.axes, res.argmax_coords))
    print(f"wrote {path} ({len(art.data)} rows)")
    print(f"grid argmax: {coords}; {cfg.sweep.objective.column} = {res.argmax_value:.10g}")
    if cfg.refine:
        ref = optimize.refine_max(cfg.sweep, cfg.setup, res.argmax_coords)
        coords = ", ".join(f"{a.column} = {c:.8g}" for a, c in zip(cfg.sweep.axes, ref.coords))
        note = "" if ref.converged else " (not converged)"
        print(f"refined: {coords}; {cfg.sweep.objective.column} = {ref.value:.10g}{note}")
    return EXIT_OK


def cmd_check(args) -> int:
    ids = args.only or list(acceptance.CHECKS)
    unknown = [i for i in ids if i not in acceptance.CHECKS]
    if unknown:
        raise ConfigError(f"unknown criterion id(s): {', '.join(unknown)}")
    failed = 0
    for i in ids:
        res = acceptance.CHECKS[i]()
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{len(ids) - failed}/{len(ids)} criteria passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="amp", description="Probe reflection gain of driven atoms in a waveguide.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="write the data behind one figure as CSV")
    p.add_argument("id", choices=sorted(presets.FIGURES))
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script per CSV")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("table1", help="compute the summary table of maximum gains")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", help="run a sweep described by a TOML or JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="run the acceptance criteria")
    p.add_argument("--only", nargs="+", metavar="ID", help="criterion ids, e.g. 1 7a 9")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"amp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError, OSError) as exc:
        print(f"amp: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
