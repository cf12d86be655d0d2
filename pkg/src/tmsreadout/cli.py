"""Command-line entry point.

Exit status: 0 on success, 2 for configuration problems (schema, units,
missing inputs), 3 when a numerical routine or a model domain check fails.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import yaml

from . import __version__
from .commands import RUNNERS, shot_metrics, simulate_cell
from .config import COMMANDS, RunConfig, build_config, load_config_file, parse_set
from .errors import ConfigError, DomainError, NumericalError
from .report import header_lines, write_report
from .shots import write_shots_csv, write_shots_npz

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _common_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="YAML/JSON run configuration")
    p.add_argument("--fixture", metavar="NAME", help="named parameter set (default: paper-defaults)")
    p.add_argument("--seed", type=int, metavar="U64", help="RNG seed for shot simulation")
    p.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    p.add_argument("--jobs", type=int, metavar="N", help="worker threads for sweeps")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a parameter, e.g. --set gains=[4dB] (repeatable)")
    p.add_argument("--plot", action="store_true", default=None, help="also write <out stem>.png")
    p.add_argument("--emit-config", action="store_true",
                   help="print the resolved configuration as YAML and exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmsreadout", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tmsreadout {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "analytic": "closed-form SNR, fidelity and photon numbers per gain",
        "simulate": "draw single shots and compare empirical metrics with the model",
        "phi-sweep": "combined-mode fidelity versus idler rotation angle",
        "landscape": "SNR ratio and fidelity gain over a gain x added-noise grid",
        "calibrate": "fit output-chain gain and added noise from noise power data",
        "backaction": "fit amplifier-resonator isolation from qubit coherence data",
    }
    common = _common_args()
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        formats = ("csv", "json", "npz") if name == "simulate" else ("csv", "json")
        sp.add_argument("--format", choices=formats, default=None)
    return parser


def _where(exc: BaseException) -> str:
    """Innermost package module in the traceback, for error messages."""
    name = "tmsreadout"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("tmsreadout"):
            name = mod
    return name


def _plot_path(cfg: RunConfig) -> Path:
    return Path(cfg.output_path).with_suffix(".png")


def _run_simulate(cfg: RunConfig) -> None:
    shotset = simulate_cell(cfg, cfg["gain"], 0)
    report = shot_metrics(cfg, shotset)
    header = {"tool": f"tmsreadout {__version__}", "config": cfg.resolved()}
    if cfg.output_format == "json" or cfg.output_path is None:
        write_report(report, cfg.resolved(), cfg.output_format if cfg.output_format != "npz" else "csv",
                     cfg.output_path)
    else:
        out = Path(cfg.output_path)
        if cfg.output_format == "npz":
            write_shots_npz(out, shotset, header)
        else:
            write_shots_csv(out, shotset, header)
        write_report(report, cfg.resolved(), "csv", out.with_name(out.stem + ".metrics.csv"))
    if cfg.plot:
        from .plotting import plot_shots

        plot_shots(shotset, _plot_path(cfg), cfg["pump_phase"])


def _plot(cfg: RunConfig, result) -> None:
    from . import plotting

    path = _plot_path(cfg)
    if cfg.command == "analytic":
        plotting.plot_analytic(result, path)
    elif cfg.command == "phi-sweep":
        plotting.plot_phi_sweep(result, path)
    elif cfg.command == "landscape":
        plotting.plot_landscape(result, cfg["cross_sections"], path)
    elif cfg.command == "calibrate":
        plotting.plot_calibration(*result, path)
    elif cfg.command == "backaction":
        plotting.plot_backaction(*result, path)


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration, writing its artifacts."""
    if cfg.plot and cfg.output_path is None:
        raise ConfigError("--plot needs an output path", key="output.path")
    if cfg.command == "simulate":
        _run_simulate(cfg)
        return EXIT_OK
    report, result = RUNNERS[cfg.command](cfg)
    write_report(report, cfg.resolved(), cfg.output_format, cfg.output_path)
    if cfg.plot:
        _plot(cfg, result)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_data = load_config_file(args.config) if args.config else None
        cfg = build_config(
            args.command, file_data, fixture=args.fixture, seed=args.seed, jobs=args.jobs,
            out=args.out, fmt=args.format, plot=args.plot, overrides=parse_set(args.set),
        )
        if args.emit_config:
            sys.stdout.write("\n".join(header_lines(cfg.resolved())[:1]) + "\n")
            sys.stdout.write(yaml.safe_dump(cfg.resolved(), sort_keys=True))
            return EXIT_OK
        return run(cfg)
    except ConfigError as exc:
        print(f"tmsreadout: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, NumericalError) as exc:
        print(f"{_where(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
