"""Command-line front end.

Commands: ``markov``, ``decompose``, ``simulate``, ``sweep``, ``spectral``.
Exit codes: 0 success, 2 usage or configuration error, 3 analysis failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import yaml

from . import compilation, experiments
from . import io as rbio
from .engine import RBConfig
from .fitting import FitError

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS = 0, 2, 3

REQUIRED_CONFIG_KEYS = ("protocol", "noise")


class ConfigError(ValueError):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _key_value(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), yaml.safe_load(value)


def load_config(path: str | os.PathLike, overrides=()) -> RBConfig:
    """Read a flat JSON/YAML mapping into an :class:`RBConfig`; overrides win."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a key-value mapping")
    raw.update(dict(overrides))
    for key in REQUIRED_CONFIG_KEYS:
        if key not in raw:
            raise ConfigError(f"missing config key: {key}")
    known = {f.name for f in dataclasses.fields(RBConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config key: {', '.join(unknown)}")
    if "lengths" in raw:
        raw["lengths"] = tuple(raw["lengths"])
    try:
        return RBConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", default=None, help="output file (relative paths go under $RBGATESETS_OUTPUT_DIR)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbgatesets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("markov", help="aggregate-circuit distribution under NIST sampling")
    p.add_argument("--max-m", type=_positive_int, required=True)
    _common(p)

    p = sub.add_parser("decompose", help="pulse decompositions and reference-table averages")
    p.add_argument("--row", type=int, nargs="+", default=list(range(1, 10)), choices=range(1, 10))
    p.add_argument("--gateset", choices=("C", "N", "both"), default="both")
    p.add_argument(
        "--convention",
        choices=["calibrated"] + [c.value for c in compilation.Convention],
        default="calibrated",
    )
    _common(p)

    p = sub.add_parser("simulate", help="run one RB experiment from a config file and fit it")
    p.add_argument("config")
    p.add_argument("--set", dest="overrides", type=_key_value, action="append", default=[],
                   metavar="KEY=VALUE", help="override a config key")
    _common(p)

    p = sub.add_parser("sweep", help="r_C and r_N over error models and pulse rows")
    p.add_argument("--models", nargs="*", default=list(compilation.ERROR_MODELS),
                   choices=compilation.ERROR_MODELS)
    p.add_argument("--rows", type=int, nargs="*", default=list(range(1, 10)), choices=range(1, 10))
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact",
                   help="exact all-sequence average or sampled sequences")
    p.add_argument("--sequences", type=_positive_int, default=30)
    p.add_argument("--lengths", type=_positive_int, nargs="+", default=None)
    p.add_argument("--shots", type=_positive_int, default=None)
    _common(p)

    p = sub.add_parser("spectral", help="spectra of the averaged superoperator")
    p.add_argument("--gateset", choices=("C", "N", "C12", "sqrtZ_C12", "P"), default="N")
    p.add_argument("--noise", default="ideal",
                   help="ideal, depolarizing, pauli, channel, or a pulse error model with --row")
    p.add_argument("--row", type=int, choices=range(1, 10), default=None)
    p.add_argument("--param", type=_key_value, action="append", default=[], metavar="KEY=VALUE")
    _common(p)
    return parser


def _emit(args, name, header, rows, config, extra=()):
    started = getattr(args, "_started", rbio.now())
    path = rbio.resolve_output(args.output, name, args.format)
    outputs = [rbio.write_table(path, header, rows, args.format)]
    for suffix, h, r in extra:
        outputs.append(rbio.write_table(rbio.sibling(path, suffix), h, r, args.format))
    rbio.write_manifest(path, args.command, config, args.seed, started, outputs)
    return path


def cmd_markov(args) -> int:
    dist, tv = experiments.markov_tables(args.max_m)
    _emit(args, "markov", experiments.MARKOV_HEADER, dist, {"max_m": args.max_m},
          [("tv", experiments.TV_HEADER, tv)])
    return EXIT_OK


def cmd_decompose(args) -> int:
    gs = ("C", "N") if args.gateset == "both" else (args.gateset,)
    conv = None if args.convention == "calibrated" else args.convention
    decomps, summary = experiments.decompose_tables(args.row, gs, conv)
    for row, g, c, mean, target, status in summary:
        print(f"row {row} {g} [{c}]: mean {mean:.5f}  target {target}  {status}")
    _emit(args, "decompose", experiments.DECOMP_HEADER, decomps,
          {"rows": args.row, "gatesets": list(gs), "convention": args.convention},
          [("summary", experiments.SUMMARY_HEADER, summary)])
    return EXIT_OK if all(s[-1] == "PASS" for s in summary) else EXIT_ANALYSIS


def cmd_simulate(args) -> int:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(("seed", args.seed))
    cfg = load_config(args.config, overrides)
    args.seed = cfg.seed
    try:
        _, fit, data_rows, fit_rows = experiments.simulate(cfg, args.threads)
    except FitError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    _emit(args, "simulate", experiments.DATASET_HEADER, data_rows, dataclasses.asdict(cfg),
          [("fit", experiments.FIT_HEADER, fit_rows)])
    print(f"{cfg.protocol}: p = {fit.p:.10f}  r = {fit.r:.6g}  A = {fit.A:.6g}  B = {fit.B:.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    kwargs = {"average": args.mode, "sequences": args.sequences, "shots": args.shots,
              "seed": 0 if args.seed is None else args.seed}
    if args.lengths:
        kwargs["lengths"] = tuple(args.lengths)
    base = RBConfig(**kwargs)
    rows = experiments.sweep(args.models, args.rows, base, threads=args.threads)
    config = {"models": args.models, "rows": args.rows, **dataclasses.asdict(base)}
    _emit(args, "sweep", experiments.SWEEP_HEADER, rows, config)
    return EXIT_OK


def cmd_spectral(args) -> int:
    params = dict(args.param)
    rows = experiments.spectral_rows(args.gateset, args.noise, params, args.row)
    _emit(args, "spectral", experiments.SPECTRAL_HEADER, rows,
          {"gateset": args.gateset, "noise": args.noise, "row": args.row, "params": params})
    return EXIT_OK


COMMANDS = {
    "markov": cmd_markov,
    "decompose": cmd_decompose,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "spectral": cmd_spectral,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._started = rbio.now()
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FitError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"analysis failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
