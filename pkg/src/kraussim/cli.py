"""Command-line driver: sweeps, verification, cost tables, serialization.

Subcommands:

* ``sweep``      channel sweep to CSV/JSON (config file and/or flags)
* ``verify``     compare compiled plans against direct Kraus application
* ``costs``      gate-cost model table plus measured decomposer tallies
* ``plan-dump``  serialize a compiled plan to JSON
* ``decompose``  decompose a multi-controlled Pauli product to JSON

Exit code 0 means every compiled plan matched the Kraus oracle to 1e-9.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

from .channels import ChannelPreset, channel_preset
from .compiler import compile_preset, plan_to_json
from .gates import LocalUnitary, count_gates, decompose_controlled, gatelist_to_json
from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z
from .simulator import verify_plan
from .sweep import (
    PLAN_DEVIATION_LIMIT,
    SweepConfig,
    grid_points,
    max_plan_deviation,
    parse_grid,
    render_csv,
    render_json,
    run_sweep,
)

_PAULI_BY_NAME = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--channel", help="preset name: pd, ad, or dep")
    parser.add_argument("--strategy", help="auto, diagonal, matched, branch, or paper")
    parser.add_argument("--input", help="input state: X, -Y, Z, ... or 'x,y,z'")
    parser.add_argument("--grid", help="parameter grid start:stop:step")
    parser.add_argument("--basis", choices=("pauli", "weyl"), help="decomposition basis")
    parser.add_argument("--out", help="output path ('-' for stdout)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), help="output format")
    parser.add_argument("--verify-trials", type=int, help="random probes per grid point")
    parser.add_argument("--seed", type=int, help="seed for the random probes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kraussim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run channel sweeps")
    sweep.add_argument("--config", help="INI file with one section per sweep")
    _add_sweep_flags(sweep)

    verify = sub.add_parser("verify", help="check plans against the Kraus oracle")
    _add_sweep_flags(verify)

    costs = sub.add_parser("costs", help="gate-cost table")
    costs.add_argument("--n-max", type=int, default=4, help="largest system size")
    costs.add_argument("--out", help="write the table as JSON to this path")

    dump = sub.add_parser("plan-dump", help="serialize a compiled plan")
    dump.add_argument("--channel", required=True)
    dump.add_argument("--param", type=float, required=True)
    dump.add_argument("--strategy", default="auto")
    dump.add_argument("--basis", choices=("pauli", "weyl"), default="pauli")
    dump.add_argument("--out", default="-")

    deco = sub.add_parser("decompose", help="decompose a controlled Pauli product")
    deco.add_argument("--controls", type=int, required=True)
    deco.add_argument("--target", required=True, help="Pauli string, e.g. ZX")
    deco.add_argument("--out", default="-")

    return parser


_CONFIG_KEYS = {
    "channel": "channel",
    "strategy": "strategy",
    "input": "input",
    "grid": "grid",
    "basis": "basis",
    "out": "out",
    "format": "fmt",
    "verify-trials": "verify_trials",
    "seed": "seed",
}


def _config_from_mapping(values: dict, where: str) -> SweepConfig:
    kwargs: dict = {}
    for key, value in values.items():
        if value is None:
            continue
        if key == "grid":
            kwargs["grid"] = parse_grid(value) if isinstance(value, str) else value
        elif key in ("verify_trials", "seed"):
            kwargs[key] = int(value)
        elif key == "out":
            kwargs["out_path"] = value
        else:
            kwargs[key] = value
    if "channel" not in kwargs:
        raise ValueError(f"{where}: field 'channel' is required")
    try:
        return SweepConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: {exc}") from exc


def _sweep_configs(args: argparse.Namespace) -> list[SweepConfig]:
    overrides = {
        "channel": args.channel,
        "strategy": args.strategy,
        "input": args.input,
        "grid": args.grid,
        "basis": args.basis,
        "out": args.out,
        "fmt": args.fmt,
        "verify_trials": args.verify_trials,
        "seed": args.seed,
    }
    if not getattr(args, "config", None):
        return [_config_from_mapping(dict(overrides), "command line")]

    ini = configparser.ConfigParser()
    read = ini.read(args.config)
    if not read:
        raise ValueError(f"config file {args.config!r} not found")
    configs = []
    for section in ini.sections():
        values: dict = {}
        for key, raw in ini.items(section):
            if key not in _CONFIG_KEYS:
                raise ValueError(
                    f"config section [{section}], key {key!r}: unknown key"
                )
            values[_CONFIG_KEYS[key]] = raw
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
        try:
            configs.append(_config_from_mapping(values, f"config section [{section}]"))
        except ValueError as exc:
            raise ValueError(str(exc)) from exc
    if not configs:
        raise ValueError(f"config file {args.config!r} has no sweep sections")
    return configs


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_sweep(args: argparse.Namespace) -> int:
    worst = 0.0
    for cfg in _sweep_configs(args):
        rows = run_sweep(cfg)
        text = render_csv(rows) if cfg.fmt == "csv" else render_json(rows)
        _emit(text, cfg.out_path)
        worst = max(worst, max_plan_deviation(rows))
        if cfg.out_path and cfg.out_path != "-":
            print(
                f"{cfg.channel} [{cfg.strategy}] input {cfg.input}: "
                f"{len(rows)} rows -> {cfg.out_path} (max plan deviation {worst:.3e})",
                file=sys.stderr,
            )
    return 0 if worst < PLAN_DEVIATION_LIMIT else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _sweep_configs(args)[0]
    trials = cfg.verify_trials if cfg.verify_trials > 0 else 20
    worst = 0.0
    for param in grid_points(*cfg.grid):
        ch = channel_preset(ChannelPreset(cfg.channel, param))
        plan = compile_preset(cfg.channel, param, cfg.strategy, cfg.basis)
        deviation = verify_plan(plan, ch, trials, cfg.seed)
        worst = max(worst, deviation)
        print(f"param={param:.6g} deviation={deviation:.3e}")
    ok = worst < PLAN_DEVIATION_LIMIT
    print(f"max deviation {worst:.3e} over {trials} trials per point: "
          f"{'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_costs(args: argparse.Namespace) -> int:
    from .sweep import report_costs

    table = report_costs(args.n_max)
    if args.out:
        _emit(json.dumps(table, indent=2) + "\n", args.out)
    print(f"{'n':>2} {'lcu':>16} {'stinespring':>16} {'ratio':>12}")
    for row in table["model"]:
        print(
            f"{row['n']:>2} {row['lcu']:>16d} {row['stinespring']:>16d} "
            f"{row['ratio']:>12.4f}"
        )
    print(f"{'m':>2} {'single':>8} {'cnot':>8} {'total':>8}   (measured, C_m(Z))")
    for row in table["measured"]:
        print(
            f"{row['controls']:>2} {row['single']:>8d} {row['cnot']:>8d} "
            f"{row['total']:>8d}"
        )
    return 0


def _cmd_plan_dump(args: argparse.Namespace) -> int:
    plan = compile_preset(args.channel, args.param, args.strategy, args.basis)
    _emit(plan_to_json(plan) + "\n", args.out)
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    letters = args.target.strip().upper()
    unknown = set(letters) - set(_PAULI_BY_NAME)
    if not letters or unknown:
        raise ValueError(
            f"target must be a nonempty string over I, X, Y, Z; got {args.target!r}"
        )
    target = LocalUnitary(tuple(_PAULI_BY_NAME[c] for c in letters))
    gates = decompose_controlled(args.controls, target)
    _emit(gatelist_to_json(gates) + "\n", args.out)
    counts = count_gates(gates)
    print(
        f"C_{args.controls}({letters}): {counts.single} single-qubit, "
        f"{counts.cnot} CNOT",
        file=sys.stderr,
    )
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "costs": _cmd_costs,
    "plan-dump": _cmd_plan_dump,
    "decompose": _cmd_decompose,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
