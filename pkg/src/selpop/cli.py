"""Command-line front end: ``selpop simulate | scale | verify | parse-check``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, SelpopError

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _param(text: str) -> tuple[str, object]:
    key, eq, raw = text.partition("=")
    if not eq or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _experiment_args(sp: argparse.ArgumentParser) -> None:
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--protocol", help="built-in protocol name")
    src.add_argument("--protocol-file", help="protocol in the .pp text format")
    sp.add_argument("--n", type=int, help="population size")
    sp.add_argument("--n-grid", type=_int_list, help="comma separated population sizes")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--max-interactions", type=int)
    sp.add_argument("--out", help="CSV output path (default: standard output)")
    sp.add_argument("--workers", type=int, help="worker processes (SELPOP_WORKERS overrides)")
    sp.add_argument("--config", help="JSON file with ExperimentConfig fields")
    sp.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE",
                    help="protocol parameter, e.g. g=60, y=5, candidates=10 (repeatable)")
    sp.add_argument("--init", help="initial counts for a protocol file, e.g. '1=1,0=*'")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selpop", description="Selective population protocol simulator.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run trials and write one CSV row per trial")
    _experiment_args(sp)
    sp = sub.add_parser("scale", help="sweep an n-grid and fit scaling exponents")
    _experiment_args(sp)
    sp.add_argument("--report", help="also write the text report to this path")

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("suite", nargs="?", default="fast", choices=("fast", "full"))
    sp.add_argument("--only", type=_int_list, help="comma separated criterion numbers")
    sp.add_argument("--inject", choices=("destroy-pivot",), help="enable a seeded fault")

    sp = sub.add_parser("parse-check", help="check .pp protocol files")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--pretty", action="store_true", help="print the normalized protocol text")
    return ap


def config_from_args(args):
    """ExperimentConfig from an optional JSON file overlaid with command-line flags."""
    from .experiments import ExperimentConfig

    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    if args.n is not None and args.n_grid is not None:
        raise ConfigError("give either --n or --n-grid")
    flags = dict(protocol=args.protocol, protocol_file=args.protocol_file, trials=args.trials,
                 seed=args.seed, max_interactions=args.max_interactions, out=args.out, workers=args.workers,
                 n_grid=[args.n] if args.n is not None else args.n_grid)
    if args.protocol or args.protocol_file:
        # a source named on the command line replaces the one in the file
        data.pop("protocol", None)
        data.pop("protocol_file", None)
    data.update({k: v for k, v in flags.items() if v is not None})
    params = dict(data.get("params") or {})
    params.update(dict(args.param))
    if args.init:
        params["init"] = args.init
    data["params"] = params
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _emit_csv(cfg, outcomes) -> None:
    from .experiments import to_rows, write_csv
    text = write_csv(to_rows(cfg.label, outcomes), cfg.out)
    if not cfg.out:
        sys.stdout.write(text)


def cmd_simulate(cfg) -> int:
    from .experiments import run_trials
    outcomes = run_trials(cfg)
    _emit_csv(cfg, outcomes)
    report = sys.stdout if cfg.out else sys.stderr
    for n in cfg.n_grid:
        sel = [o for o in outcomes if o.n == n]
        stab = sum(o.stabilized for o in sel)
        good = sum(o.correct for o in sel)
        print(f"{cfg.label} n={n}: {good}/{len(sel)} correct, {stab}/{len(sel)} stabilized", file=report)
        for o in sel:
            for d in o.diagnostics:
                if not d.startswith("NoMatchDraws"):
                    print(f"  trial {o.trial}: {d}", file=report)
    return EXIT_OK if all(o.stabilized and o.correct for o in outcomes) else EXIT_FAIL


def cmd_scale(cfg, report_path: str | None = None) -> int:
    from .errors import InsufficientData
    from .experiments import ScalingTable, run_trials
    if len(cfg.n_grid) < 3:
        raise InsufficientData(f"a scaling sweep needs at least 3 sizes, got {len(cfg.n_grid)}")
    outcomes = run_trials(cfg)
    _emit_csv(cfg, outcomes)
    text = ScalingTable(cfg.label, outcomes).report()
    print(text, file=sys.stdout if cfg.out else sys.stderr)
    if report_path:
        Path(report_path).write_text(text + "\n")
    return EXIT_OK


def cmd_verify(suite: str, only=None, inject=None) -> int:
    from .verify import run_suite
    results = run_suite(suite, inject=inject, only=only, emit=lambda line: print(line, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_parse_check(files, pretty: bool = False) -> int:
    from .dsl import check_protocol, pretty_print, validate
    status = EXIT_OK
    for path in files:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            print(f"{path}: error: {exc}", file=sys.stderr)
            status = EXIT_ERROR
            continue
        spec, diags = check_protocol(data)
        if spec is not None:
            diags = diags + [d for d in validate(spec) if d.severity == "warning"]
        for d in diags:
            where = f"{d.span.line}:{d.span.column}" if d.span else "-"
            print(f"{path}:{where}: {d.severity} {d.kind}: {d.message}", file=sys.stderr)
        if spec is None:
            status = max(status, EXIT_FAIL)
            continue
        print(f"{path}: ok, protocol {spec.name} ({spec.model}, {len(spec.states)} states, "
              f"{len(spec.rules)} rules)")
        if pretty:
            sys.stdout.write(pretty_print(spec))
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite, args.only, args.inject)
        if args.command == "parse-check":
            return cmd_parse_check(args.files, args.pretty)
        cfg = config_from_args(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        return cmd_scale(cfg, args.report)
    except SelpopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: ConfigError: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
