"""Command-line entry point: run one scenario, execute a sweep, or validate a
config file without simulating."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError
from .engine import run_scenario, write_trace_tsv
from .harness import (config_from_dict, execute_sweep, expand_sweep, load_json,
                      run_id_of, run_single, sweep_from_dict,
                      table1_jamming_sweep, write_csv)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoon-sim",
        description="Deterministic CACC platooning simulator and attack-evaluation harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate a single scenario")
    run_p.add_argument("--config", required=True, help="JSON run config")
    run_p.add_argument("--out", required=True, help="one-row result CSV path")
    run_p.add_argument("--trace", help="optional per-step trace TSV path")
    run_p.add_argument("--seed", type=int, help="override the config seed")

    sweep_p = sub.add_parser("sweep", help="expand and execute a sweep")
    sweep_p.add_argument("--config", help="JSON sweep config (default: jamming sweep)")
    sweep_p.add_argument("--out", required=True, help="result CSV path")
    sweep_p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    sweep_p.add_argument("--seed", type=int, help="override the sweep base seed")

    val_p = sub.add_parser("validate", help="check a config file without simulating")
    val_p.add_argument("--config", help="JSON run or sweep config (default: jamming sweep)")
    return parser


def _load_sweep(path: str | None):
    if path is None:
        return table1_jamming_sweep()
    return sweep_from_dict(load_json(path))


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = config_from_dict(load_json(args.config))
            if args.seed is not None:
                cfg.seed = args.seed
            rec = run_single(cfg)
            if rec.error:
                print(f"error: {rec.error}", file=sys.stderr)
                return 1
            write_csv([rec], args.out)
            if args.trace:
                trace, _ = run_scenario(cfg)
                write_trace_tsv(trace, args.trace)
            print(f"{rec.run_id}: crashed={str(bool(rec.crashed)).lower()} "
                  f"max_spacing_err={rec.max_spacing_err_m:.3f} m")
            return 0

        if args.command == "sweep":
            sweep = _load_sweep(args.config)
            if args.seed is not None:
                sweep.base_seed = args.seed
            configs = expand_sweep(sweep)
            records = execute_sweep(configs, workers=max(1, args.workers))
            write_csv(records, args.out)
            failures = sum(1 for r in records if r.error)
            print(f"{len(records)} runs -> {args.out}"
                  + (f" ({failures} error rows)" if failures else ""))
            return 0

        # validate
        doc = load_json(args.config) if args.config else None
        if doc is not None and ("controller" in doc):
            cfg = config_from_dict(doc)
            print(f"ok: single run {run_id_of(cfg)}")
        else:
            sweep = table1_jamming_sweep() if doc is None else sweep_from_dict(doc)
            n = len(expand_sweep(sweep))
            print(f"ok: sweep expands to {n} runs")
        return 0
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
