"""Command line entry point: ``dca run``, ``dca derive``, ``dca worked-example``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time
from pathlib import Path

from .experiment import (
    ExperimentConfig,
    Ordering,
    conservation_failures,
    emit_report,
    load_config,
    majority_vote,
    run_experiment,
)
from .lymph import ClassLabel
from .reference import REFERENCE_STATS, SAMPLE_ITEM
from .signals import DEFAULT_WEIGHTS, NormalizationMode, process_signals
from .wbc import (
    DANGER_ATTRIBUTES,
    bundled_dataset_path,
    derive_events,
    derive_signals,
    parse_dataset,
    read_signal_stream,
    write_signal_stream,
)

logger = logging.getLogger("dca")

EXIT_INVARIANT = 1


def _load_events(args):
    if args.signals:
        return read_signal_stream(args.signals)
    path = args.dataset or bundled_dataset_path()
    return derive_events(parse_dataset(path))


def build_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    pool_changes = {
        k: v
        for k, v in (
            ("pool_size", args.pool_size),
            ("sample_size", args.sample_size),
            ("rng_seed", args.seed),
        )
        if v is not None
    }
    dc_changes = {
        k: v
        for k, v in (
            ("base_migration_threshold", args.migration_threshold),
            ("fuzz_fraction", args.fuzz),
        )
        if v is not None
    }
    changes = {}
    if pool_changes:
        changes["pool"] = dataclasses.replace(cfg.pool, **pool_changes)
    if dc_changes:
        changes["dc"] = dataclasses.replace(cfg.dc, **dc_changes)
    for name in ("ordering", "runs", "mode"):
        if getattr(args, name) is not None:
            changes[name] = getattr(args, name)
    if args.threshold is not None:
        changes["classification_threshold"] = args.threshold
    if args.no_flush:
        changes["flush_enabled"] = False
    return cfg.replace(**changes) if changes else cfg


def cmd_run(args) -> int:
    cfg = build_config(args)
    events = _load_events(args)
    start = time.perf_counter()
    results = run_experiment(cfg, events)
    elapsed = time.perf_counter() - start
    if not results:
        print("runs=0: nothing to report")
        return 0
    problems = [p for r in results for p in conservation_failures(cfg, r)]
    paths = emit_report(results, args.out, cfg, extra={"elapsed_seconds": elapsed})

    majority, _ = majority_vote(results)
    print(f"{len(results)} run(s) over {len(events)} items in {elapsed:.2f}s")
    print("majority vote        predicted 1  predicted 2")
    for actual in ClassLabel:
        c1, c2 = majority.row(actual)
        print(f"  actual class {int(actual)}     {c1:>9d}  {c2:>11d}")
    errors = [r.confusion.errors() for r in results]
    print(f"errors per run: min {min(errors)}, max {max(errors)}, mean {sum(errors) / len(errors):.2f}")
    print(f"wrote {len(paths)} files to {args.out}")
    for p in problems:
        print(f"invariant violated: {p}", file=sys.stderr)
    return EXIT_INVARIANT if problems else 0


def cmd_derive(args) -> int:
    events = derive_events(parse_dataset(args.dataset or bundled_dataset_path()))
    write_signal_stream(events, args.out)
    print(f"wrote {len(events)} events to {args.out}")
    return 0


def cmd_worked_example(args) -> int:
    stats = REFERENCE_STATS
    print("attribute            value  reference  derived")
    gap = SAMPLE_ITEM["clump_thickness"] - stats.clump_median
    print(f"clump_thickness      {SAMPLE_ITEM['clump_thickness']:>5}  {stats.clump_median:>9}  {abs(gap):>7g}")
    values = [SAMPLE_ITEM[name] for name in DANGER_ATTRIBUTES]
    for name, value, mean in zip(DANGER_ATTRIBUTES, values, stats.class1_means):
        print(f"{name:<20} {value:>5}  {mean:>9}  {abs(value - mean):>7.4g}")
    signals = derive_signals(SAMPLE_ITEM["clump_thickness"], values, stats)
    print(f"signals: pamp={signals.pamp!r} danger={signals.danger!r} safe={signals.safe!r}")
    for mode in NormalizationMode:
        out = process_signals(signals, DEFAULT_WEIGHTS, mode)
        print(f"{mode.value}: csm={out.csm!r} semi={out.semi!r} mat={out.mat!r}")
    return 0


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", type=Path, help="raw Wisconsin file (default: bundled copy)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dca", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded experiments and write reports")
    _add_input_args(run)
    run.add_argument("--signals", type=Path, help="pre-derived signal stream instead of --dataset")
    run.add_argument("--config", type=Path, help="TOML experiment configuration")
    run.add_argument("--out", type=Path, required=True, help="report directory")
    run.add_argument("--ordering", choices=[o.value for o in Ordering])
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--threshold", type=float, help="classification threshold")
    run.add_argument("--pool-size", type=int)
    run.add_argument("--sample-size", type=int)
    run.add_argument("--migration-threshold", type=float)
    run.add_argument("--fuzz", type=float, help="migration threshold fuzz fraction")
    run.add_argument("--mode", choices=[m.value for m in NormalizationMode])
    run.add_argument("--no-flush", action="store_true", help="discard unmigrated cells at the end")
    run.set_defaults(func=cmd_run)

    derive = sub.add_parser("derive", help="write the generic signal stream for a raw dataset")
    _add_input_args(derive)
    derive.add_argument("--out", type=Path, required=True)
    derive.set_defaults(func=cmd_derive)

    worked = sub.add_parser("worked-example", help="print the reference item's signal computation")
    worked.set_defaults(func=cmd_worked_example)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"dca: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
