"""Command-line pipeline: generate | preprocess | mine | report | pipeline.

Option layering: explicit flags override the TSARM_SEED environment
variable (seed only), which overrides config-file values, which override
built-in defaults. All randomness flows from one seed; run r of a mining
command uses seed + r.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from datetime import date as Date
from pathlib import Path

from . import datagen, miner, preprocess
from .encoding import DecodeConfig
from .measures import FitnessWeights
from .optimizers import (
    ALGORITHM_NAMES,
    DEParams,
    GAParams,
    JDEParams,
    LSHADEParams,
    OptimizerConfig,
    PSOParams,
)

SEED_ENV = "TSARM_SEED"

_PARAM_TYPES = {
    "de": DEParams,
    "ga": GAParams,
    "pso": PSOParams,
    "jde": JDEParams,
    "lshade": LSHADEParams,
}

_MINE_EPILOG = """\
algorithm parameter defaults (override with --param NAME=VALUE):
  de      F=0.5, CR=0.9
  ga      pm=0.01, pc=0.8
  pso     c1=0.1, c2=0.1, w=0.8
  lshade  H=5, p=0.1, arc_rate=2, np_init=18*dim, np_min=4
  jde     F0=0.5, CR0=0.9, tau=0.1
"""


def _resolve_seed(flag_value, config_value=None, default=0) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if config_value is not None:
        return int(config_value)
    return default


def _parse_date(text: str) -> Date:
    try:
        return Date.fromisoformat(text)
    except ValueError:
        raise ValueError(f"start date must be YYYY-MM-DD, got {text!r}") from None


def _build_params(algorithm: str, pairs: list[str]):
    """Turn --param NAME=VALUE pairs into the algorithm's parameter record."""
    if not pairs:
        return None
    cls = _PARAM_TYPES[algorithm]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    values = {}
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        key = name.strip().lower()
        if not sep or key not in fields:
            raise ValueError(
                f"unknown parameter {name!r} for {algorithm}; "
                f"valid names: {', '.join(fields)}"
            )
        values[key] = int(raw) if key in ("h", "np_init", "np_min") else float(raw)
    return cls(**values)


def cmd_generate(args) -> int:
    config = datagen.GenConfig(
        days=args.days,
        cadence_seconds=args.cadence,
        start_date=_parse_date(args.start_date),
        seed=_resolve_seed(args.seed),
        drop_rate=args.drop_rate,
    )
    records = datagen.generate(config)
    datagen.write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_preprocess(args) -> int:
    config = preprocess.PreprocessConfig(
        frame_duration_seconds=args.frame,
        k_classes=args.classes,
        min_records_per_frame=args.min_records,
    )
    records = preprocess.parse_sensor_csv(args.infile)
    db = preprocess.build_database(records, config)
    preprocess.write_transactions(db, args.out)
    print(
        f"wrote {db.n_transactions} transactions x {db.n_features} features to {args.out} "
        f"(K={db.k_classes}, days={db.n_sequences})"
    )
    return 0


def _mine_one(db, algorithm: str, args, seed: int, out_dir: Path) -> list[float]:
    decode_config = DecodeConfig.for_database(db, max_rule_length=args.max_len)
    config = miner.MinerConfig(
        optimizer=OptimizerConfig(
            algorithm=algorithm,
            dimension=decode_config.genotype_length,
            population=args.np,
            max_fes=args.fes,
            seed=seed,
            params=_build_params(algorithm, args.param),
        ),
        decode=decode_config,
        weights=FitnessWeights(args.alpha, args.beta, args.gamma, args.delta),
        s_min=args.smin,
        c_min=args.cmin,
        runs=args.runs,
    )
    results = miner.mine(db, config)
    for r in results:
        print(
            f"{algorithm} run {r.run + 1}/{args.runs} seed={r.seed} "
            f"evaluations={r.trace.evaluations_used} best={r.trace.best_fitness:.4f} "
            f"rules={len(r.archive)}"
        )
    merged = miner.merged_archive(results)
    miner.write_rules_csv(merged, db.feature_names, out_dir / f"{algorithm}_rules.csv")
    miner.write_rules_text(merged, db.feature_names, out_dir / f"{algorithm}_rules.txt")
    rows = miner.report_rows(results)
    miner.write_report_csv(rows, out_dir / f"{algorithm}_report.csv")
    table = miner.format_report_table(rows)
    (out_dir / f"{algorithm}_report.txt").write_text(table + "\n")
    print(table)
    return miner.mean_row([r.report for r in results])


def cmd_mine(args) -> int:
    db = preprocess.load_database(args.infile)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = _resolve_seed(args.seed)
    algorithms = ALGORITHM_NAMES if args.algo == "all" else (args.algo,)
    summary = []
    for algorithm in algorithms:
        summary.append((algorithm, _mine_one(db, algorithm, args, seed, out_dir)))
    if len(algorithms) > 1:
        table = miner.format_report_table(summary, label_header="algorithm")
        (out_dir / "summary.txt").write_text(table + "\n")
        miner.write_report_csv(summary, out_dir / "summary.csv")
        print(table)
    return 0


def cmd_report(args) -> int:
    rows = miner.read_rules_csv(args.infile)
    rep = miner.report_from_rows(rows, args.classes)
    print(miner.format_report_table([(args.label, miner.report_values(rep))],
                                    label_header="rules"))
    return 0


def cmd_pipeline(args) -> int:
    config_path = Path(args.config)
    if not config_path.exists():
        raise FileNotFoundError(f"no such config file: {config_path}")
    try:
        config = json.loads(config_path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{config_path}: invalid JSON: {exc}") from None
    seed = _resolve_seed(args.seed, config.get("seed"))
    out_dir = Path(args.out_dir or config.get("out_dir", "results"))
    out_dir.mkdir(parents=True, exist_ok=True)

    gen = config.get("generate", {})
    raw_path = out_dir / "raw.csv"
    gen_args = argparse.Namespace(
        days=int(gen.get("days", 14)),
        cadence=float(gen.get("cadence_seconds", 5.0)),
        start_date=gen.get("start_date", "2022-09-15"),
        seed=seed,
        drop_rate=float(gen.get("drop_rate", 0.0)),
        out=raw_path,
    )
    cmd_generate(gen_args)

    pre = config.get("preprocess", {})
    transactions_path = out_dir / "transactions.csv"
    pre_args = argparse.Namespace(
        infile=raw_path,
        out=transactions_path,
        frame=int(pre.get("frame_seconds", 3600)),
        classes=int(pre.get("classes", 24)),
        min_records=int(pre.get("min_records", 1)),
    )
    cmd_preprocess(pre_args)

    mine_cfg = config.get("mine", {})
    weights = mine_cfg.get("weights", {})
    algorithms = mine_cfg.get("algorithms", ["de"])
    algo = "all" if algorithms == "all" or set(algorithms) == set(ALGORITHM_NAMES) else None
    mine_args = argparse.Namespace(
        infile=transactions_path,
        out_dir=out_dir,
        algo=algo,
        seed=seed,
        fes=int(mine_cfg.get("max_fes", 10_000)),
        np=int(mine_cfg.get("population", 50)),
        runs=int(mine_cfg.get("runs", 10)),
        max_len=int(mine_cfg.get("max_rule_length", 4)),
        alpha=float(weights.get("alpha", 1.0)),
        beta=float(weights.get("beta", 1.0)),
        gamma=float(weights.get("gamma", 1.0)),
        delta=float(weights.get("delta", 1.0)),
        smin=float(mine_cfg.get("s_min", 0.0)),
        cmin=float(mine_cfg.get("c_min", 0.0)),
        param=[],
    )
    if algo == "all":
        cmd_mine(mine_args)
    else:
        for name in algorithms:
            if name not in ALGORITHM_NAMES:
                raise ValueError(
                    f"unknown algorithm {name!r} in config; valid: {', '.join(ALGORITHM_NAMES)}"
                )
            mine_args.algo = name
            cmd_mine(mine_args)
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsarm",
        description="Time-windowed numerical association rule mining over sensor telemetry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate synthetic raw sensor telemetry")
    gen.add_argument("--days", type=int, default=14, help="days to simulate (default 14)")
    gen.add_argument("--cadence", type=float, default=5.0,
                     help="seconds between records (default 5)")
    gen.add_argument("--start-date", default="2022-09-15",
                     help="first calendar date, YYYY-MM-DD (default 2022-09-15)")
    gen.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default 0; env {SEED_ENV} overrides the default)")
    gen.add_argument("--drop-rate", type=float, default=0.0,
                     help="fraction of records randomly omitted (default 0)")
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.set_defaults(func=cmd_generate)

    pre = sub.add_parser("preprocess", help="build the transaction database from raw CSV")
    pre.add_argument("--in", dest="infile", required=True, help="raw sensor CSV")
    pre.add_argument("--out", required=True, help="output transactions CSV")
    pre.add_argument("--frame", type=int, default=3600,
                     help="frame duration in seconds, must divide 86400 (default 3600)")
    pre.add_argument("--classes", type=_positive_int, default=24,
                     help="time classes per day, K (default 24)")
    pre.add_argument("--min-records", type=int, default=1,
                     help="minimum records for a frame to survive (default 1)")
    pre.set_defaults(func=cmd_preprocess)

    mine = sub.add_parser(
        "mine",
        help="mine time-windowed rules from a transaction database",
        epilog=_MINE_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    mine.add_argument("--in", dest="infile", required=True, help="transactions CSV")
    mine.add_argument("--out-dir", default="results", help="output directory (default results)")
    mine.add_argument("--algo", default="de", choices=ALGORITHM_NAMES + ("all",),
                      help="algorithm to run, or 'all' (default de)")
    mine.add_argument("--fes", type=_positive_int, default=10_000,
                      help="evaluation budget per run (default 10000)")
    mine.add_argument("--np", type=_positive_int, default=50,
                      help="population size (default 50)")
    mine.add_argument("--runs", type=_positive_int, default=10,
                      help="independent runs per algorithm (default 10)")
    mine.add_argument("--seed", type=int, default=None,
                      help=f"base seed; run r uses seed+r (env {SEED_ENV} overrides default 0)")
    mine.add_argument("--max-len", type=int, default=4,
                      help="maximum rule length L (default 4)")
    mine.add_argument("--alpha", type=float, default=1.0, help="support weight (default 1)")
    mine.add_argument("--beta", type=float, default=1.0, help="confidence weight (default 1)")
    mine.add_argument("--gamma", type=float, default=1.0, help="inclusion weight (default 1)")
    mine.add_argument("--delta", type=float, default=1.0, help="amplitude weight (default 1)")
    mine.add_argument("--smin", type=float, default=0.0,
                      help="archive support threshold, exclusive (default 0)")
    mine.add_argument("--cmin", type=float, default=0.0,
                      help="archive confidence threshold, exclusive (default 0)")
    mine.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                      help="override one algorithm parameter; repeatable")
    mine.set_defaults(func=cmd_mine)

    rep = sub.add_parser("report", help="recompute a report table from a rules CSV")
    rep.add_argument("--in", dest="infile", required=True, help="rules CSV")
    rep.add_argument("--classes", type=_positive_int, default=24,
                     help="time classes per day, K (default 24)")
    rep.add_argument("--label", default="all", help="row label in the table")
    rep.set_defaults(func=cmd_report)

    pipe = sub.add_parser("pipeline", help="run generate + preprocess + mine from a config file")
    pipe.add_argument("--config", required=True, help="JSON config file")
    pipe.add_argument("--seed", type=int, default=None, help="override the config seed")
    pipe.add_argument("--out-dir", default=None, help="override the config output directory")
    pipe.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"tsarm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
