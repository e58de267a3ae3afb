#!/usr/bin/env python3
"""Full mining experiment on synthetic telemetry.

Synthesizes a multi-day sensor log, reduces it to hourly transactions,
runs every algorithm for the configured number of independent runs, and
prints one comparison row per algorithm (mean over runs). Output files
land in --out-dir: raw.csv, transactions.csv, per-algorithm rules and
reports, and summary.csv/txt.

The default configuration is the full protocol (14 days, population 50,
10,000 evaluations, 10 runs); pass e.g. --fes 1000 --runs 2 for a quick
smoke run.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tsarm import datagen, miner, preprocess
from tsarm.encoding import DecodeConfig
from tsarm.measures import FitnessWeights
from tsarm.optimizers import ALGORITHM_NAMES, OptimizerConfig


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--days", type=int, default=14)
    parser.add_argument("--cadence", type=float, default=5.0)
    parser.add_argument("--drop-rate", type=float, default=0.0)
    parser.add_argument("--frame", type=int, default=3600)
    parser.add_argument("--classes", type=int, default=24)
    parser.add_argument("--np", type=int, default=50)
    parser.add_argument("--fes", type=int, default=10_000)
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-len", type=int, default=4)
    parser.add_argument("--algos", nargs="+", default=list(ALGORITHM_NAMES),
                        choices=ALGORITHM_NAMES)
    parser.add_argument("--out-dir", default="results")
    return parser.parse_args()


def main():
    args = parse_args()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"generating {args.days} days of telemetry (seed {args.seed}) ...")
    records = datagen.generate(datagen.GenConfig(
        days=args.days, cadence_seconds=args.cadence,
        seed=args.seed, drop_rate=args.drop_rate,
    ))
    datagen.write_csv(records, out_dir / "raw.csv")

    db = preprocess.build_database(records, preprocess.PreprocessConfig(
        frame_duration_seconds=args.frame, k_classes=args.classes,
    ))
    preprocess.write_transactions(db, out_dir / "transactions.csv")
    print(f"database: {db.n_transactions} transactions x {db.n_features} features, "
          f"K={db.k_classes}, {db.n_sequences} days")

    decode_config = DecodeConfig.for_database(db, max_rule_length=args.max_len)
    summary = []
    for algorithm in args.algos:
        config = miner.MinerConfig(
            optimizer=OptimizerConfig(
                algorithm, dimension=decode_config.genotype_length,
                population=args.np, max_fes=args.fes, seed=args.seed,
            ),
            decode=decode_config,
            weights=FitnessWeights(),
            runs=args.runs,
        )
        start = time.perf_counter()
        results = miner.mine(db, config)
        elapsed = time.perf_counter() - start
        rules_found = [len(r.archive) for r in results]
        print(f"{algorithm}: {args.runs} runs x {args.fes} evaluations in {elapsed:.1f}s, "
              f"rules per run {min(rules_found)}..{max(rules_found)}")
        merged = miner.merged_archive(results)
        miner.write_rules_csv(merged, db.feature_names, out_dir / f"{algorithm}_rules.csv")
        miner.write_rules_text(merged, db.feature_names, out_dir / f"{algorithm}_rules.txt")
        rows = miner.report_rows(results)
        miner.write_report_csv(rows, out_dir / f"{algorithm}_report.csv")
        (out_dir / f"{algorithm}_report.txt").write_text(
            miner.format_report_table(rows) + "\n"
        )
        summary.append((algorithm, miner.mean_row([r.report for r in results])))

    table = miner.format_report_table(summary, label_header="algorithm")
    (out_dir / "summary.txt").write_text(table + "\n")
    miner.write_report_csv(summary, out_dir / "summary.csv")
    print()
    print(table)


if __name__ == "__main__":
    main()
