"""Mining orchestration: optimizer runs, rule archiving, and run reports.

Every genotype evaluated during a run is decoded; each valid rule whose
support and confidence clear the archive thresholds is kept, deduplicated
under a canonical identity (sorted conditions, quantized interval
endpoints, window). The archive cardinality is what the run reports count
as the number of mined rules.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

import numpy as np

from .encoding import DecodeConfig, decode
from .measures import COUNTING_MODES, FitnessWeights, Rule, RuleMetrics, evaluate_rule
from .optimizers import OptimizerConfig, RunTrace, derived_config, optimize


@dataclass(frozen=True)
class MinerConfig:
    optimizer: OptimizerConfig
    decode: DecodeConfig
    weights: FitnessWeights = FitnessWeights()
    s_min: float = 0.0
    c_min: float = 0.0
    runs: int = 10
    counting: str = "days"
    identity_decimals: int = 4

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not 0.0 <= self.s_min <= 1.0 or not 0.0 <= self.c_min <= 1.0:
            raise ValueError("archive thresholds must be in [0, 1]")
        if self.counting not in COUNTING_MODES:
            raise ValueError(
                f"counting must be one of {COUNTING_MODES}, got {self.counting!r}"
            )
        if self.optimizer.dimension != self.decode.genotype_length:
            raise ValueError(
                f"optimizer dimension {self.optimizer.dimension} does not match "
                f"genotype length {self.decode.genotype_length}"
            )


def canonical_identity(rule: Rule, decimals: int = 4):
    """Order-insensitive rule key with interval endpoints on a decimal grid."""

    def side(conditions):
        return tuple(
            sorted((c.feature_index, round(c.lo, decimals), round(c.hi, decimals))
                   for c in conditions)
        )

    return side(rule.antecedent), side(rule.consequent), (rule.window.t1, rule.window.t2)


class RuleArchive:
    """Distinct discovered rules keyed by canonical identity."""

    def __init__(self, decimals: int = 4):
        self.decimals = decimals
        self._entries: dict[tuple, tuple[Rule, RuleMetrics]] = {}

    def add(self, rule: Rule, metrics: RuleMetrics) -> bool:
        key = canonical_identity(rule, self.decimals)
        if key in self._entries:
            return False
        self._entries[key] = (rule, metrics)
        return True

    def merge(self, other: "RuleArchive") -> None:
        for key, entry in other._entries.items():
            self._entries.setdefault(key, entry)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    @property
    def entries(self) -> list[tuple[Rule, RuleMetrics]]:
        return list(self._entries.values())


@dataclass(frozen=True)
class RunReport:
    mean_support: float
    mean_confidence: float
    mean_inclusion: float
    mean_amplitude: float
    mean_antlen: float
    mean_conlen: float
    numrules: int
    interval_coverage: float


EMPTY_REPORT = RunReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0.0)


def report(archive: RuleArchive, k_classes: int) -> RunReport:
    """Arithmetic means over the archive; an empty archive reports zeros."""
    n = len(archive)
    if n == 0:
        return EMPTY_REPORT
    supp = conf = incl = ampl = antlen = conlen = 0.0
    covered = np.zeros(k_classes, dtype=bool)
    for rule, metrics in archive:
        supp += metrics.support
        conf += metrics.confidence
        incl += metrics.inclusion
        ampl += metrics.amplitude
        antlen += len(rule.antecedent)
        conlen += len(rule.consequent)
        covered[rule.window.t1 - 1 : rule.window.t2] = True
    return RunReport(
        supp / n, conf / n, incl / n, ampl / n, antlen / n, conlen / n,
        n, int(covered.sum()) / k_classes,
    )


@dataclass
class RunResult:
    run: int
    seed: int
    archive: RuleArchive
    report: RunReport
    trace: RunTrace


def _make_objective(db, config: MinerConfig, archive: RuleArchive, rng):
    weights = config.weights
    dcfg = config.decode
    s_min, c_min = config.s_min, config.c_min
    counting = config.counting

    def objective(values) -> float:
        rule = decode(values, db, dcfg, rng)
        if rule is None:
            return 0.0
        metrics = evaluate_rule(rule, db, weights, counting)
        if metrics.support > s_min and metrics.confidence > c_min:
            archive.add(rule, metrics)
        return metrics.fitness

    return objective


def mine(db, config: MinerConfig) -> list[RunResult]:
    """Run the configured optimizer ``runs`` times against ``db``.

    Run r uses seed ``optimizer.seed + r``. Decoding and scoring are the
    same for every algorithm; only the stream of evaluated genotypes
    differs.
    """
    if config.decode.n_features != db.n_features:
        raise ValueError(
            f"decode config expects {config.decode.n_features} features, "
            f"database has {db.n_features}"
        )
    if config.decode.k_classes != db.k_classes:
        raise ValueError(
            f"decode config expects K={config.decode.k_classes}, database has K={db.k_classes}"
        )
    results = []
    for run in range(config.runs):
        run_config = derived_config(config.optimizer, run)
        archive = RuleArchive(config.identity_decimals)
        rng = None
        if config.decode.threshold_mode == "stochastic":
            rng = np.random.default_rng([run_config.seed, 1])
        trace = optimize(run_config, _make_objective(db, config, archive, rng))
        results.append(
            RunResult(run, run_config.seed, archive, report(archive, db.k_classes), trace)
        )
    return results


def merged_archive(results: list[RunResult], decimals: int = 4) -> RuleArchive:
    merged = RuleArchive(decimals)
    for result in results:
        merged.merge(result.archive)
    return merged


# ---------------------------------------------------------------------------
# Text and CSV output formats
# ---------------------------------------------------------------------------

RULES_CSV_HEADER = (
    "antecedent", "consequent", "t1", "t2",
    "support", "confidence", "inclusion", "amplitude", "fitness",
)
REPORT_CSV_HEADER = (
    "run", "support", "confidence", "inclusion", "amplitude",
    "antlen", "conlen", "numrules", "coverage",
)

_CONDITION_RE = re.compile(r"^(?P<name>.+?)\[(?P<lo>[^,\]]+),(?P<hi>[^,\]]+)\]$")


def _side_text(conditions, feature_names) -> str:
    return " AND ".join(
        f"{feature_names[c.feature_index]} ∈ [{c.lo:.4f}, {c.hi:.4f}]" for c in conditions
    )


def format_rule(rule: Rule, metrics: RuleMetrics, feature_names) -> str:
    return (
        f"IF {_side_text(rule.antecedent, feature_names)} "
        f"THEN {_side_text(rule.consequent, feature_names)} "
        f"@ Δt=[{rule.window.t1},{rule.window.t2}] | "
        f"supp={metrics.support:.4f} conf={metrics.confidence:.4f} "
        f"incl={metrics.inclusion:.4f} ampl={metrics.amplitude:.4f} "
        f"fit={metrics.fitness:.4f}"
    )


def write_rules_text(archive: RuleArchive, feature_names, path) -> None:
    with open(path, "w") as fh:
        for rule, metrics in archive:
            fh.write(format_rule(rule, metrics, feature_names) + "\n")


def _side_csv(conditions, feature_names) -> str:
    return ";".join(
        f"{feature_names[c.feature_index]}[{c.lo!r},{c.hi!r}]" for c in conditions
    )


def write_rules_csv(archive: RuleArchive, feature_names, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RULES_CSV_HEADER)
        for rule, metrics in archive:
            writer.writerow([
                _side_csv(rule.antecedent, feature_names),
                _side_csv(rule.consequent, feature_names),
                rule.window.t1,
                rule.window.t2,
                repr(metrics.support),
                repr(metrics.confidence),
                repr(metrics.inclusion),
                repr(metrics.amplitude),
                repr(metrics.fitness),
            ])


@dataclass(frozen=True)
class RuleRow:
    """One parsed line of a rules CSV, sufficient to rebuild a report."""

    antecedent: tuple[tuple[str, float, float], ...]
    consequent: tuple[tuple[str, float, float], ...]
    t1: int
    t2: int
    support: float
    confidence: float
    inclusion: float
    amplitude: float
    fitness: float


def _parse_side(text: str, path, line_no: int):
    if not text:
        raise ValueError(f"{path}:{line_no}: empty condition list")
    out = []
    for chunk in text.split(";"):
        m = _CONDITION_RE.match(chunk.strip())
        if m is None:
            raise ValueError(f"{path}:{line_no}: malformed condition {chunk!r}")
        out.append((m.group("name"), float(m.group("lo")), float(m.group("hi"))))
    return tuple(out)


def read_rules_csv(path) -> list[RuleRow]:
    """Parse a rules CSV; malformed rows raise with the offending line number."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty rules file")
        if tuple(header) != RULES_CSV_HEADER:
            raise ValueError(f"{path}:1: malformed rules header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RULES_CSV_HEADER):
                raise ValueError(
                    f"{path}:{line_no}: expected {len(RULES_CSV_HEADER)} fields, got {len(row)}"
                )
            try:
                t1, t2 = int(row[2]), int(row[3])
                supp, conf, incl, ampl, fit = (float(v) for v in row[4:9])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: non-numeric field: {exc}") from exc
            rows.append(RuleRow(
                _parse_side(row[0], path, line_no),
                _parse_side(row[1], path, line_no),
                t1, t2, supp, conf, incl, ampl, fit,
            ))
    return rows


def report_from_rows(rows: list[RuleRow], k_classes: int) -> RunReport:
    """Rebuild a report from parsed rules CSV rows."""
    n = len(rows)
    if n == 0:
        return EMPTY_REPORT
    covered = np.zeros(k_classes, dtype=bool)
    supp = conf = incl = ampl = antlen = conlen = 0.0
    for r in rows:
        supp += r.support
        conf += r.confidence
        incl += r.inclusion
        ampl += r.amplitude
        antlen += len(r.antecedent)
        conlen += len(r.consequent)
        covered[max(r.t1 - 1, 0) : min(r.t2, k_classes)] = True
    return RunReport(
        supp / n, conf / n, incl / n, ampl / n, antlen / n, conlen / n,
        n, int(covered.sum()) / k_classes,
    )


def report_values(rep: RunReport) -> list[float]:
    return [
        rep.mean_support, rep.mean_confidence, rep.mean_inclusion, rep.mean_amplitude,
        rep.mean_antlen, rep.mean_conlen, float(rep.numrules), rep.interval_coverage,
    ]


def mean_row(reports: list[RunReport]) -> list[float]:
    """Column-wise mean over per-run reports (the mean-over-runs summary)."""
    stacked = np.array([report_values(r) for r in reports])
    return stacked.mean(axis=0).tolist()


def format_report_table(rows: list[tuple[str, list[float]]], label_header: str = "run") -> str:
    """Aligned table with one row per label: supp conf incl ampl antlen conlen numrules intervals."""
    header = (
        f"{label_header:<12} {'supp':>7} {'conf':>7} {'incl':>7} {'ampl':>7} "
        f"{'antlen':>7} {'conlen':>7} {'numrules':>9} {'intervals':>10}"
    )
    lines = [header]
    for label, vals in rows:
        supp, conf, incl, ampl, antlen, conlen, numrules, coverage = vals
        lines.append(
            f"{label:<12} {supp:>7.4f} {conf:>7.4f} {incl:>7.4f} {ampl:>7.4f} "
            f"{antlen:>7.2f} {conlen:>7.2f} {numrules:>9.1f} {coverage * 100:>9.1f}%"
        )
    return "\n".join(lines)


def write_report_csv(rows: list[tuple[str, list[float]]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_CSV_HEADER)
        for label, vals in rows:
            writer.writerow([label] + [repr(v) for v in vals])


def report_rows(results: list[RunResult]) -> list[tuple[str, list[float]]]:
    """Per-run rows plus a labeled mean-over-runs row."""
    rows = [(str(r.run), report_values(r.report)) for r in results]
    rows.append(("mean", mean_row([r.report for r in results])))
    return rows
