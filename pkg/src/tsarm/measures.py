"""Quality measures for time-windowed numerical association rules.

A rule is a pair of disjoint condition sets over database features plus an
inclusive time window of class indices. Support and confidence count at
day (SEQUENCE) granularity: a day counts when at least one of its
transactions inside the window satisfies the conditions. A literal
per-transaction reading is available via ``counting="transactions"``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COUNTING_MODES = ("days", "transactions")


@dataclass(frozen=True, order=True)
class AttributeCondition:
    """Inclusive numeric interval on one feature."""

    feature_index: int
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"lo {self.lo} exceeds hi {self.hi}")


@dataclass(frozen=True)
class TimeWindow:
    """Inclusive range of 1-based class indices."""

    t1: int
    t2: int

    def __post_init__(self):
        if not 1 <= self.t1 <= self.t2:
            raise ValueError(f"window must satisfy 1 <= t1 <= t2, got [{self.t1}, {self.t2}]")

    def length(self) -> int:
        return self.t2 - self.t1 + 1


@dataclass(frozen=True)
class Rule:
    """Antecedent implies consequent, restricted to a time window."""

    antecedent: tuple[AttributeCondition, ...]
    consequent: tuple[AttributeCondition, ...]
    window: TimeWindow

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError("antecedent and consequent must both be non-empty")
        left = {c.feature_index for c in self.antecedent}
        right = {c.feature_index for c in self.consequent}
        if left & right:
            raise ValueError(f"antecedent and consequent share features {sorted(left & right)}")

    @property
    def conditions(self) -> tuple[AttributeCondition, ...]:
        return self.antecedent + self.consequent

    def length(self) -> int:
        return len(self.antecedent) + len(self.consequent)


@dataclass(frozen=True)
class RuleMetrics:
    support: float
    confidence: float
    inclusion: float
    amplitude: float
    fitness: float


@dataclass(frozen=True)
class FitnessWeights:
    """Non-negative weights of support, confidence, inclusion, amplitude."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        ws = (self.alpha, self.beta, self.gamma, self.delta)
        if any(w < 0 for w in ws):
            raise ValueError(f"weights must be non-negative, got {ws}")
        if sum(ws) == 0:
            raise ValueError("at least one weight must be positive")


def matches(row, conditions) -> bool:
    """True iff every condition's feature value lies inside its interval."""
    for c in conditions:
        v = row[c.feature_index]
        if v < c.lo or v > c.hi:
            return False
    return True


def _condition_mask(db, conditions) -> np.ndarray:
    mask = np.ones(db.n_transactions, dtype=bool)
    for c in conditions:
        col = db.features[:, c.feature_index]
        mask &= (col >= c.lo) & (col <= c.hi)
    return mask


def _days_containing(db, mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    return int(np.unique(db.sequences[mask]).size)


def _counts(rule: Rule, db, counting: str) -> tuple[int, int, int]:
    """(numerator, support denominator, confidence denominator) as exact ints."""
    if counting not in COUNTING_MODES:
        raise ValueError(f"counting must be one of {COUNTING_MODES}, got {counting!r}")
    in_window = (db.classes >= rule.window.t1) & (db.classes <= rule.window.t2)
    x_mask = in_window & _condition_mask(db, rule.antecedent)
    xy_mask = x_mask & _condition_mask(db, rule.consequent)
    if counting == "days":
        return _days_containing(db, xy_mask), db.n_sequences, _days_containing(db, x_mask)
    return (
        int(np.count_nonzero(xy_mask)),
        int(np.count_nonzero(in_window)),
        int(np.count_nonzero(x_mask)),
    )


def support(rule: Rule, db, counting: str = "days") -> float:
    """Fraction of days (or in-window transactions) matching the whole rule."""
    num, den, _ = _counts(rule, db, counting)
    return num / den if den else 0.0


def confidence(rule: Rule, db, counting: str = "days") -> float:
    """Matching fraction among days (or transactions) where the antecedent holds.

    Returns 0 when the antecedent never matches inside the window.
    """
    num, _, den = _counts(rule, db, counting)
    return num / den if den else 0.0


def inclusion(rule: Rule, n_features: int) -> float:
    """Fraction of all database features used by the rule."""
    if n_features <= 0:
        raise ValueError(f"n_features must be positive, got {n_features}")
    return rule.length() / n_features


def amplitude(rule: Rule, db) -> float:
    """Reward for narrow intervals: 1 - mean normalized width over all M features.

    Conditions on a degenerate (constant) feature contribute zero width.
    """
    total = 0.0
    for c in rule.conditions:
        span = db.domain_hi[c.feature_index] - db.domain_lo[c.feature_index]
        if span > 0:
            total += (c.hi - c.lo) / span
    return float(1.0 - total / db.n_features)


def weighted_fitness(
    support: float,
    confidence: float,
    inclusion: float,
    amplitude: float,
    weights: FitnessWeights | None = None,
) -> float:
    """Weighted mean of the four measures, normalized by the weight sum."""
    w = weights if weights is not None else FitnessWeights()
    return (
        w.alpha * support + w.beta * confidence + w.gamma * inclusion + w.delta * amplitude
    ) / (w.alpha + w.beta + w.gamma + w.delta)


def evaluate_rule(
    rule: Rule,
    db,
    weights: FitnessWeights | None = None,
    counting: str = "days",
) -> RuleMetrics:
    """Compute all measures and the weighted fitness in one pass."""
    num, supp_den, conf_den = _counts(rule, db, counting)
    supp = num / supp_den if supp_den else 0.0
    conf = num / conf_den if conf_den else 0.0
    incl = inclusion(rule, db.n_features)
    ampl = amplitude(rule, db)
    return RuleMetrics(supp, conf, incl, ampl, weighted_fitness(supp, conf, incl, ampl, weights))
