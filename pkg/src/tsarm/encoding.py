"""Genotype-to-rule mapping and the rule fitness objective.

A candidate solution is a real vector in [0,1]^(4L+3): L quadruples of
(selector, bound, bound, presence threshold), two window elements, and a
cutting point. The selector element does double duty: its cell in a
uniform grid over the selectable features picks the feature, and its raw
value is the sort key ordering the enabled conditions. The cutting point
splits that ordering into antecedent and consequent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measures import (
    AttributeCondition,
    FitnessWeights,
    Rule,
    TimeWindow,
    evaluate_rule,
)

THRESHOLD_MODES = ("deterministic", "stochastic")


@dataclass(frozen=True)
class DecodeConfig:
    """Decoding parameters tied to a database layout.

    ``excluded_features`` defaults to the last two columns (SEQUENCE and
    CLASS): the window already locates a rule in time, so the day index
    and class are not selectable as rule attributes.
    """

    n_features: int
    k_classes: int
    max_rule_length: int = 4
    threshold_mode: str = "deterministic"
    excluded_features: frozenset[int] | None = None
    selectable: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_rule_length < 2:
            raise ValueError(f"max_rule_length must be >= 2, got {self.max_rule_length}")
        if self.k_classes < 1:
            raise ValueError(f"k_classes must be >= 1, got {self.k_classes}")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ValueError(
                f"threshold_mode must be one of {THRESHOLD_MODES}, got {self.threshold_mode!r}"
            )
        excluded = self.excluded_features
        if excluded is None:
            excluded = frozenset({self.n_features - 2, self.n_features - 1})
        else:
            excluded = frozenset(int(i) for i in excluded)
        object.__setattr__(self, "excluded_features", excluded)
        selectable = tuple(i for i in range(self.n_features) if i not in excluded)
        if len(selectable) < 2:
            raise ValueError(
                f"need at least 2 selectable features, have {len(selectable)} "
                f"of {self.n_features} after exclusions"
            )
        object.__setattr__(self, "selectable", selectable)

    @property
    def genotype_length(self) -> int:
        return 4 * self.max_rule_length + 3

    @classmethod
    def for_database(cls, db, **kwargs) -> "DecodeConfig":
        kwargs.setdefault(
            "excluded_features", frozenset({db.sequence_index, db.class_index})
        )
        return cls(n_features=db.n_features, k_classes=db.k_classes, **kwargs)


def decode(values, db, config: DecodeConfig, rng=None) -> Rule | None:
    """Map a genotype to a rule against ``db``; None when no rule is expressible.

    Quadruples are walked in ascending selector order; a feature already
    claimed by an earlier quadruple disables later ones. Interval bounds
    are the feature's observed domain scaled by the two middle elements
    (smaller first). Presence is gated by the fourth element: >= 0.5 in
    deterministic mode, a uniform draw below it in stochastic mode. Fewer
    than two enabled conditions make the genotype invalid, which is a
    value (None), not an error.
    """
    vals = np.asarray(values, dtype=float)
    length = config.genotype_length
    if vals.shape != (length,):
        raise ValueError(f"genotype must have length {length}, got shape {vals.shape}")
    if config.threshold_mode == "stochastic":
        if rng is None:
            raise ValueError("stochastic threshold mode requires an rng")
        gates = [rng.random() < vals[4 * j + 3] for j in range(config.max_rule_length)]
    else:
        gates = [vals[4 * j + 3] >= 0.5 for j in range(config.max_rule_length)]

    selectable = config.selectable
    m_sel = len(selectable)
    dlo = db.domain_lo
    dhi = db.domain_hi

    order = sorted((vals[4 * j], j) for j in range(config.max_rule_length))
    conditions: list[AttributeCondition] = []
    seen: set[int] = set()
    for key, j in order:
        if not gates[j]:
            continue
        cell = min(max(int(key * m_sel), 0), m_sel - 1)
        feat = selectable[cell]
        if feat in seen:
            continue
        seen.add(feat)
        u = vals[4 * j + 1]
        v = vals[4 * j + 2]
        if u > v:
            u, v = v, u
        span = dhi[feat] - dlo[feat]
        conditions.append(
            AttributeCondition(feat, float(dlo[feat] + span * u), float(dlo[feat] + span * v))
        )
    if len(conditions) < 2:
        return None

    k = config.k_classes
    base = 4 * config.max_rule_length
    t_a = min(max(int(vals[base] * k) + 1, 1), k)
    t_b = min(max(int(vals[base + 1] * k) + 1, 1), k)
    if t_a > t_b:
        t_a, t_b = t_b, t_a
    cut = min(max(int(vals[base + 2] * (config.max_rule_length - 1)) + 1, 1),
              config.max_rule_length - 1)
    split = min(cut, len(conditions) - 1)
    return Rule(tuple(conditions[:split]), tuple(conditions[split:]), TimeWindow(t_a, t_b))


def fitness(
    values,
    db,
    weights: FitnessWeights | None = None,
    config: DecodeConfig | None = None,
    rng=None,
    counting: str = "days",
) -> float:
    """Decoded rule's weighted fitness; invalid genotypes score 0."""
    cfg = config if config is not None else DecodeConfig.for_database(db)
    rule = decode(values, db, cfg, rng)
    if rule is None:
        return 0.0
    return evaluate_rule(rule, db, weights, counting).fitness
