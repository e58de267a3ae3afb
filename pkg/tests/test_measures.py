import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsarm.measures import (
    AttributeCondition,
    FitnessWeights,
    Rule,
    RuleMetrics,
    TimeWindow,
    amplitude,
    confidence,
    evaluate_rule,
    inclusion,
    matches,
    support,
    weighted_fitness,
)

from conftest import make_db, random_db


def cond(idx, lo, hi):
    return AttributeCondition(idx, lo, hi)


def rule_of(ante, cons, t1, t2):
    return Rule(tuple(ante), tuple(cons), TimeWindow(t1, t2))


# --- independent oracle: naive loop over (sequence, transaction) pairs ------

def oracle_day_counts(matrix, seq_col, cls_col, ante, cons, t1, t2):
    """Brute-force day enumeration, written without the library's masking."""
    days = sorted({int(row[seq_col]) for row in matrix})
    hit_xy = 0
    hit_x = 0
    for day in days:
        day_x = False
        day_xy = False
        for row in matrix:
            if int(row[seq_col]) != day:
                continue
            if not t1 <= row[cls_col] <= t2:
                continue
            if all(lo <= row[i] <= hi for i, lo, hi in ante):
                day_x = True
                if all(lo <= row[i] <= hi for i, lo, hi in cons):
                    day_xy = True
        hit_x += day_x
        hit_xy += day_xy
    return hit_xy, len(days), hit_x


def oracle_transaction_counts(matrix, cls_col, ante, cons, t1, t2):
    num = den_supp = den_conf = 0
    for row in matrix:
        if not t1 <= row[cls_col] <= t2:
            continue
        den_supp += 1
        if all(lo <= row[i] <= hi for i, lo, hi in ante):
            den_conf += 1
            if all(lo <= row[i] <= hi for i, lo, hi in cons):
                num += 1
    return num, den_supp, den_conf


def random_rule(rng, db):
    n_value = db.n_features - 2
    if n_value >= 2:
        picks = rng.choice(n_value, size=min(n_value, int(rng.integers(2, 5))), replace=False)
    else:
        picks = np.array([0, 0])  # degenerate; skipped by caller
    split = int(rng.integers(1, len(picks))) if len(picks) > 1 else 1
    conds = []
    for idx in picks:
        a, b = sorted(rng.uniform(db.domain_lo[idx], db.domain_hi[idx], size=2))
        conds.append(cond(int(idx), float(a), float(b)))
    t = sorted(int(rng.integers(1, db.k_classes + 1)) for _ in range(2))
    return rule_of(conds[:split], conds[split:], t[0], t[1])


# --- types -------------------------------------------------------------------

def test_condition_rejects_inverted_interval():
    with pytest.raises(ValueError):
        cond(0, 2.0, 1.0)


def test_window_validation():
    with pytest.raises(ValueError):
        TimeWindow(3, 2)
    with pytest.raises(ValueError):
        TimeWindow(0, 2)
    assert TimeWindow(12, 14).length() == 3


def test_rule_requires_disjoint_nonempty_sides():
    with pytest.raises(ValueError):
        rule_of([cond(0, 0, 1)], [], 1, 2)
    with pytest.raises(ValueError):
        rule_of([cond(0, 0, 1)], [cond(0, 0, 1)], 1, 2)


def test_weights_validation():
    with pytest.raises(ValueError):
        FitnessWeights(0, 0, 0, 0)
    with pytest.raises(ValueError):
        FitnessWeights(alpha=-1)


# --- matches ------------------------------------------------------------------

def test_matches_vacuous_and_full_domain(tiny_db):
    row = tiny_db.features[0]
    assert matches(row, [])
    full = [cond(j, float(tiny_db.domain_lo[j]), float(tiny_db.domain_hi[j]))
            for j in range(tiny_db.n_features)]
    assert all(matches(r, full) for r in tiny_db.features)


def test_matches_bounds_inclusive():
    assert matches([5.0], [cond(0, 5.0, 7.0)])
    assert matches([7.0], [cond(0, 5.0, 7.0)])
    assert not matches([7.0001], [cond(0, 5.0, 7.0)])


# --- support / confidence -------------------------------------------------------

def test_worked_example_support_is_two_fifths(tiny_db):
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 12, 14)
    assert support(r, tiny_db) == 0.4


def test_worked_example_day_deduplication(tiny_db):
    # day 1 matches twice inside the window but counts once
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 13, 14)
    assert support(r, tiny_db) == pytest.approx(1 / 5)


def test_out_of_window_match_does_not_count(tiny_db):
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 1, 11)
    assert support(r, tiny_db) == 0.0


def test_confidence_worked_example(tiny_db):
    # day 0 matches the antecedent alone inside the window
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 12, 14)
    assert confidence(r, tiny_db) == pytest.approx(2 / 3)


def test_confidence_one_when_consequent_always_follows(tiny_db):
    r = rule_of([cond(1, 18.0, 20.0)], [cond(0, 18.0, 20.0)], 12, 14)
    assert confidence(r, tiny_db) == 1.0


def test_confidence_zero_when_antecedent_never_matches(tiny_db):
    r = rule_of([cond(0, -5.0, -1.0)], [cond(1, 18.0, 20.0)], 1, 24)
    assert confidence(r, tiny_db) == 0.0
    assert support(r, tiny_db) == 0.0


def test_empty_interval_rule_scores_zero(tiny_db):
    r = rule_of([cond(0, 21.0, 21.5)], [cond(1, 18.0, 20.0)], 1, 24)
    assert support(r, tiny_db) == 0.0


def test_support_not_above_confidence_randomized():
    rng = np.random.default_rng(77)
    for _ in range(200):
        db = random_db(rng)
        if db.n_features < 4:
            continue
        r = random_rule(rng, db)
        s, c = support(r, db), confidence(r, db)
        assert 0.0 <= s <= c <= 1.0


def test_widening_interval_never_decreases_support():
    rng = np.random.default_rng(5)
    for _ in range(100):
        db = random_db(rng)
        if db.n_features < 4:
            continue
        r = random_rule(rng, db)
        wider = Rule(
            tuple(cond(c.feature_index, c.lo - 1.0, c.hi + 1.0) for c in r.antecedent),
            tuple(cond(c.feature_index, c.lo - 1.0, c.hi + 1.0) for c in r.consequent),
            r.window,
        )
        assert support(wider, db) >= support(r, db)


def test_widening_window_never_decreases_support():
    rng = np.random.default_rng(6)
    for _ in range(100):
        db = random_db(rng)
        if db.n_features < 4:
            continue
        r = random_rule(rng, db)
        wider = Rule(r.antecedent, r.consequent, TimeWindow(1, db.k_classes))
        assert support(wider, db) >= support(r, db)


def test_oracle_equivalence_quick():
    rng = np.random.default_rng(123)
    checked = 0
    while checked < 150:
        db = random_db(rng)
        if db.n_features < 4:
            continue
        r = random_rule(rng, db)
        ante = [(c.feature_index, c.lo, c.hi) for c in r.antecedent]
        cons = [(c.feature_index, c.lo, c.hi) for c in r.consequent]
        matrix = db.features.tolist()
        num, den, conf_den = oracle_day_counts(
            matrix, db.sequence_index, db.class_index, ante, cons, r.window.t1, r.window.t2
        )
        assert support(r, db) == (num / den if den else 0.0)
        assert confidence(r, db) == (num / conf_den if conf_den else 0.0)
        tnum, tden, tconf = oracle_transaction_counts(
            matrix, db.class_index, ante, cons, r.window.t1, r.window.t2
        )
        assert support(r, db, counting="transactions") == (tnum / tden if tden else 0.0)
        assert confidence(r, db, counting="transactions") == (tnum / tconf if tconf else 0.0)
        checked += 1


def test_counting_mode_validation(tiny_db):
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 12, 14)
    with pytest.raises(ValueError, match="counting"):
        support(r, tiny_db, counting="hours")


def test_measures_invariant_under_row_permutation():
    rng = np.random.default_rng(9)
    db = random_db(rng, n_rows=60, n_value_features=3, k_classes=12, n_days=5)
    r = random_rule(rng, db)
    shuffled = make_db(db.features[rng.permutation(db.n_transactions)], db.k_classes,
                       db.feature_names)
    for counting in ("days", "transactions"):
        assert support(r, db, counting) == support(r, shuffled, counting)
        assert confidence(r, db, counting) == confidence(r, shuffled, counting)
    assert amplitude(r, db) == amplitude(r, shuffled)


# --- inclusion / amplitude ------------------------------------------------------

def test_inclusion_values():
    r3 = rule_of([cond(0, 0, 1), cond(1, 0, 1)], [cond(2, 0, 1)], 1, 2)
    assert inclusion(r3, 18) == pytest.approx(3 / 18)
    r4 = rule_of([cond(0, 0, 1), cond(1, 0, 1), cond(2, 0, 1)], [cond(3, 0, 1)], 1, 2)
    assert inclusion(r4, 18) == pytest.approx(4 / 18)
    r2 = rule_of([cond(0, 0, 1)], [cond(1, 0, 1)], 1, 2)
    assert inclusion(r2, 18) == pytest.approx(2 / 18)
    with pytest.raises(ValueError):
        inclusion(r2, 0)


def amplitude_db(n_features=18):
    # every feature spans [0, 10] except feature 2, which is constant
    rows = [[0.0] * (n_features - 2) + [0.0, 1.0], [10.0] * (n_features - 2) + [1.0, 2.0]]
    rows[0][2] = 5.0
    rows[1][2] = 5.0
    return make_db(rows, 4)


def test_amplitude_full_span_condition():
    db = amplitude_db()
    r = rule_of([cond(0, 0.0, 10.0)], [cond(1, 3.0, 3.0)], 1, 2)
    # full-span term is 1, point interval contributes 0
    assert amplitude(r, db) == pytest.approx(1 - 1 / 18)


def test_amplitude_point_intervals_only():
    db = amplitude_db()
    r = rule_of([cond(0, 4.0, 4.0)], [cond(1, 3.0, 3.0)], 1, 2)
    assert amplitude(r, db) == pytest.approx(1.0)


def test_amplitude_two_half_spans():
    db = amplitude_db()
    r = rule_of([cond(0, 0.0, 5.0)], [cond(1, 5.0, 10.0)], 1, 2)
    assert amplitude(r, db) == pytest.approx(1 - (0.5 + 0.5) / 18)


def test_amplitude_degenerate_domain_contributes_zero():
    db = amplitude_db()
    r = rule_of([cond(2, 5.0, 5.0)], [cond(1, 0.0, 10.0)], 1, 2)
    assert amplitude(r, db) == pytest.approx(1 - 1 / 18)


@settings(max_examples=100, deadline=None)
@given(
    lo1=st.floats(0, 10), hi1=st.floats(0, 10),
    lo2=st.floats(0, 10), hi2=st.floats(0, 10),
)
def test_amplitude_in_unit_interval(lo1, hi1, lo2, hi2):
    db = amplitude_db()
    a = rule_of([cond(0, min(lo1, hi1), max(lo1, hi1))],
                [cond(1, min(lo2, hi2), max(lo2, hi2))], 1, 4)
    assert 0.0 <= amplitude(a, db) <= 1.0


# --- fitness combination ---------------------------------------------------------

def test_weighted_fitness_equation():
    value = weighted_fitness(0.4, 0.8, 3 / 18, 17 / 18, FitnessWeights(1, 1, 1, 1))
    assert value == pytest.approx(0.5777777777777778, abs=1e-12)


def test_weighted_fitness_degenerate_weights():
    assert weighted_fitness(0.4, 0.9, 0.1, 0.2, FitnessWeights(1, 0, 0, 0)) == 0.4


def test_evaluate_rule_consistency(tiny_db):
    r = rule_of([cond(0, 18.0, 20.0)], [cond(1, 18.0, 20.0)], 12, 14)
    m = evaluate_rule(r, tiny_db)
    assert isinstance(m, RuleMetrics)
    assert m.support == support(r, tiny_db)
    assert m.confidence == confidence(r, tiny_db)
    assert m.inclusion == inclusion(r, tiny_db.n_features)
    assert m.amplitude == amplitude(r, tiny_db)
    assert m.fitness == weighted_fitness(m.support, m.confidence, m.inclusion, m.amplitude)
