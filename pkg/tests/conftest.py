"""Shared builders for small transaction databases."""

import numpy as np
import pytest

from tsarm.preprocess import TransactionDatabase


def make_db(matrix, k_classes, names=None) -> TransactionDatabase:
    """Database from a raw matrix; last two columns default to SEQUENCE, CLASS."""
    matrix = np.asarray(matrix, dtype=float)
    if names is None:
        names = tuple(f"F{i}" for i in range(matrix.shape[1] - 2)) + ("SEQUENCE", "CLASS")
    return TransactionDatabase(matrix, names, k_classes)


def worked_example_db() -> TransactionDatabase:
    """5 days x 24 classes = 120 transactions with two temperature features.

    Both features fall in [18, 20] only on (day 1, class 13), (day 1,
    class 14), and (day 3, class 12); day 0 class 13 matches the first
    feature alone; day 2 class 20 matches both but sits outside [12, 14].
    Within window [12, 14] the joint conditions therefore hold on exactly
    2 of the 5 days.
    """
    rows = []
    for day in range(5):
        for cls in range(1, 25):
            min_t, max_t = 25.0, 27.0
            if (day, cls) in {(1, 13), (1, 14), (3, 12), (2, 20)}:
                min_t, max_t = 19.0, 19.5
            if (day, cls) == (0, 13):
                min_t, max_t = 19.0, 27.0
            rows.append([min_t, max_t, float(day), float(cls)])
    return make_db(rows, 24, ("MIN_TEMPERATURE", "MAX_TEMPERATURE", "SEQUENCE", "CLASS"))


def random_db(rng, n_rows=None, n_value_features=None, k_classes=None, n_days=None):
    """Small random database with coarse integer-valued features."""
    n_rows = n_rows or int(rng.integers(5, 121))
    n_value_features = n_value_features or int(rng.integers(1, 4))
    k_classes = k_classes or int(rng.integers(1, 25))
    n_days = n_days or int(rng.integers(1, 8))
    values = rng.integers(0, 6, size=(n_rows, n_value_features)).astype(float)
    seqs = rng.integers(0, n_days, size=(n_rows, 1)).astype(float)
    classes = rng.integers(1, k_classes + 1, size=(n_rows, 1)).astype(float)
    return make_db(np.hstack([values, seqs, classes]), k_classes)


@pytest.fixture
def tiny_db():
    return worked_example_db()
