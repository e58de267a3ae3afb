"""Raw telemetry parsing and the time-frame transaction database.

Records are grouped into fixed-duration frames aligned to midnight; each
frame is reduced to compound features (AVG/MAX/MIN/DIF per indicator) plus
a day index (SEQUENCE) and a time-of-day class (CLASS). The resulting
N x M matrix together with per-feature observed bounds is what the rule
miner operates on.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import date as Date, time as Time
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .datagen import CSV_HEADER, SensorRecord

INDICATORS = ("TEMPERATURE", "HUMIDITY", "MOISTURE", "LIGHT")
MODIFIERS = ("AVG", "MAX", "MIN", "DIF")
#: Canonical feature order: four modifiers per indicator, then SEQUENCE, CLASS.
FEATURE_NAMES = tuple(
    f"{mod}_{ind}" for ind in INDICATORS for mod in MODIFIERS
) + ("SEQUENCE", "CLASS")

_RECORD_FIELDS = ("temperature", "humidity", "moisture", "light")


@dataclass(frozen=True)
class PreprocessConfig:
    frame_duration_seconds: int = 3600
    k_classes: int = 24
    min_records_per_frame: int = 1

    def __post_init__(self):
        if self.frame_duration_seconds <= 0 or 86_400 % self.frame_duration_seconds != 0:
            raise ValueError(
                f"frame_duration_seconds must divide 86400, got {self.frame_duration_seconds}"
            )
        if self.k_classes < 1:
            raise ValueError(f"k_classes must be >= 1, got {self.k_classes}")
        if self.min_records_per_frame < 0:
            raise ValueError(
                f"min_records_per_frame must be >= 0, got {self.min_records_per_frame}"
            )


@dataclass(frozen=True)
class Transaction:
    """One time frame reduced to its compound features.

    ``features`` holds the 16 modifier values in FEATURE_NAMES[:16] order;
    ``sequence`` is the day index and ``time_class`` the 1-based class of
    the frame's start within the day.
    """

    features: tuple[float, ...]
    sequence: int
    time_class: int

    def row(self) -> tuple[float, ...]:
        return self.features + (float(self.sequence), float(self.time_class))


def timestamp_of(t: Time) -> int:
    """Map a wall-clock time to its second-in-day in [0, 86399]."""
    return t.hour * 3_600 + t.minute * 60 + t.second


def class_of(timestamp: int, k_classes: int) -> int:
    """Map a second-in-day to the 1-based class index in [1, k_classes]."""
    if not 0 <= timestamp <= 86_399:
        raise ValueError(f"timestamp must be in [0, 86399], got {timestamp}")
    if k_classes < 1:
        raise ValueError(f"k_classes must be >= 1, got {k_classes}")
    return timestamp * k_classes // 86_400 + 1


def sequence_of(day: Date, start_date: Date) -> int:
    """Whole-day index of ``day`` counted from ``start_date`` (which is 0)."""
    delta = (day - start_date).days
    if delta < 0:
        raise ValueError(f"date {day} precedes start date {start_date}")
    return delta


def parse_sensor_csv(path) -> list[SensorRecord]:
    """Parse a sensor CSV written by datagen; malformed rows raise with line numbers."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such sensor file: {path}")
    records: list[SensorRecord] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(CSV_HEADER):
            raise ValueError(
                f"{path}: malformed header {header!r}, expected {','.join(CSV_HEADER)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 7:
                raise ValueError(f"{path}:{line_no}: expected 7 fields, got {len(row)}")
            mp, light_s, temp_s, hum_s, moist_s, date_s, time_s = row
            try:
                light = float(light_s)
                temperature = float(temp_s)
                humidity = float(hum_s)
                moisture = int(moist_s)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: non-numeric sensor field: {exc}") from exc
            try:
                day = Date.fromisoformat(date_s)
                tod = Time.fromisoformat(time_s)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: invalid date/time: {exc}") from exc
            records.append(SensorRecord(mp, light, temperature, humidity, moisture, day, tod))
    return records


def extract_features(
    frame: Sequence[SensorRecord],
    config: PreprocessConfig,
    start_date: Date | None = None,
) -> Transaction:
    """Reduce one frame of same-day, chronologically ordered records.

    Per indicator: AVG is the arithmetic mean, MAX/MIN the extremes, and
    DIF the last value minus the first. The class comes from the frame's
    first record time, the sequence from its date relative to start_date.
    """
    if not frame:
        raise ValueError("cannot extract features from an empty frame")
    day = frame[0].date
    for r in frame:
        if r.date != day:
            raise ValueError(f"frame mixes dates {day} and {r.date}")
    feats: list[float] = []
    for field in _RECORD_FIELDS:
        values = [getattr(r, field) for r in frame]
        feats.append(math.fsum(values) / len(values))
        feats.append(max(values))
        feats.append(min(values))
        feats.append(values[-1] - values[0])
    seq = sequence_of(day, start_date if start_date is not None else day)
    cls = class_of(timestamp_of(frame[0].time), config.k_classes)
    return Transaction(tuple(feats), seq, cls)


class TransactionDatabase:
    """Immutable N x M feature matrix plus per-feature observed bounds.

    The SEQUENCE and CLASS columns are located by name so reduced test
    databases with fewer sensed features use the same machinery as the
    full 18-feature layout.
    """

    def __init__(self, features, feature_names: Sequence[str], k_classes: int):
        matrix = np.asarray(features, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] < 1:
            raise ValueError("feature matrix must be 2-d and non-empty")
        names = tuple(feature_names)
        if len(names) != matrix.shape[1]:
            raise ValueError(
                f"{len(names)} feature names for {matrix.shape[1]} columns"
            )
        if "SEQUENCE" not in names or "CLASS" not in names:
            raise ValueError("feature names must include SEQUENCE and CLASS")
        if k_classes < 1:
            raise ValueError(f"k_classes must be >= 1, got {k_classes}")
        self.features = matrix
        self.feature_names = names
        self.k_classes = int(k_classes)
        self.sequence_index = names.index("SEQUENCE")
        self.class_index = names.index("CLASS")
        self.sequences = matrix[:, self.sequence_index].astype(np.int64)
        self.classes = matrix[:, self.class_index].astype(np.int64)
        self.n_sequences = int(np.unique(self.sequences).size)
        self.domain_lo = matrix.min(axis=0)
        self.domain_hi = matrix.max(axis=0)

    @property
    def n_transactions(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @classmethod
    def from_transactions(cls, transactions: Iterable[Transaction], k_classes: int):
        rows = [t.row() for t in transactions]
        if not rows:
            raise ValueError("no transactions to build a database from")
        return cls(np.array(rows, dtype=float), FEATURE_NAMES, k_classes)


def build_database(records: Sequence[SensorRecord], config: PreprocessConfig) -> TransactionDatabase:
    """Partition chronologically ordered records into frames and extract features.

    Frames are aligned to midnight so hourly frames coincide with K=24
    classes. Frames with fewer than min_records_per_frame records are
    dropped; at least one transaction must survive.
    """
    if not records:
        raise ValueError("no input records")
    start = records[0].date
    duration = config.frame_duration_seconds
    frames: list[list[SensorRecord]] = []
    current: list[SensorRecord] = []
    current_key = None
    for rec in records:
        key = (rec.date, timestamp_of(rec.time) // duration)
        if key != current_key:
            if current:
                frames.append(current)
            current = []
            current_key = key
        current.append(rec)
    if current:
        frames.append(current)
    needed = max(config.min_records_per_frame, 1)
    transactions = [
        extract_features(frame, config, start) for frame in frames if len(frame) >= needed
    ]
    if not transactions:
        raise ValueError(
            f"no frame had at least {needed} records; nothing to build"
        )
    return TransactionDatabase.from_transactions(transactions, config.k_classes)


def metadata_path(path) -> Path:
    return Path(path).with_suffix(".meta.json")


def write_transactions(db: TransactionDatabase, path) -> None:
    """Write the transaction CSV plus a JSON sidecar with domain metadata."""
    path = Path(path)
    seq_i, cls_i = db.sequence_index, db.class_index
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(db.feature_names)
            for row in db.features.tolist():
                row[seq_i] = int(row[seq_i])
                row[cls_i] = int(row[cls_i])
                writer.writerow(row)
        meta = {
            "feature_names": list(db.feature_names),
            "domain_lo": db.domain_lo.tolist(),
            "domain_hi": db.domain_hi.tolist(),
            "k_classes": db.k_classes,
            "n_sequences": db.n_sequences,
        }
        metadata_path(path).write_text(json.dumps(meta, indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write transactions to {path}: {exc}") from exc


def load_database(path) -> TransactionDatabase:
    """Load a transaction CSV; K comes from the sidecar when present."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such transactions file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ValueError(f"{path}: empty transactions file")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: non-numeric value: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: no transactions in file")
    meta_file = metadata_path(path)
    if meta_file.exists():
        meta = json.loads(meta_file.read_text())
        k_classes = int(meta["k_classes"])
    else:
        # fall back to the largest observed class; exact for full-day data
        k_classes = int(max(r[header.index("CLASS")] for r in rows))
    return TransactionDatabase(np.array(rows, dtype=float), header, k_classes)
