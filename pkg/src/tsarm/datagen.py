"""Synthetic sensor telemetry for a single measuring point.

Emulates a low-cost monitoring node that samples light, air temperature,
air humidity, and soil moisture on a fixed cadence. Signals follow simple
bounded models so the downstream pipeline sees realistic structure:

* light: half-sine daylight arc (zero at night),
* temperature: small diurnal swing peaking early afternoon,
* humidity: anti-correlated with temperature,
* moisture: exponential dry-down with periodic re-wetting jumps.

Uniform jitter sized to each sensor's accuracy is added on top; averaging
within an hour-long frame suppresses it. Identical seeds yield identical
record sequences.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date as Date, time as Time, timedelta
from pathlib import Path

import numpy as np

LIGHT_MAX = 100_000.0       # lux, 16-bit light sensor ceiling
TEMPERATURE_MIN = -40.0
TEMPERATURE_MAX = 80.0
HUMIDITY_MIN = 0.0
HUMIDITY_MAX = 100.0
MOISTURE_MAX = 2300         # raw hygrometer counts

CSV_HEADER = ("mp", "light", "temperature", "humidity", "moisture", "date", "time")

# Signal model constants. Amplitudes keep every value inside the sensor
# ranges above for any seed; noise half-widths follow sensor accuracy
# (e.g. the humidity sensor is rated +/-2 %RH).
_LIGHT_PEAK = 60_000.0
_LIGHT_NOISE = 1_200.0
_TEMP_MEAN = 24.0
_TEMP_SWING = 4.0
_TEMP_PHASE_S = 28_800      # puts the daily maximum at 14:00
_TEMP_NOISE = 0.5
_HUMIDITY_BASE = 58.0
_HUMIDITY_PER_DEGREE = -2.5
_HUMIDITY_NOISE = 2.0
_MOISTURE_PEAK = 2_050.0
_MOISTURE_FLOOR = 600.0
_MOISTURE_NOISE = 10.0
_IRRIGATION_PERIOD_S = 3 * 86_400
_MOISTURE_TAU_S = 129_600.0  # 1.5-day dry-down time constant


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters; validation raises ValueError naming the field."""

    days: int
    cadence_seconds: float = 5.0
    start_date: Date = Date(2022, 9, 15)
    seed: int = 0
    drop_rate: float = 0.0
    measuring_point: str = "n1"
    sunrise_hour: float = 6.0
    daylight_hours: float = 12.0

    def __post_init__(self):
        if self.days < 1:
            raise ValueError(f"days must be >= 1, got {self.days}")
        if self.cadence_seconds <= 0:
            raise ValueError(f"cadence_seconds must be > 0, got {self.cadence_seconds}")
        if not 0.0 <= self.drop_rate < 1.0:
            raise ValueError(f"drop_rate must be in [0, 1), got {self.drop_rate}")
        if not 0.0 <= self.sunrise_hour < 24.0:
            raise ValueError(f"sunrise_hour must be in [0, 24), got {self.sunrise_hour}")
        if not 0.0 < self.daylight_hours <= 24.0:
            raise ValueError(f"daylight_hours must be in (0, 24], got {self.daylight_hours}")


@dataclass(slots=True)
class SensorRecord:
    """One raw telemetry tuple as transmitted by the measuring point."""

    measuring_point: str
    light: float
    temperature: float
    humidity: float
    moisture: int
    date: Date
    time: Time


def generate(config: GenConfig) -> list[SensorRecord]:
    """Generate records sorted by (date, time), deterministically from the seed.

    The record count is floor(days * 86400 / cadence) minus any randomly
    dropped records (each record is dropped independently with probability
    ``drop_rate``).
    """
    rng = np.random.default_rng(config.seed)
    n = math.floor(config.days * 86_400 / config.cadence_seconds)
    abs_seconds = np.floor(np.arange(n) * config.cadence_seconds).astype(np.int64)
    tod = abs_seconds % 86_400
    day_idx = abs_seconds // 86_400

    sunrise = config.sunrise_hour * 3_600.0
    daylength = config.daylight_hours * 3_600.0
    phase = (tod - sunrise) / daylength
    is_day = (phase >= 0.0) & (phase < 1.0)
    light = _LIGHT_PEAK * np.sin(np.pi * np.clip(phase, 0.0, 1.0))
    light = light + rng.uniform(-_LIGHT_NOISE, _LIGHT_NOISE, n)
    # night readings are exactly zero, as the light sensor reports
    light = np.where(is_day, np.clip(light, 0.0, LIGHT_MAX), 0.0)

    temp_base = _TEMP_MEAN + _TEMP_SWING * np.sin(
        2.0 * np.pi * (tod - _TEMP_PHASE_S) / 86_400.0
    )
    temperature = temp_base + rng.uniform(-_TEMP_NOISE, _TEMP_NOISE, n)

    humidity = (
        _HUMIDITY_BASE
        + _HUMIDITY_PER_DEGREE * (temp_base - _TEMP_MEAN)
        + rng.uniform(-_HUMIDITY_NOISE, _HUMIDITY_NOISE, n)
    )
    humidity = np.clip(humidity, HUMIDITY_MIN, HUMIDITY_MAX)

    since_wet = (abs_seconds % _IRRIGATION_PERIOD_S).astype(float)
    moisture = (
        _MOISTURE_FLOOR
        + (_MOISTURE_PEAK - _MOISTURE_FLOOR) * np.exp(-since_wet / _MOISTURE_TAU_S)
        + rng.uniform(-_MOISTURE_NOISE, _MOISTURE_NOISE, n)
    )
    moisture = np.clip(np.rint(moisture), 0, MOISTURE_MAX).astype(np.int64)

    keep = rng.random(n) >= config.drop_rate

    # quantize to the precision each sensor reports
    light_l = np.round(light, 1).tolist()
    temp_l = np.round(temperature, 2).tolist()
    hum_l = np.round(humidity, 2).tolist()
    moist_l = moisture.tolist()
    tod_l = tod.tolist()
    day_l = day_idx.tolist()

    dates = [config.start_date + timedelta(days=d) for d in range(config.days)]
    mp = config.measuring_point
    records = []
    for i in np.flatnonzero(keep).tolist():
        s = tod_l[i]
        h, rem = divmod(s, 3_600)
        m, sec = divmod(rem, 60)
        records.append(
            SensorRecord(mp, light_l[i], temp_l[i], hum_l[i], moist_l[i],
                         dates[day_l[i]], Time(h, m, sec))
        )
    return records


def write_csv(records, path) -> None:
    """Write records as CSV: mp,light,temperature,humidity,moisture,date,time."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in records:
                writer.writerow(
                    [r.measuring_point, r.light, r.temperature, r.humidity,
                     r.moisture, r.date.isoformat(), r.time.isoformat()]
                )
    except OSError as exc:
        raise OSError(f"cannot write sensor CSV {path}: {exc}") from exc
