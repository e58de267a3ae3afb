import math
from datetime import date, time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsarm import datagen
from tsarm.preprocess import parse_sensor_csv


def test_one_day_record_count():
    records = datagen.generate(datagen.GenConfig(days=1, seed=0))
    assert len(records) == 17_280  # 86400 / 5


@pytest.mark.parametrize("days,cadence", [(1, 5.0), (2, 7.0), (1, 60.0), (3, 12.5)])
def test_record_count_formula(days, cadence):
    config = datagen.GenConfig(days=days, cadence_seconds=cadence, seed=3)
    records = datagen.generate(config)
    assert len(records) == math.floor(days * 86_400 / cadence)


def test_same_seed_identical_output():
    config = datagen.GenConfig(days=1, cadence_seconds=30.0, seed=42)
    assert datagen.generate(config) == datagen.generate(config)


def test_different_seeds_differ():
    a = datagen.generate(datagen.GenConfig(days=1, cadence_seconds=30.0, seed=1))
    b = datagen.generate(datagen.GenConfig(days=1, cadence_seconds=30.0, seed=2))
    assert a != b


def test_fourteen_day_drop_rate_matches_collection_stats():
    # target count of 233,980 records over 14 days at 5 s cadence
    base = 14 * 17_280
    drop = 1.0 - 233_980 / base
    records = datagen.generate(datagen.GenConfig(days=14, seed=11, drop_rate=drop))
    assert abs(len(records) - 233_980) < 800
    assert len(records) < base


def test_records_sorted_by_date_time():
    records = datagen.generate(datagen.GenConfig(days=2, cadence_seconds=90.0, seed=5))
    keys = [(r.date, r.time) for r in records]
    assert keys == sorted(keys)


def test_night_light_is_exactly_zero():
    records = datagen.generate(datagen.GenConfig(days=1, cadence_seconds=60.0, seed=9))
    night = [r for r in records if r.time.hour < 6 or r.time.hour >= 18]
    assert night and all(r.light == 0.0 for r in night)
    noon = [r for r in records if r.time.hour == 12]
    assert all(r.light > 0.0 for r in noon)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_values_within_sensor_ranges_for_any_seed(seed):
    records = datagen.generate(datagen.GenConfig(days=1, cadence_seconds=300.0, seed=seed))
    for r in records:
        assert 0.0 <= r.light <= datagen.LIGHT_MAX
        assert datagen.TEMPERATURE_MIN <= r.temperature <= datagen.TEMPERATURE_MAX
        assert datagen.HUMIDITY_MIN <= r.humidity <= datagen.HUMIDITY_MAX
        assert 0 <= r.moisture <= datagen.MOISTURE_MAX


@pytest.mark.parametrize(
    "kwargs,text",
    [
        (dict(days=0), "days"),
        (dict(days=1, cadence_seconds=0.0), "cadence"),
        (dict(days=1, drop_rate=1.0), "drop_rate"),
        (dict(days=1, drop_rate=-0.1), "drop_rate"),
    ],
)
def test_config_validation(kwargs, text):
    with pytest.raises(ValueError, match=text):
        datagen.GenConfig(**kwargs)


def test_write_csv_empty_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    datagen.write_csv([], path)
    assert path.read_bytes() == b"mp,light,temperature,humidity,moisture,date,time\r\n"


def test_write_csv_single_record_field_order(tmp_path):
    record = datagen.SensorRecord("n1", 0.0, 24.7, 57.9, 1995, date(2022, 9, 15),
                                  time(0, 0, 4))
    path = tmp_path / "one.csv"
    datagen.write_csv([record], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1] == "n1,0.0,24.7,57.9,1995,2022-09-15,00:00:04"


def test_write_parse_round_trip(tmp_path):
    records = datagen.generate(datagen.GenConfig(days=1, cadence_seconds=150.0, seed=21))
    path = tmp_path / "raw.csv"
    datagen.write_csv(records, path)
    assert parse_sensor_csv(path) == records
