from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from hybridgpp.solar import parse_utc, solar_zenith
from oracles import meeus_zenith_deg


def min_zenith(lat, lon, day):
    start = datetime(day.year, day.month, day.day, 10, tzinfo=timezone.utc)
    return min(solar_zenith(lat, lon, start + timedelta(minutes=m)) for m in range(0, 240))


def test_equinox_equator():
    assert solar_zenith(0.0, 0.0, datetime(2021, 3, 20, 12, 7, tzinfo=timezone.utc)) < 2.0


def test_midnight():
    assert solar_zenith(51.0, 10.0, datetime(2021, 6, 1, 23, 20, tzinfo=timezone.utc)) > 90.0


def test_solstice_45n():
    assert min_zenith(45.0, 0.0, datetime(2021, 6, 21)) == pytest.approx(45.0 - 23.44, abs=0.5)


def test_against_higher_order_oracle():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(300):
        t = datetime(2015, 1, 1, tzinfo=timezone.utc) + timedelta(minutes=int(rng.integers(0, 10 * 365 * 1440)))
        lat, lon = rng.uniform(-70, 70), rng.uniform(-180, 180)
        ref = meeus_zenith_deg(lat, lon, t.year, t.month, t.day, t.hour + t.minute / 60)
        worst = max(worst, abs(solar_zenith(lat, lon, t) - ref))
    assert worst < 0.1


def test_range_and_naive_timestamps():
    t = datetime(2021, 9, 1, 6)
    assert solar_zenith(10.0, 20.0, t) == solar_zenith(10.0, 20.0, t.replace(tzinfo=timezone.utc))
    for h in range(24):
        assert 0 <= solar_zenith(-60.0, 170.0, t.replace(hour=h)) <= 180


def test_parse_utc():
    assert parse_utc("2021-06-01T10:30:00Z") == datetime(2021, 6, 1, 10, 30, tzinfo=timezone.utc)
    assert parse_utc("2021-06-01T12:30:00+02:00").hour == 10
