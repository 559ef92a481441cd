from datetime import date, datetime, timezone

import numpy as np
import pytest

from hybridgpp.errors import DomainError, MissingMeteoError, SensorMismatchError
from hybridgpp.ml import MlpModel
from hybridgpp.pipeline import (STEP_HOURS, DailyGppRecord, MeteoSeries, PixelObservation, aggregate_field,
                                aggregate_fields, daily_from_steps, predict_all, predict_daily, read_meteo_csv,
                                read_pixels_csv, synthetic_meteo, write_daily_csv, write_meteo_csv,
                                write_pixels_csv)

DAY = date(2021, 3, 20)
BANDS = ("B2", "B3", "B4", "B5", "B6", "B7", "B8", "B8a", "B11", "B12")


def const_model(value=10.0, sensor="sentinel2"):
    """A network whose output is ``value`` for any input."""
    params = np.zeros(18 + 1)
    params[-1] = value
    return MlpModel((18, 1), params, targets=("gpp",), n_bands=10, sensor_name=sensor, band_ids=BANDS)


def pixel(pid="p1", fid="f1", lat=0.0, lon=20.0, sensor="sentinel2"):
    t = datetime(2021, 3, 20, 10, 30, tzinfo=timezone.utc)
    return PixelObservation(pid, fid, lat, lon, t, sensor, {b: 0.1 + 0.02 * i for i, b in enumerate(BANDS)}, 30.0)


def flat_meteo(rin=500.0, day=DAY, skip=None):
    m = MeteoSeries()
    for h in STEP_HOURS:
        if h != skip:
            m.add(datetime(day.year, day.month, day.day, h, tzinfo=timezone.utc), rin=rin, rli=300, ta=20,
                  p=970, ea=15, u=2)
    return m


def test_night_gives_zero():
    rec = predict_daily(pixel(), flat_meteo(rin=0.0), const_model())
    assert rec.gpp_daily == 0.0 and rec.steps_used == 0


def test_unit_conversion():
    rec = predict_daily(pixel(), flat_meteo(), const_model(10.0))
    # at the equator on the equinox, 06-15 UTC at 20 E are the daylight steps
    assert rec.steps_used == 4
    assert rec.gpp_daily == pytest.approx(5.189, abs=1e-3)
    assert daily_from_steps([10.0] * 4) == pytest.approx(10 * 4 * 10800 * 12.011e-6)


def test_linearity():
    a = predict_daily(pixel(), flat_meteo(), const_model(3.0)).gpp_daily
    b = predict_daily(pixel(), flat_meteo(), const_model(6.0)).gpp_daily
    assert b == pytest.approx(2 * a)


def test_negative_predictions_clamped():
    rec = predict_daily(pixel(), flat_meteo(), const_model(-4.0))
    assert rec.gpp_daily == 0.0 and rec.steps_used == 4


def test_missing_step():
    with pytest.raises(MissingMeteoError):
        predict_daily(pixel(), flat_meteo(skip=12), const_model())


def test_sensor_mismatch():
    with pytest.raises(SensorMismatchError):
        predict_daily(pixel(sensor="landsat8"), flat_meteo(), const_model())


def test_observation_validation():
    with pytest.raises(DomainError):
        pixel(lat=95.0)
    with pytest.raises(DomainError):
        PixelObservation("p", "f", 0, 0, datetime(2021, 1, 1, tzinfo=timezone.utc), "s", {"B2": 1.5}, 30.0)


def test_aggregate_field():
    r = [DailyGppRecord("a", "f", DAY, {}, 2.0, 0), DailyGppRecord("b", "f", DAY, {}, 4.0, 0)]
    assert aggregate_field(r) == (3.0, 2)
    assert aggregate_field(r[::-1]) == (3.0, 2)
    assert aggregate_field(r[:1]) == (2.0, 1)
    with pytest.raises(ValueError):
        aggregate_field([])


def test_order_and_thread_independence():
    obs = [pixel(f"p{i}", f"f{i % 3}", lat=10.0 * i, lon=5.0 * i) for i in range(6)]
    met = flat_meteo()
    model = const_model(7.0)
    a = predict_all(obs, met, model)
    b = predict_all(obs[::-1], met, model, threads=4)
    assert [(r.pixel_id, r.gpp_daily) for r in a] == [(r.pixel_id, r.gpp_daily) for r in b]
    assert [r.field_id for r in a] == sorted(r.field_id for r in a)
    agg = aggregate_fields(a)
    assert set(agg) == {(f"f{i}", DAY) for i in range(3)}


def test_csv_round_trips(tmp_path, sentinel2):
    obs = [pixel("p1"), pixel("p2", "f2", lat=45.0)]
    write_pixels_csv(obs, tmp_path / "pixels.csv", sentinel2.band_ids)
    back = read_pixels_csv(tmp_path / "pixels.csv", sentinel2)
    for o, b in zip(obs, back):
        assert (b.pixel_id, b.field_id, b.lat, b.timestamp) == (o.pixel_id, o.field_id, o.lat, o.timestamp)
        assert b.bands == pytest.approx(o.bands, rel=1e-8)
    met = synthetic_meteo(DAY, lon=20.0, days=2)
    write_meteo_csv(met, tmp_path / "meteo.csv")
    read = read_meteo_csv(tmp_path / "meteo.csv").steps
    assert list(read) == list(met.steps)
    for t in met.steps:
        assert read[t] == pytest.approx(met.steps[t], rel=1e-8)
    recs = predict_all(back, met, const_model())
    write_daily_csv(recs, tmp_path / "daily.csv")
    lines = (tmp_path / "daily.csv").read_text().splitlines()
    assert lines[0].startswith("pixel_id,field_id,date,gpp_gc_m2_d,steps_used,gpp_step_00")
    assert len(lines) == 3


def test_pixels_csv_missing_band(tmp_path, sentinel2):
    write_pixels_csv([pixel()], tmp_path / "p.csv", sentinel2.band_ids[:-1])
    with pytest.raises(SensorMismatchError):
        read_pixels_csv(tmp_path / "p.csv", sentinel2)
