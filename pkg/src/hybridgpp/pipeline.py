"""Daily GPP inference from one reflectance observation plus 3-hourly meteorology."""
import csv
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone

import numpy as np

from .errors import DomainError, MissingMeteoError, SensorMismatchError
from .forward.params import METEO_FIELDS
from .ml.io import model_targets, predict
from .sampling import SZA_STEP_RANGE, fmt
from .solar import parse_utc, solar_zenith

STEP_SECONDS = 10800.0
GC_PER_UMOL = 12.011e-6
STEP_HOURS = tuple(range(0, 24, 3))
METEO_CSV_COLUMNS = ("timestamp_utc", "rin_wm2", "rli_wm2", "ta_c", "p_hpa", "ea_hpa", "u_ms")


@dataclass(frozen=True)
class PixelObservation:
    pixel_id: str
    field_id: str
    lat: float
    lon: float
    timestamp: datetime
    sensor: str
    bands: dict
    sza_obs: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise DomainError(f"pixel {self.pixel_id}: latitude {self.lat} outside [-90, 90]")
        for k, v in self.bands.items():
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"pixel {self.pixel_id}: reflectance {k}={v} outside [0, 1]")

    @property
    def date(self):
        return self.timestamp.astimezone(timezone.utc).date()


@dataclass
class MeteoSeries:
    """3-hourly forcing keyed by UTC timestamp; values in MeteoState units."""

    steps: dict = field(default_factory=dict)

    def add(self, timestamp, **values):
        self.steps[timestamp.astimezone(timezone.utc)] = {k: float(values[k]) for k in METEO_FIELDS}

    def for_date(self, day):
        out = []
        for h in STEP_HOURS:
            t = datetime(day.year, day.month, day.day, h, tzinfo=timezone.utc)
            if t not in self.steps:
                raise MissingMeteoError(f"no meteorology for {t.isoformat()}")
            out.append((t, self.steps[t]))
        return out


@dataclass
class DailyGppRecord:
    pixel_id: str
    field_id: str
    date: date
    step_gpp: dict
    gpp_daily: float
    steps_used: int


def daily_from_steps(step_gpp):
    """Integrate instantaneous GPP (umol m-2 s-1) over 3-h steps to gC m-2 d-1."""
    return float(sum(step_gpp) * STEP_SECONDS * GC_PER_UMOL)


def _check_sensor(obs, model):
    if model.sensor_name and obs.sensor != model.sensor_name:
        raise SensorMismatchError(f"pixel {obs.pixel_id} observed by {obs.sensor!r}, model expects "
                                  f"{model.sensor_name!r}")
    missing = [b for b in model.band_ids if b not in obs.bands]
    if missing:
        raise SensorMismatchError(f"pixel {obs.pixel_id} lacks bands {missing}")
    if model.layout != "case2":
        raise ValueError("daily GPP needs a model with the direct-GPP feature layout")
    if "gpp" not in model_targets(model):
        raise ValueError("model does not predict gpp")


def predict_daily(obs, meteo, model):
    """Daily GPP record for one pixel on its observation date.

    Steps with rin > 0 and the sun above the horizon are predicted; step
    zenith angles beyond the training range are clipped to its upper end.
    """
    _check_sensor(obs, model)
    day = obs.date
    steps = meteo.for_date(day)
    bands = [obs.bands[b] for b in model.band_ids]
    rows, hours = [], []
    for t, m in steps:
        if m["rin"] <= 0:
            continue
        sza = solar_zenith(obs.lat, obs.lon, t)
        if sza >= 90.0:
            continue
        rows.append(bands + [obs.sza_obs, min(sza, SZA_STEP_RANGE[1])] + [m[k] for k in METEO_FIELDS])
        hours.append(t.hour)
    step_gpp = {}
    if rows:
        j = model_targets(model).index("gpp")
        pred = predict(model, np.asarray(rows, dtype=float))[:, j]
        step_gpp = {h: float(max(p, 0.0)) for h, p in zip(hours, pred)}
    return DailyGppRecord(obs.pixel_id, obs.field_id, day, step_gpp, daily_from_steps(step_gpp.values()),
                          len(step_gpp))


def predict_all(observations, meteo, model, threads=1):
    """Records ordered by (field, pixel, date); identical for any thread count."""
    def one(obs):
        return predict_daily(obs, meteo, model)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, observations))
    else:
        records = [one(o) for o in observations]
    return sorted(records, key=lambda r: (r.field_id, r.pixel_id, r.date))


def aggregate_field(records):
    """Mean daily GPP over the pixels of one field and date; returns (mean, n_pixels)."""
    records = list(records)
    if not records:
        raise ValueError("aggregate_field needs at least one record")
    vals = sorted(r.gpp_daily for r in records)
    return float(np.mean(vals)), len(vals)


def aggregate_fields(records):
    """{(field_id, date): (mean, n_pixels)} over all records."""
    groups = defaultdict(list)
    for r in records:
        groups[(r.field_id, r.date)].append(r)
    return {k: aggregate_field(v) for k, v in sorted(groups.items())}


# CSV I/O

def read_pixels_csv(path, sensor):
    """Pixel observations; ``sensor`` is a SensorSpec whose band columns must be present."""
    out = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        cols = [f"band_{b}" for b in sensor.band_ids]
        missing = [c for c in cols if c not in (reader.fieldnames or [])]
        if missing:
            raise SensorMismatchError(f"{path}: columns {missing} required for sensor {sensor.name}")
        for row in reader:
            out.append(PixelObservation(
                row["pixel_id"], row["field_id"], float(row["lat"]), float(row["lon"]),
                parse_utc(row["timestamp_utc"]), sensor.name,
                {b: float(row[f"band_{b}"]) for b in sensor.band_ids}, float(row["sza_obs_deg"])))
    return out


def write_pixels_csv(observations, path, band_ids):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pixel_id", "field_id", "lat", "lon", "timestamp_utc", "sza_obs_deg",
                    *[f"band_{b}" for b in band_ids]])
        for o in observations:
            w.writerow([o.pixel_id, o.field_id, fmt(o.lat), fmt(o.lon),
                        o.timestamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"), fmt(o.sza_obs),
                        *[fmt(o.bands[b]) for b in band_ids]])


def read_meteo_csv(path):
    series = MeteoSeries()
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            vals = [float(row[c]) for c in METEO_CSV_COLUMNS[1:]]
            series.add(parse_utc(row["timestamp_utc"]), **dict(zip(METEO_FIELDS, vals)))
    return series


def write_meteo_csv(series, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(METEO_CSV_COLUMNS)
        for t in sorted(series.steps):
            m = series.steps[t]
            w.writerow([t.strftime("%Y-%m-%dT%H:%M:%SZ"), *[fmt(m[k]) for k in METEO_FIELDS]])


def synthetic_meteo(day, peak_rin=800.0, lon=0.0, ta=20.0, days=1):
    """Clear-sky-like diurnal forcing for ``days`` days starting at ``day``."""
    series = MeteoSeries()
    for d in range(days):
        cur = day + timedelta(days=d)
        for h in STEP_HOURS:
            t = datetime(cur.year, cur.month, cur.day, h, tzinfo=timezone.utc)
            local = (h + lon / 15.0) % 24.0
            rin = max(0.0, peak_rin * np.cos(np.pi * (local - 12.0) / 14.0))
            series.add(t, rin=rin, rli=300.0, ta=ta, p=970.0, ea=15.0, u=2.0)
    return series


def write_daily_csv(records, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pixel_id", "field_id", "date", "gpp_gc_m2_d", "steps_used",
                    *[f"gpp_step_{h:02d}" for h in STEP_HOURS]])
        for r in records:
            w.writerow([r.pixel_id, r.field_id, r.date.isoformat(), fmt(r.gpp_daily), r.steps_used,
                        *[fmt(r.step_gpp[h]) if h in r.step_gpp else "" for h in STEP_HOURS]])


def write_field_csv(aggregates, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["field_id", "date", "gpp_gc_m2_d", "n_pixels"])
        for (fid, day), (mean, n) in aggregates.items():
            w.writerow([fid, day.isoformat(), fmt(mean), n])
