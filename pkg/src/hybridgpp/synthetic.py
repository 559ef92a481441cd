"""Synthetic pixels and simulator-truth daily GPP for end-to-end checks."""
from datetime import datetime, timezone

import numpy as np

from .forward.params import METEO_FIELDS, SCENARIO_FIELDS
from .forward.simulate import simulate_batch
from .pipeline import PixelObservation, daily_from_steps
from .sampling import SZA_STEP_RANGE
from .solar import solar_zenith
from .spectral import band_convolve


def synthetic_pixels(batch, sensor, lat, lon, timestamp, field_ids=None, prefix="px"):
    """One observation per scenario row of ``batch``, all at the same site and time."""
    n = np.asarray(batch["lai"]).shape[0]
    sza = min(solar_zenith(lat, lon, timestamp), SZA_STEP_RANGE[1])
    out = simulate_batch(batch, {"rin": 600.0, "ta": 20.0}, np.full(n, sza), np.full(n, sza))
    bands = np.clip(band_convolve(out["toc_reflectance"], sensor), 0.0, 1.0)
    field_ids = field_ids if field_ids is not None else ["f0"] * n
    return [PixelObservation(f"{prefix}{i:04d}", field_ids[i], lat, lon, timestamp, sensor.name,
                             dict(zip(sensor.band_ids, map(float, bands[i]))), sza) for i in range(n)]


def reference_daily(batch, meteo, lat, lon, day):
    """Daily GPP (gC m-2 d-1) from the simulator itself for each scenario row."""
    n = np.asarray(batch["lai"]).shape[0]
    steps = []
    for t, m in meteo.for_date(day):
        sza = solar_zenith(lat, lon, t)
        if m["rin"] <= 0 or sza >= 90.0:
            continue
        met = {k: np.full(n, m[k]) for k in METEO_FIELDS}
        sza = np.full(n, min(sza, SZA_STEP_RANGE[1]))
        steps.append(simulate_batch(batch, met, sza, sza, reflectance=False)["gpp"])
    if not steps:
        return np.zeros(n)
    return np.array([daily_from_steps(col) for col in np.column_stack(steps)])


def bare_soil_batch(n, seed=0):
    """Scenario rows with no vegetation over varied soils."""
    rng = np.random.default_rng(seed)
    b = {k: np.zeros(n) for k in SCENARIO_FIELDS}
    b.update(cab=np.full(n, 40.0), n_struct=np.full(n, 1.5), hc=np.full(n, 1.0), lai=np.zeros(n),
             smc=rng.uniform(0.01, 0.7, n), brightness=rng.uniform(0.01, 0.9, n),
             lat_shape=rng.uniform(20, 40, n), lon_shape=rng.uniform(45, 65, n))
    b["vcmax25"] = np.full(n, 73.8)
    return b


def noon_utc(day, lon):
    """Nearest whole-hour UTC timestamp to local solar noon."""
    hour = int(round(12.0 - lon / 15.0)) % 24
    return datetime(day.year, day.month, day.day, hour, tzinfo=timezone.utc)
