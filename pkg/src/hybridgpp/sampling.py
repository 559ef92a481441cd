"""Synthetic training corpus: Latin hypercube designs, LIDF re-parameterisation,
SZA re-runs and low-LAI augmentation."""
import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .forward.params import DEFAULT_METEO, DEFAULT_SZA, METEO_FIELDS, SCENARIO_FIELDS, VegetationScenario
from .forward.simulate import simulate_batch, vcmax25_for
from .spectral import band_convolve

log = logging.getLogger(__name__)

LOW_LAI = 0.001
SZA_STEP_RANGE = (0.0, 85.0)
CHUNK_ROWS = 1024


@dataclass(frozen=True)
class ParameterSpace:
    """Ordered uniform ranges; ``names[i]`` spans ``[lows[i], highs[i]]``."""

    names: tuple
    lows: tuple
    highs: tuple

    def __post_init__(self):
        if not (len(self.names) == len(self.lows) == len(self.highs)):
            raise ValueError("names, lows and highs must have equal length")
        for n, lo, hi in zip(self.names, self.lows, self.highs):
            if not lo < hi:
                raise ValueError(f"{n}: min {lo} must be below max {hi}")

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def bounds(self, name):
        i = self.index(name)
        return self.lows[i], self.highs[i]

    def subspace(self, names):
        return ParameterSpace(tuple(names), tuple(self.bounds(n)[0] for n in names),
                              tuple(self.bounds(n)[1] for n in names))

    @classmethod
    def from_entries(cls, entries):
        names, lows, highs = zip(*[(str(n), float(lo), float(hi)) for n, lo, hi in entries])
        return cls(names, lows, highs)

    @classmethod
    def from_json(cls, path):
        data = json.loads(Path(path).read_text())
        return cls.from_entries([(e["name"], e["min"], e["max"]) for e in data["parameters"]])

    def to_json(self):
        return {"parameters": [{"name": n, "min": lo, "max": hi, "distribution": "uniform"}
                               for n, lo, hi in zip(self.names, self.lows, self.highs)]}


_TABLE1 = [
    ("cab", 11.0, 90.0), ("cca", 0.0, 40.0), ("cant", 0.0, 40.0), ("cdm", 0.0, 0.05),
    ("cw", 0.0, 0.1), ("cs", 0.0, 0.9), ("n_struct", 1.0, 2.5),
    ("lai", 0.0, 9.0), ("hc", 0.1, 2.0), ("lidf_sum", -1.0, 1.0), ("lidf_diff", -1.0, 1.0),
    ("smc", 0.01, 0.7), ("brightness", 0.01, 0.9), ("lat_shape", 20.0, 40.0), ("lon_shape", 45.0, 65.0),
    ("sza_obs", 0.0, 85.0),
    ("rin", 0.0, 1400.0), ("rli", 0.0, 400.0), ("ta", -10.0, 50.0), ("p", 500.0, 1030.0),
    ("ea", 0.0, 125.0), ("u", 0.0, 25.0),
]
VEGETATION_NAMES = tuple(n for n, _, _ in _TABLE1[:15])


def default_space():
    """The 22-dimensional training space."""
    return ParameterSpace.from_entries(_TABLE1)


def vegetation_space():
    """The 15 leaf, canopy and soil parameters."""
    return default_space().subspace(VEGETATION_NAMES)


def lhs_sample(space, n, seed):
    """Latin hypercube sample: one point per equal-width stratum in every dimension."""
    if n < 1:
        raise ValueError("lhs_sample needs n >= 1")
    rng = np.random.default_rng(seed)
    d = space.dim
    u = np.empty((n, d))
    for j in range(d):
        u[:, j] = (rng.permutation(n) + rng.random(n)) / n
    lo = np.asarray(space.lows)
    hi = np.asarray(space.highs)
    return lo + u * (hi - lo)


def lidf_from_sum_diff(lidf_sum, lidf_diff):
    s = np.asarray(lidf_sum, dtype=float)
    d = np.asarray(lidf_diff, dtype=float)
    a = (s + d) / 2.0
    b = (s - d) / 2.0
    total = np.abs(a) + np.abs(b)
    scale = np.where(total > 1.0, 1.0 / np.where(total > 0, total, 1.0), 1.0)
    return a * scale, b * scale


def design_to_batch(space, x, vcmax_mode="cab-coupled"):
    """Turn a design matrix into a simulator batch.

    Missing meteorology and ``sza_obs`` columns fall back to the default
    conditions (600 W m-2, 20 degC, SZA 30 deg, ...).
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    cols = {name: x[:, i] for i, name in enumerate(space.names)}
    n = x.shape[0]
    batch = {}
    for name in SCENARIO_FIELDS:
        if name in ("lidf_a", "lidf_b"):
            continue
        batch[name] = cols[name].copy()
    batch["lidf_a"], batch["lidf_b"] = lidf_from_sum_diff(cols["lidf_sum"], cols["lidf_diff"])
    batch["vcmax25"] = vcmax25_for(batch["cab"], vcmax_mode)
    meteo = {m: cols.get(m, np.full(n, getattr(DEFAULT_METEO, m))) for m in METEO_FIELDS}
    sza_obs = cols.get("sza_obs", np.full(n, DEFAULT_SZA))
    return batch, meteo, sza_obs


def build_scenarios(space, n, seed, vcmax_mode="cab-coupled"):
    """Sample ``n`` scenarios; returns ``(scenarios, vcmax25)``."""
    batch, _, _ = design_to_batch(space, lhs_sample(space, n, seed), vcmax_mode)
    scenarios = [VegetationScenario.from_dict({k: batch[k][i] for k in SCENARIO_FIELDS}, scenario_id=i)
                 for i in range(n)]
    return scenarios, batch["vcmax25"]


def row_sza_step(seed, row_ids, stream=0):
    """Per-row modelling-step SZA from an independent stream per row id."""
    lo, hi = SZA_STEP_RANGE
    return np.array([np.random.default_rng([seed, stream, int(i)]).uniform(lo, hi) for i in row_ids])


def _take(d, idx):
    return {k: np.asarray(v)[idx] for k, v in d.items()}


@dataclass
class TrainingSet:
    """Column-oriented training rows plus the diagnostics table.

    ``bands`` holds raw band reflectance (spectral normalisation happens at
    feature-building time).  Rows are ordered by ``scenario_id``.
    """

    sensor_name: str
    band_ids: tuple
    bands: np.ndarray
    sza_obs: np.ndarray
    sza_step: np.ndarray
    meteo: dict
    gpp: np.ndarray
    lai: np.ndarray
    aug_flag: np.ndarray
    scenario_id: np.ndarray
    diagnostics: dict
    n_failed: int = 0
    params: dict = field(default_factory=dict)

    def __len__(self):
        return self.gpp.shape[0]

    def subset(self, idx):
        idx = np.asarray(idx)
        return TrainingSet(self.sensor_name, self.band_ids, self.bands[idx], self.sza_obs[idx],
                           self.sza_step[idx], _take(self.meteo, idx), self.gpp[idx], self.lai[idx],
                           self.aug_flag[idx], self.scenario_id[idx], _take(self.diagnostics, idx),
                           self.n_failed, _take(self.params, idx) if self.params else {})

    def target(self, name):
        if name == "gpp":
            return self.gpp
        if name == "lai":
            return self.lai
        if name in self.diagnostics:
            return self.diagnostics[name]
        if name in self.params:
            return self.params[name]
        raise KeyError(f"unknown target {name!r}")


DIAGNOSTIC_COLUMNS = ("apar", "apar_cab", "ccc", "gpp", "fpar", "fpar_cab", "fpar_obs", "fpar_cab_obs")


def _simulate_chunk(args):
    batch, meteo, sza_obs, sza_step, sensor = args
    out = simulate_batch(batch, meteo, sza_obs, sza_step)
    out["bands"] = band_convolve(out.pop("toc_reflectance"), sensor)
    return out


def generate_training_set(space, n_main, n_lowlai, seed, sensor, vcmax_mode="cab-coupled", threads=1):
    """Simulate the training corpus.

    Main rows take reflectance and meteorology from the observation geometry
    and the GPP target from a re-run at an independent ``sza_step``.  The
    ``n_lowlai`` augmentation rows use LAI = 0.001 with the GPP target forced
    to zero.  Rows whose simulation is not finite are dropped and counted in
    ``n_failed``.
    """
    parts = []
    if n_main > 0:
        x = lhs_sample(space, n_main, seed)
        ids = np.arange(n_main)
        parts.append((x, ids, row_sza_step(seed, ids, stream=0), False))
    if n_lowlai > 0:
        x = lhs_sample(space, n_lowlai, np.random.SeedSequence([seed, 1]).generate_state(1)[0])
        ids = np.arange(n_main, n_main + n_lowlai)
        parts.append((x, ids, row_sza_step(seed, ids, stream=1), True))
    if not parts:
        raise ValueError("nothing to generate: n_main and n_lowlai are both zero")

    jobs, meta = [], []
    for x, ids, step, aug in parts:
        batch, meteo, sza_obs = design_to_batch(space, x, vcmax_mode)
        if aug:
            batch["lai"] = np.full_like(batch["lai"], LOW_LAI)
        for start in range(0, len(ids), CHUNK_ROWS):
            sl = slice(start, start + CHUNK_ROWS)
            jobs.append((_take(batch, sl), _take(meteo, sl), sza_obs[sl], step[sl], sensor))
            meta.append((ids[sl], aug, _take(batch, sl), _take(meteo, sl), sza_obs[sl], step[sl]))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_simulate_chunk, jobs))
    else:
        results = [_simulate_chunk(j) for j in jobs]

    cols = {k: [] for k in ("bands", "sza_obs", "sza_step", "gpp", "lai", "aug", "ids")}
    meteo_cols = {m: [] for m in METEO_FIELDS}
    diag = {k: [] for k in DIAGNOSTIC_COLUMNS}
    params = {k: [] for k in SCENARIO_FIELDS + ("vcmax25",)}
    n_failed = 0
    for out, (ids, aug, batch, meteo, sza_obs, step) in zip(results, meta):
        ok = out["ok"] & np.isfinite(out["bands"]).all(axis=1)
        n_failed += int((~ok).sum())
        gpp = np.zeros(ok.sum()) if aug else out["gpp"][ok]
        cols["bands"].append(out["bands"][ok])
        cols["sza_obs"].append(sza_obs[ok])
        cols["sza_step"].append(step[ok])
        cols["gpp"].append(gpp)
        cols["lai"].append(batch["lai"][ok])
        cols["aug"].append(np.full(ok.sum(), aug))
        cols["ids"].append(ids[ok])
        for m in METEO_FIELDS:
            meteo_cols[m].append(np.broadcast_to(meteo[m], ok.shape)[ok])
        for k in DIAGNOSTIC_COLUMNS:
            diag[k].append(gpp if k == "gpp" else out[k][ok])
        for k in params:
            params[k].append(batch[k][ok])
    if n_failed:
        log.warning("%d simulations failed and were excluded", n_failed)

    cat = {k: np.concatenate(v) for k, v in cols.items()}
    return TrainingSet(
        sensor_name=sensor.name,
        band_ids=sensor.band_ids,
        bands=cat["bands"],
        sza_obs=cat["sza_obs"],
        sza_step=cat["sza_step"],
        meteo={m: np.concatenate(v) for m, v in meteo_cols.items()},
        gpp=cat["gpp"],
        lai=cat["lai"],
        aug_flag=cat["aug"],
        scenario_id=cat["ids"],
        diagnostics={k: np.concatenate(v) for k, v in diag.items()},
        n_failed=n_failed,
        params={k: np.concatenate(v) for k, v in params.items()},
    )


def fmt(x):
    return format(float(x), ".9g")


def training_columns(band_ids):
    return [f"band_{b}" for b in band_ids] + ["sza_obs", "sza_step", *METEO_FIELDS, "gpp", "lai", "aug_flag"]


def write_training_csv(ts, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(training_columns(ts.band_ids))
        for i in range(len(ts)):
            w.writerow([fmt(v) for v in ts.bands[i]]
                       + [fmt(ts.sza_obs[i]), fmt(ts.sza_step[i])]
                       + [fmt(ts.meteo[m][i]) for m in METEO_FIELDS]
                       + [fmt(ts.gpp[i]), fmt(ts.lai[i]), str(int(ts.aug_flag[i]))])


def write_diagnostics_csv(ts, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scenario_id", *DIAGNOSTIC_COLUMNS])
        for i in range(len(ts)):
            w.writerow([str(int(ts.scenario_id[i]))] + [fmt(ts.diagnostics[k][i]) for k in DIAGNOSTIC_COLUMNS])


def read_training_csv(path, diagnostics_path=None, sensor_name=None):
    """Read a training CSV (and optionally its diagnostics CSV) back into a TrainingSet."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float) if body else np.empty((0, len(header)))
    col = {h: data[:, i] for i, h in enumerate(header)}
    band_ids = tuple(h[len("band_"):] for h in header if h.startswith("band_"))
    diag = {}
    ids = np.arange(len(body))
    if diagnostics_path is not None:
        with open(diagnostics_path, newline="") as fh:
            drows = list(csv.reader(fh))
        d = np.array(drows[1:], dtype=float)
        for i, h in enumerate(drows[0]):
            if h == "scenario_id":
                ids = d[:, i].astype(int)
            else:
                diag[h] = d[:, i]
    return TrainingSet(
        sensor_name=sensor_name or "",
        band_ids=band_ids,
        bands=np.column_stack([col[f"band_{b}"] for b in band_ids]),
        sza_obs=col["sza_obs"],
        sza_step=col["sza_step"],
        meteo={m: col[m] for m in METEO_FIELDS},
        gpp=col["gpp"],
        lai=col["lai"],
        aug_flag=col["aug_flag"].astype(bool),
        scenario_id=ids,
        diagnostics=diag,
    )
