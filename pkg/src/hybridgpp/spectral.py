"""Sensor band convolution, spectral-integral normalisation and MinMax scaling."""
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import CoverageError, DegenerateInputError
from .forward.grid import WL

# Sentinel-2 bands shared with Landsat 8 OLI
LANDSAT_COMMON = ("B2", "B3", "B4", "B8a", "B11", "B12")
_FINE_STEP = 1.0


@dataclass(frozen=True)
class Band:
    id: str
    center_nm: float
    fwhm_nm: float


@dataclass(frozen=True)
class SensorSpec:
    name: str
    bands: tuple
    is_subset: bool = False
    _matrix: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        centers = [b.center_nm for b in self.bands]
        if any(c2 <= c1 for c1, c2 in zip(centers, centers[1:])):
            raise ValueError(f"band centres of {self.name} must be strictly increasing")

    @property
    def band_ids(self):
        return tuple(b.id for b in self.bands)

    @property
    def n_bands(self):
        return len(self.bands)

    def subset(self, ids=LANDSAT_COMMON, name=None):
        keep = tuple(b for b in self.bands if b.id in ids)
        missing = set(ids) - {b.id for b in keep}
        if missing:
            raise KeyError(f"{self.name} lacks bands {sorted(missing)}")
        return SensorSpec(name or f"{self.name}_subset", keep, is_subset=True)

    def to_json(self):
        return {"name": self.name,
                "bands": [{"id": b.id, "center_nm": b.center_nm, "fwhm_nm": b.fwhm_nm} for b in self.bands]}

    @classmethod
    def from_json(cls, data):
        bands = tuple(Band(str(b["id"]), float(b["center_nm"]), float(b["fwhm_nm"])) for b in data["bands"])
        return cls(data["name"], bands, bool(data.get("subset", False)))


def load_sensor(name_or_path):
    """Load a sensor by packaged name (``sentinel2``, ``sentinel2_subset``, ``landsat8``) or JSON path."""
    p = Path(str(name_or_path))
    if p.suffix == ".json" and p.exists():
        return SensorSpec.from_json(json.loads(p.read_text()))
    name = str(name_or_path)
    if name.endswith("_subset"):
        return load_sensor(name[: -len("_subset")]).subset()
    ref = resources.files("hybridgpp.data.sensors") / f"{name}.json"
    if not ref.is_file():
        raise KeyError(f"unknown sensor {name!r}")
    return SensorSpec.from_json(json.loads(ref.read_text()))


def srf_matrix(sensor, wl=WL):
    """Linear map from a spectrum on ``wl`` to band values, shape (n_bands, len(wl)).

    Each row integrates a Gaussian SRF (truncated at +/- 2 FWHM) against the
    spectrum linearly interpolated onto a 1 nm grid.
    """
    wl = np.asarray(wl, dtype=float)
    rows = []
    for b in sensor.bands:
        lo, hi = b.center_nm - 2 * b.fwhm_nm, b.center_nm + 2 * b.fwhm_nm
        if lo < wl[0] or hi > wl[-1]:
            raise CoverageError(f"band {b.id} support [{lo}, {hi}] nm exceeds grid [{wl[0]}, {wl[-1]}] nm")
        fine = np.arange(np.ceil(lo), np.floor(hi) + _FINE_STEP / 2, _FINE_STEP)
        sigma = b.fwhm_nm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        srf = np.exp(-0.5 * ((fine - b.center_nm) / sigma) ** 2)
        srf /= srf.sum()
        # hat-function interpolation weights from grid nodes to fine points
        interp = np.clip(1.0 - np.abs(fine[:, None] - wl[None, :]) / np.diff(wl).mean(), 0.0, None)
        interp /= interp.sum(axis=1, keepdims=True)
        rows.append(srf @ interp)
    return np.array(rows)


def band_convolve(spectrum, sensor, wl=WL):
    """Band-averaged values of one spectrum ``(W,)`` or a batch ``(n, W)``."""
    m = srf_matrix(sensor, wl)
    values = np.asarray(getattr(spectrum, "values", spectrum), dtype=float)
    # elementwise product + row sums keep results independent of batch size
    return np.sum(values[..., None, :] * m, axis=-1)


def normalize_spectrum(bands):
    """Divide band values by their sum so they integrate to one."""
    x = np.asarray(bands, dtype=float)
    total = x.sum(axis=-1, keepdims=True)
    if np.any(total <= 0) or np.any(~np.isfinite(total)):
        raise DegenerateInputError("spectral normalisation needs a positive band sum")
    return x / total


@dataclass
class MinMaxScaler:
    min: np.ndarray
    max: np.ndarray

    @property
    def width(self):
        w = self.max - self.min
        return np.where(w > 0, w, 1.0)

    def to_json(self):
        return {"min": self.min.tolist(), "max": self.max.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(np.array(d["min"], dtype=float), np.array(d["max"], dtype=float))


def fit_minmax(rows):
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("fit_minmax needs at least two rows")
    return MinMaxScaler(x.min(axis=0), x.max(axis=0))


def apply_minmax(scaler, rows):
    """Affine map into the training range; degenerate features map to 0. No clipping."""
    x = np.asarray(rows, dtype=float)
    degenerate = scaler.max <= scaler.min
    return np.where(degenerate, 0.0, (x - scaler.min) / scaler.width)


def invert_minmax(scaler, rows):
    return np.asarray(rows, dtype=float) * (scaler.max - scaler.min) + scaler.min
