"""Input parameter containers for the forward simulator.

The scalar dataclasses validate on construction.  Batched code paths work on
plain dicts of equally shaped arrays keyed by the field names below.
"""
from dataclasses import dataclass, fields, asdict

import numpy as np

from ..errors import RangeError

# Allowed ranges (Table-1 ranges; cab accepts 0 so pigment-free leaves can be probed)
LEAF_RANGES = {
    "cab": (0.0, 90.0),
    "cca": (0.0, 40.0),
    "cant": (0.0, 40.0),
    "cdm": (0.0, 0.05),
    "cw": (0.0, 0.1),
    "cs": (0.0, 0.9),
    "n_struct": (1.0, 2.5),
}
CANOPY_RANGES = {
    "lai": (0.0, 9.0),
    "hc": (0.1, 2.0),
    "lidf_a": (-1.0, 1.0),
    "lidf_b": (-1.0, 1.0),
}
SOIL_RANGES = {
    "smc": (0.01, 0.7),
    "brightness": (0.01, 0.9),
    "lat_shape": (20.0, 40.0),
    "lon_shape": (45.0, 65.0),
}
METEO_RANGES = {
    "rin": (0.0, 1400.0),
    "rli": (0.0, 400.0),
    "ta": (-10.0, 50.0),
    "p": (500.0, 1030.0),
    "ea": (0.0, 125.0),
    "u": (0.0, 25.0),
}
SZA_RANGE = (0.0, 85.0)

SCENARIO_FIELDS = tuple(LEAF_RANGES) + tuple(CANOPY_RANGES) + tuple(SOIL_RANGES)
METEO_FIELDS = tuple(METEO_RANGES)

ALL_RANGES = {**LEAF_RANGES, **CANOPY_RANGES, **SOIL_RANGES, **METEO_RANGES}


def check_range(name, value, bounds=None, tol=1e-12):
    lo, hi = ALL_RANGES[name] if bounds is None else bounds
    arr = np.asarray(value, dtype=float)
    bad = ~((arr >= lo - tol) & (arr <= hi + tol))
    if np.any(bad):
        offending = arr[bad].flat[0] if arr.ndim else float(arr)
        raise RangeError(name, float(offending), lo, hi)


def _validate(obj, ranges):
    for f in fields(obj):
        if f.name in ranges:
            check_range(f.name, getattr(obj, f.name), ranges[f.name])


@dataclass(frozen=True)
class LeafParams:
    cab: float
    cca: float
    cant: float
    cdm: float
    cw: float
    cs: float
    n_struct: float

    def __post_init__(self):
        _validate(self, LEAF_RANGES)


@dataclass(frozen=True)
class CanopyParams:
    lai: float
    hc: float
    lidf_a: float
    lidf_b: float

    def __post_init__(self):
        _validate(self, CANOPY_RANGES)
        if abs(self.lidf_a) + abs(self.lidf_b) > 1.0 + 1e-12:
            raise RangeError("lidf_a+lidf_b", abs(self.lidf_a) + abs(self.lidf_b), 0.0, 1.0)


@dataclass(frozen=True)
class SoilParams:
    smc: float
    brightness: float
    lat_shape: float
    lon_shape: float

    def __post_init__(self):
        _validate(self, SOIL_RANGES)


@dataclass(frozen=True)
class MeteoState:
    rin: float
    rli: float
    ta: float
    p: float
    ea: float
    u: float

    def __post_init__(self):
        _validate(self, METEO_RANGES)


# meteorology used when only vegetation/soil parameters vary
DEFAULT_METEO = MeteoState(rin=600.0, rli=300.0, ta=20.0, p=970.0, ea=15.0, u=2.0)
DEFAULT_SZA = 30.0


@dataclass(frozen=True)
class Geometry:
    sza_obs: float
    sza_step: float
    vza: float = 0.0
    raa: float = 90.0

    def __post_init__(self):
        check_range("sza_obs", self.sza_obs, SZA_RANGE)
        check_range("sza_step", self.sza_step, SZA_RANGE)
        if self.vza != 0.0 or self.raa != 90.0:
            raise RangeError("vza/raa", (self.vza, self.raa), "nadir", "90")


@dataclass(frozen=True)
class VegetationScenario:
    leaf: LeafParams
    canopy: CanopyParams
    soil: SoilParams
    scenario_id: int | None = None

    def as_dict(self):
        return {**asdict(self.leaf), **asdict(self.canopy), **asdict(self.soil)}

    @classmethod
    def from_dict(cls, d, scenario_id=None):
        return cls(
            LeafParams(**{k: float(d[k]) for k in LEAF_RANGES}),
            CanopyParams(**{k: float(d[k]) for k in CANOPY_RANGES}),
            SoilParams(**{k: float(d[k]) for k in SOIL_RANGES}),
            scenario_id=scenario_id,
        )


def to_batch(items):
    """Stack dataclass instances (or dicts) into a dict of 1-D arrays."""
    dicts = [i.as_dict() if hasattr(i, "as_dict") else (i if isinstance(i, dict) else asdict(i)) for i in items]
    return {k: np.array([d[k] for d in dicts], dtype=float) for k in dicts[0]}


def validate_batch(batch, names):
    for name in names:
        check_range(name, batch[name])
    if "lidf_a" in names:
        s = np.abs(batch["lidf_a"]) + np.abs(batch["lidf_b"])
        if np.any(s > 1.0 + 1e-12):
            raise RangeError("lidf_a+lidf_b", float(s.max()), 0.0, 1.0)
