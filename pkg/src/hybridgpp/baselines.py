"""Vegetation-index light-use-efficiency GPP models.

Band roles follow Sentinel-2: blue B2, green B3, red B4, red edge B5, NIR B8.
Each model takes ``x = VI * PAR_in`` with ``PAR_in`` 45 % of the daily
integrated shortwave irradiance in MJ m-2 d-1, and returns gC m-2 d-1.
"""
import json
from enum import Enum
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DegenerateInputError, DomainError

PAR_SHARE = 0.45
BAND_ROLES = {"blue": "B2", "green": "B3", "red": "B4", "red_edge": "B5", "nir": "B8"}


class ViKind(str, Enum):
    CI_RED_EDGE = "ci_red_edge"
    CI_GREEN = "ci_green"
    NDVI = "ndvi"
    GREEN_NDVI = "green_ndvi"
    EVI = "evi"
    RE_NDVI = "re_ndvi"


@lru_cache(maxsize=None)
def vi_config():
    return json.loads((resources.files("hybridgpp.data") / "vi_models.json").read_text())


def _band(bands, role):
    key = BAND_ROLES[role]
    if key not in bands:
        raise KeyError(f"band {key} ({role}) required")
    v = np.asarray(bands[key], dtype=float)
    if np.any(v < 0):
        raise DomainError(f"band {key} must be non-negative")
    return v


def _ratio(num, den):
    if np.any(den == 0):
        raise DegenerateInputError("vegetation index denominator is zero")
    return num / den


def compute_vi(bands, kind):
    """Evaluate a vegetation index on a mapping of band id -> reflectance."""
    kind = ViKind(kind)
    nir = _band(bands, "nir")
    if kind is ViKind.CI_RED_EDGE:
        return _ratio(nir, _band(bands, "red_edge")) - 1.0
    if kind is ViKind.CI_GREEN:
        return _ratio(nir, _band(bands, "green")) - 1.0
    if kind is ViKind.NDVI:
        red = _band(bands, "red")
        return _ratio(nir - red, nir + red)
    if kind is ViKind.GREEN_NDVI:
        # printed denominator (green + green) is a typo; standard form used
        green = _band(bands, "green")
        return _ratio(nir - green, nir + green)
    if kind is ViKind.EVI:
        red, blue = _band(bands, "red"), _band(bands, "blue")
        return 2.5 * _ratio(nir - red, nir + 6.0 * red - 7.5 * blue + 1.0)
    re = _band(bands, "red_edge")
    return _ratio(nir - re, nir + re)


def par_in(rin_daily_mj):
    """Incident PAR (MJ m-2 d-1) from daily integrated shortwave irradiance (MJ m-2 d-1)."""
    return PAR_SHARE * np.asarray(rin_daily_mj, dtype=float)


def vi_gpp_raw(vi_value, par, kind):
    """Daily GPP (gC m-2 d-1) before clamping; may be negative."""
    cfg = vi_config()["models"][ViKind(kind).value]
    x = np.asarray(vi_value, dtype=float) * np.asarray(par, dtype=float)
    if cfg["gpp"] == "log":
        if np.any(x <= 0):
            raise DomainError(f"{kind}: x = VI * PAR must be positive for the logarithmic model")
        return cfg["slope"] * np.log(x) + cfg["intercept"]
    return cfg["slope"] * x + cfg["intercept"]


def vi_gpp(vi_value, par, kind):
    """Daily GPP for reporting, clamped at zero."""
    return np.maximum(vi_gpp_raw(vi_value, par, kind), 0.0)


def fit_linear_vi(x, ref):
    """Ordinary least squares ``ref = slope * x + intercept``; returns (slope, intercept, r2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(ref, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise ValueError("fit_linear_vi needs at least three (x, reference) pairs")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise DegenerateInputError("x is constant; the linear fit is singular")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    syy = np.sum((y - ym) ** 2)
    r2 = 0.0 if syy == 0 else float(1.0 - np.sum((y - slope * x - intercept) ** 2) / syy)
    return float(slope), float(intercept), r2
