"""Feature layouts shared by training and inference.

``case2`` (direct GPP): bands, sza_obs, sza_step, rin, rli, ta, p, ea, u.
``case1`` (canopy variables from reflectance): bands, sza_obs.
Band columns are raw reflectance; models normalise them to unit sum.
"""
import numpy as np

from ..forward.params import METEO_FIELDS

LAYOUTS = ("case2", "case1")


def feature_names(band_ids, layout="case2"):
    bands = [f"band_{b}" for b in band_ids]
    if layout == "case2":
        return bands + ["sza_obs", "sza_step", *METEO_FIELDS]
    if layout == "case1":
        return bands + ["sza_obs"]
    raise ValueError(f"unknown feature layout {layout!r}")


def n_features(n_bands, layout="case2"):
    return n_bands + (8 if layout == "case2" else 1)


def raw_features(ts, layout="case2"):
    """Stack a TrainingSet's columns in the given layout."""
    cols = [ts.bands, ts.sza_obs[:, None]]
    if layout == "case2":
        cols += [ts.sza_step[:, None]] + [ts.meteo[m][:, None] for m in METEO_FIELDS]
    elif layout != "case1":
        raise ValueError(f"unknown feature layout {layout!r}")
    return np.hstack(cols)


def targets(ts, names):
    return np.column_stack([ts.target(n) for n in names])
