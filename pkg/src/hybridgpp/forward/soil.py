"""Soil reflectance: brightness x spectral shape x moisture darkening.

The shape rises monotonically from ``v0`` at 400 nm to 1 at 2400 nm as
``s(x) = 1 - (1 - v0) (1 - x)**q`` with ``x`` the relative position on the
grid.  ``lat_shape`` sets the curvature ``q``; ``lon_shape`` sets the target
mean level, and ``v0`` is solved so the mean of ``s`` is exactly that level.
Changing ``lat_shape`` therefore redistributes energy between the visible
and SWIR without moving the spectral integral.
"""
import numpy as np

from .grid import WL, Spectrum
from .params import SOIL_RANGES, SoilParams, check_range

MOISTURE_DARKENING = 0.7


def shape_params(lat_shape, lon_shape):
    q = 1.0 + 1.2 * (np.asarray(lat_shape, dtype=float) - 20.0) / 20.0
    level = 0.70 + 0.10 * (np.asarray(lon_shape, dtype=float) - 45.0) / 20.0
    v0 = 1.0 - (1.0 - level) * (q + 1.0)
    return q, v0


def soil_shape(lat_shape, lon_shape):
    q, v0 = shape_params(lat_shape, lon_shape)
    x = (WL - WL[0]) / (WL[-1] - WL[0])
    q = np.asarray(q)[..., None]
    v0 = np.asarray(v0)[..., None]
    return 1.0 - (1.0 - v0) * (1.0 - x) ** q


def soil_reflectance_batch(soil):
    shape = soil_shape(soil["lat_shape"], soil["lon_shape"])
    scale = np.asarray(soil["brightness"], dtype=float) * (1.0 - MOISTURE_DARKENING * np.asarray(soil["smc"], dtype=float))
    return scale[..., None] * shape


def soil_reflectance(soil: SoilParams) -> Spectrum:
    for name, bounds in SOIL_RANGES.items():
        check_range(name, getattr(soil, name), bounds)
    batch = {name: np.array([getattr(soil, name)]) for name in SOIL_RANGES}
    return Spectrum(WL, soil_reflectance_batch(batch)[0])
