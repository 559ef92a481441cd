"""Simplified leaf-canopy-soil simulator producing reflectance and GPP."""
from .canopy import canopy_rt, canopy_rt_batch, sheet_fluxes
from .grid import WL, Spectrum, solar_spectrum
from .leaf import leaf_optics, leaf_optics_batch
from .params import (DEFAULT_METEO, DEFAULT_SZA, CanopyParams, Geometry, LeafParams, MeteoState,
                     SoilParams, VegetationScenario)
from .photosynthesis import collatz_rates, leaf_photosynthesis
from .simulate import SimRecord, simulate, simulate_batch, vcmax25_for, vcmax_from_cab
from .soil import soil_reflectance, soil_reflectance_batch

__all__ = [
    "WL", "Spectrum", "solar_spectrum", "LeafParams", "CanopyParams", "SoilParams", "MeteoState",
    "Geometry", "VegetationScenario", "DEFAULT_METEO", "DEFAULT_SZA", "leaf_optics",
    "leaf_optics_batch", "soil_reflectance", "soil_reflectance_batch", "canopy_rt",
    "canopy_rt_batch", "sheet_fluxes", "leaf_photosynthesis", "collatz_rates", "simulate",
    "simulate_batch", "SimRecord", "vcmax25_for", "vcmax_from_cab",
]
