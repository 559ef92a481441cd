# coding: utf-8

# # The forward simulator
#
# One vegetation scenario goes in: leaf pigments, canopy structure, soil and
# the weather of a 3-hour step. Out come top-of-canopy reflectance, the
# fraction of absorbed PAR and the GPP of that step.

import numpy as np

from hybridgpp.forward import (DEFAULT_METEO, CanopyParams, Geometry, LeafParams, SoilParams, VegetationScenario, WL,
                               simulate)
from hybridgpp.spectral import band_convolve, load_sensor

leaf = LeafParams(cab=40, cca=10, cant=1, cdm=0.012, cw=0.009, cs=0.0, n_struct=1.5)
soil = SoilParams(smc=0.25, brightness=0.5, lat_shape=25.0, lon_shape=45.0)
geom = Geometry(sza_obs=35.0, sza_step=35.0)

# ## LAI sweep
#
# Red reflectance drops and NIR rises as leaves are added, fPAR saturates and
# GPP follows with diminishing returns.

red, nir = np.argmin(abs(WL - 670)), np.argmin(abs(WL - 865))
print(" lai   red    nir    fpar   gpp")
for lai in (0.0, 0.5, 1, 2, 4, 7):
    sc = VegetationScenario(leaf, CanopyParams(lai=lai, hc=1.0, lidf_a=-0.35, lidf_b=-0.15), soil)
    rec = simulate(sc, DEFAULT_METEO, geom)
    r = rec.toc_reflectance.values
    print(f"{lai:4.1f}  {r[red]:.3f}  {r[nir]:.3f}  {rec.fpar:.3f}  {rec.gpp:6.2f}")

# ## What a satellite sees
#
# The 10 nm spectrum is integrated against each band's response function.

s2 = load_sensor("sentinel2")
sc = VegetationScenario(leaf, CanopyParams(lai=3, hc=1.0, lidf_a=-0.35, lidf_b=-0.15), soil)
bands = band_convolve(simulate(sc, DEFAULT_METEO, geom).toc_reflectance.values, s2)
for band, value in zip(s2.band_ids, bands):
    print(f"{band:>4s} {value:.4f}")

# ## Chlorophyll and the light response
#
# At a fixed LAI, more chlorophyll means more absorbed PAR and (with Vcmax
# tied to Cab) a higher light-saturated rate.

for cab in (15, 40, 80):
    lp = LeafParams(cab=cab, cca=cab / 4, cant=1, cdm=0.012, cw=0.009, cs=0.0, n_struct=1.5)
    sc = VegetationScenario(lp, CanopyParams(lai=3, hc=1.0, lidf_a=-0.35, lidf_b=-0.15), soil)
    rec = simulate(sc, DEFAULT_METEO, geom)
    print(f"cab {cab:2d}: fpar_cab {rec.fpar_cab:.3f}  vcmax25 {rec.vcmax25:5.1f}  gpp {rec.gpp:5.2f}")
