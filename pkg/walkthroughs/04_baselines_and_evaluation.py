# coding: utf-8

# # Vegetation-index baselines
#
# Simple empirical models scale a vegetation index by incoming PAR. They are
# the yardstick for the hybrid model.

import numpy as np

from hybridgpp import sampling
from hybridgpp.baselines import ViKind, compute_vi, fit_linear_vi, par_in, vi_gpp
from hybridgpp.forward import DEFAULT_METEO
from hybridgpp.forward.simulate import simulate_batch
from hybridgpp.metrics import metrics
from hybridgpp.spectral import band_convolve, load_sensor

s2 = load_sensor("sentinel2")
space = sampling.vegetation_space()
batch, _, _ = sampling.design_to_batch(space, sampling.lhs_sample(space, 200, 2))
out = simulate_batch(batch, vars(DEFAULT_METEO), 35.0, 35.0)
bands = [dict(zip(s2.band_ids, band_convolve(row, s2))) for row in out["toc_reflectance"]]

# Instantaneous GPP scaled to a day with a flat 3-hour profile stands in for
# a measured reference.

ref = out["gpp"] * 4 * 10800 * 12.011e-6
par = par_in(20.0)

for kind in ViKind:
    vi = np.array([compute_vi(b, kind) for b in bands])
    pred = np.array([vi_gpp(v, par, kind) for v in vi])
    rep = metrics(pred, ref)
    slope, intercept, r2 = fit_linear_vi(vi, ref)
    print(f"{kind.value:12s} published r2 {rep.r2:.2f} rmse {rep.rmse:5.2f} | refit {slope:6.2f}*vi"
          f"{intercept:+6.2f} r2 {r2:.2f}")
