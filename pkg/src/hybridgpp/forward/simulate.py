"""Composition of leaf optics, canopy RT and leaf photosynthesis into canopy GPP."""
from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from .canopy import N_LAYERS, PAR_WEIGHTS, layer_par, par_fraction, sheet_fluxes
from .grid import PAR_MASK, PAR_UMOL_PER_J, WL, Spectrum
from .leaf import leaf_optics_batch
from .params import (METEO_FIELDS, SCENARIO_FIELDS, Geometry, MeteoState, VegetationScenario,
                     check_range, validate_batch)
from .photosynthesis import leaf_photosynthesis
from .soil import soil_reflectance_batch

VCMAX_MODES = ("constant-100", "cab-coupled")
VCMAX_CONSTANT = 100.0


def vcmax_from_cab(cab):
    """Vcmax25 from leaf chlorophyll (Houborg et al. 2013), clamped at zero."""
    return np.maximum(2.5294 * np.asarray(cab, dtype=float) - 27.34, 0.0)


def vcmax25_for(cab, mode):
    if mode == "constant-100":
        return np.full(np.shape(cab), VCMAX_CONSTANT)
    if mode == "cab-coupled":
        return vcmax_from_cab(cab)
    raise ValueError(f"unknown vcmax mode {mode!r}; expected one of {VCMAX_MODES}")


@dataclass
class SimRecord:
    scenario: VegetationScenario
    meteo: MeteoState
    geom: Geometry
    vcmax25: float
    toc_reflectance: Spectrum
    gpp: float
    fpar: float
    fpar_cab: float
    apar: float
    apar_cab: float
    ccc: float
    fpar_obs: float
    fpar_cab_obs: float


_PAR_IDX = np.flatnonzero(PAR_MASK)


def _photosynthesis_run(refl, trans, share, soil, batch, sza, rin, ta, vcmax25, n_layers):
    """PAR-only canopy solve at ``sza`` and the resulting canopy GPP."""
    w = PAR_WEIGHTS[_PAR_IDX]
    fl = sheet_fluxes(refl[:, _PAR_IDX], trans[:, _PAR_IDX], soil[:, _PAR_IDX],
                      batch["lai"], batch["lidf_a"], batch["lidf_b"], sza, n_layers, wl=WL[_PAR_IDX])
    leaf_abs = fl.abs_direct + fl.abs_diffuse
    fpar = par_fraction(leaf_abs.sum(axis=1), w)
    fpar_cab = par_fraction((leaf_abs * share[:, None, _PAR_IDX]).sum(axis=1), w)
    par_in = rin * np.sum(w)  # W m-2
    sun, shade = layer_par(fl, rin, w)
    t = ta[:, None]
    v = vcmax25[:, None]
    a_sun = leaf_photosynthesis(PAR_UMOL_PER_J * sun, t, v)
    a_shade = leaf_photosynthesis(PAR_UMOL_PER_J * shade, t, v)
    per_layer = fl.dlai[:, None] * (fl.sunlit * a_sun + (1.0 - fl.sunlit) * a_shade)
    gpp = per_layer.sum(axis=1)
    return {
        "gpp": gpp,
        "fpar": fpar,
        "fpar_cab": fpar_cab,
        "apar": PAR_UMOL_PER_J * par_in * fpar,
        "apar_cab": PAR_UMOL_PER_J * par_in * fpar_cab,
    }


def simulate_batch(batch, meteo, sza_obs, sza_step, n_layers=N_LAYERS, reflectance=True):
    """Vectorised forward simulation.

    Parameters
    ----------
    batch : dict of arrays
        Scenario fields plus ``vcmax25``; all of shape ``(n,)``.
    meteo : dict of arrays
        ``rin, rli, ta, p, ea, u``; broadcastable to ``(n,)``.
    sza_obs, sza_step : array_like
        Solar zenith at observation and at the modelling step (deg).
    reflectance : bool
        Skip the full-spectrum solve at ``sza_obs`` when False.

    Returns
    -------
    dict of arrays.  ``toc_reflectance`` is ``(n, n_wl)``; every other entry
    is ``(n,)``.  Rows whose outputs are not finite are reported via the
    boolean ``ok`` entry rather than raised.
    """
    n = np.asarray(batch["lai"]).shape[0]
    rin = np.broadcast_to(np.asarray(meteo["rin"], dtype=float), (n,))
    ta = np.broadcast_to(np.asarray(meteo["ta"], dtype=float), (n,))
    sza_obs = np.broadcast_to(np.asarray(sza_obs, dtype=float), (n,))
    sza_step = np.broadcast_to(np.asarray(sza_step, dtype=float), (n,))
    vcmax25 = np.asarray(batch["vcmax25"], dtype=float)

    refl, trans, share = leaf_optics_batch(batch)
    soil = soil_reflectance_batch(batch)

    out = _photosynthesis_run(refl, trans, share, soil, batch, sza_step, rin, ta, vcmax25, n_layers)
    if np.array_equal(sza_obs, sza_step):
        obs = out
    else:
        obs = _photosynthesis_run(refl, trans, share, soil, batch, sza_obs, rin, ta, vcmax25, n_layers)
    out["fpar_obs"] = obs["fpar"]
    out["fpar_cab_obs"] = obs["fpar_cab"]
    out["ccc"] = np.asarray(batch["lai"], dtype=float) * np.asarray(batch["cab"], dtype=float)
    ok = np.ones(n, dtype=bool)
    if reflectance:
        fl = sheet_fluxes(refl, trans, soil, batch["lai"], batch["lidf_a"], batch["lidf_b"], sza_obs, n_layers)
        out["toc_reflectance"] = fl.reflectance
        ok &= np.isfinite(fl.reflectance).all(axis=1)
    for key in ("gpp", "fpar", "fpar_cab", "apar", "apar_cab", "fpar_obs", "fpar_cab_obs"):
        ok &= np.isfinite(out[key])
    out["ok"] = ok
    return out


def simulate(scenario: VegetationScenario, meteo: MeteoState, geom: Geometry,
             vcmax_mode="cab-coupled", n_layers=N_LAYERS) -> SimRecord:
    """Forward-simulate one scenario.

    Reflectance and ``fpar_obs`` use the observation geometry; GPP, fPAR and
    APAR use the modelling-step geometry.
    """
    d = scenario.as_dict()
    batch = {k: np.array([v], dtype=float) for k, v in d.items()}
    validate_batch(batch, SCENARIO_FIELDS)
    for name in METEO_FIELDS:
        check_range(name, getattr(meteo, name))
    batch["vcmax25"] = vcmax25_for(batch["cab"], vcmax_mode)
    m = {name: np.array([getattr(meteo, name)]) for name in METEO_FIELDS}
    out = simulate_batch(batch, m, geom.sza_obs, geom.sza_step, n_layers)
    if not out["ok"][0]:
        raise NumericalError("non-finite simulation output", scenario_id=scenario.scenario_id)
    return SimRecord(
        scenario=scenario,
        meteo=meteo,
        geom=geom,
        vcmax25=float(batch["vcmax25"][0]),
        toc_reflectance=Spectrum(WL, out["toc_reflectance"][0]),
        gpp=float(out["gpp"][0]),
        fpar=float(out["fpar"][0]),
        fpar_cab=float(out["fpar_cab"][0]),
        apar=float(out["apar"][0]),
        apar_cab=float(out["apar_cab"][0]),
        ccc=float(out["ccc"][0]),
        fpar_obs=float(out["fpar_obs"][0]),
        fpar_cab_obs=float(out["fpar_cab_obs"][0]),
    )
