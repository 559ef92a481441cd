"""Layered two-stream canopy radiative transfer.

The canopy is a stack of ``n_layers`` equal sheets of leaf area.  Inside a
sheet, light is either uncollided or intercepted once; intercepted light is
absorbed with probability ``1 - omega`` and otherwise leaves the sheet as
diffuse flux, backward with ``sigma_b = ddb*r + ddf*t`` and forward with
``sigma_f = ddf*r + ddb*t``.  A Lambertian soil closes the stack.  Fluxes are
solved exactly for this medium with a bottom-up adding sweep followed by a
top-down substitution, so energy closes to rounding error.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from .grid import DW_PAR, WL, Spectrum, SOLAR_SHAPE
from .leaf import leaf_optics_batch
from .lidf import beam_extinction, diffuse_transmission, lidf_fractions, scatter_split
from .params import Geometry, SCENARIO_FIELDS, VegetationScenario, check_range, validate_batch
from .soil import soil_reflectance_batch

N_LAYERS = 20
DIFFUSE_FRACTION = 0.2


@dataclass
class CanopyFluxes:
    """Per-unit-incident fluxes for a batch; wavelength is the last axis.

    Attributes
    ----------
    direct : (n, L+1) direct beam at sheet interfaces (top = 0)
    down, up : (n, L+1, W) diffuse fluxes at interfaces
    abs_direct, abs_diffuse : (n, L, W) leaf absorption per sheet
    abs_soil : (n, W)
    reflectance : (n, W) top-of-canopy reflectance
    sunlit : (n, L) sheet-mean sunlit leaf fraction
    dlai : (n,) leaf area per sheet
    """

    direct: np.ndarray
    down: np.ndarray
    up: np.ndarray
    abs_direct: np.ndarray
    abs_diffuse: np.ndarray
    abs_soil: np.ndarray
    reflectance: np.ndarray
    sunlit: np.ndarray
    dlai: np.ndarray
    wl: np.ndarray


def sheet_fluxes(refl, trans, soil, lai, lidf_a, lidf_b, sza, n_layers=N_LAYERS,
                 diffuse_fraction=DIFFUSE_FRACTION, wl=WL):
    """Solve the layered medium for arrays of leaf/soil optics.

    ``refl``, ``trans`` and ``soil`` are ``(n, W)``; the rest are ``(n,)``.
    """
    lai = np.asarray(lai, dtype=float)
    n = lai.shape[0]
    frac = lidf_fractions(lidf_a, lidf_b)
    dlai = lai / n_layers
    kb = beam_extinction(frac, np.broadcast_to(sza, (n,)))
    ddb, ddf = scatter_split(frac)

    tau_b = np.exp(-kb * dlai)  # (n,)
    tau_d = diffuse_transmission(frac, dlai)  # (n,)
    sig_b = ddb[:, None] * refl + ddf[:, None] * trans
    sig_f = ddf[:, None] * refl + ddb[:, None] * trans
    omega = refl + trans

    icpt_d = (1.0 - tau_d)[:, None]
    rho = icpt_d * sig_b
    tau = tau_d[:, None] + icpt_d * sig_f

    depth = np.arange(n_layers + 1)
    direct = (1.0 - diffuse_fraction) * tau_b[:, None] ** depth  # (n, L+1)
    icpt_b = (1.0 - tau_b)[:, None]
    src_b = icpt_b * sig_b  # per unit direct at sheet top
    src_f = icpt_b * sig_f

    W = refl.shape[1]
    R = np.empty((n, n_layers + 1, W))
    U = np.empty((n, n_layers + 1, W))
    denom = np.empty((n, n_layers, W))
    R[:, -1] = soil
    U[:, -1] = soil * direct[:, -1:]
    for j in range(n_layers - 1, -1, -1):
        s_j = direct[:, j:j + 1]
        denom[:, j] = 1.0 - rho * R[:, j + 1]
        R[:, j] = rho + tau * tau * R[:, j + 1] / denom[:, j]
        U[:, j] = src_b * s_j + tau * (U[:, j + 1] + R[:, j + 1] * src_f * s_j) / denom[:, j]

    down = np.empty((n, n_layers + 1, W))
    up = np.empty((n, n_layers + 1, W))
    down[:, 0] = diffuse_fraction
    for j in range(n_layers):
        up[:, j] = R[:, j] * down[:, j] + U[:, j]
        down[:, j + 1] = (tau * down[:, j] + rho * U[:, j + 1] + src_f * direct[:, j:j + 1]) / denom[:, j]
    up[:, -1] = R[:, -1] * down[:, -1] + U[:, -1]

    absorb = 1.0 - omega
    abs_direct = (direct[:, :-1] * (1.0 - tau_b)[:, None])[:, :, None] * absorb[:, None, :]
    abs_diffuse = (down[:, :-1] + up[:, 1:]) * icpt_d[:, :, None] * absorb[:, None, :]
    abs_soil = (1.0 - soil) * (down[:, -1] + direct[:, -1:])

    # sheet-mean sunlit fraction: mean of exp(-kb * L) over the sheet
    kdl = kb * dlai
    top = np.exp(-kb[:, None] * dlai[:, None] * depth[None, :-1])
    with np.errstate(invalid="ignore", divide="ignore"):
        avg = np.where(kdl > 0, -np.expm1(-kdl) / np.where(kdl > 0, kdl, 1.0), 1.0)
    sunlit = top * avg[:, None]

    return CanopyFluxes(direct, down, up, abs_direct, abs_diffuse, abs_soil, up[:, 0].copy(),
                        sunlit, dlai, wl)


PAR_WEIGHTS = SOLAR_SHAPE * DW_PAR


def par_fraction(absorbed, weights=PAR_WEIGHTS):
    """Solar-weighted 400-700 nm average of a per-unit-incident spectrum."""
    return np.sum(absorbed * weights, axis=-1) / np.sum(weights)


def canopy_rt_batch(batch, sza, n_layers=N_LAYERS, scenario_ids=None):
    """Run the canopy model for a dict batch of scenario fields.

    Returns ``(fluxes, fpar, fpar_cab, cab_share)``.
    """
    refl, trans, share = leaf_optics_batch(batch)
    soil = soil_reflectance_batch(batch)
    fl = sheet_fluxes(refl, trans, soil, batch["lai"], batch["lidf_a"], batch["lidf_b"], sza, n_layers)
    leaf_abs = (fl.abs_direct + fl.abs_diffuse).sum(axis=1)
    fpar = par_fraction(leaf_abs)
    fpar_cab = par_fraction(((fl.abs_direct + fl.abs_diffuse) * share[:, None, :]).sum(axis=1))
    bad = ~(np.isfinite(fl.reflectance).all(axis=1) & np.isfinite(fpar) & np.isfinite(fpar_cab))
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        sid = scenario_ids[i] if scenario_ids is not None else i
        raise NumericalError("non-finite canopy flux", scenario_id=sid)
    return fl, fpar, fpar_cab, share


def canopy_rt(scenario: VegetationScenario, geom: Geometry, n_layers=N_LAYERS):
    """Top-of-canopy reflectance, fPAR, fPAR_Cab and sunlit/shaded absorbed PAR per layer.

    The reflectance and absorption fractions are evaluated at ``geom.sza_step``.
    ``layer_apar`` is a dict with ``sunlit`` and ``shaded`` per-leaf-area
    absorbed PAR for unit (1 W m-2) broadband irradiance, in W m-2 leaf.
    """
    check_range("sza_step", geom.sza_step, (0.0, 89.999))
    batch = {k: np.array([v]) for k, v in scenario.as_dict().items()}
    validate_batch(batch, SCENARIO_FIELDS)
    ids = [scenario.scenario_id]
    fl, fpar, fpar_cab, _ = canopy_rt_batch(batch, geom.sza_step, n_layers, scenario_ids=ids)
    sun, shade = layer_par(fl, np.array([1.0]))
    return Spectrum(WL, fl.reflectance[0]), float(fpar[0]), float(fpar_cab[0]), {
        "sunlit": sun[0], "shaded": shade[0], "sunlit_fraction": fl.sunlit[0]}


def layer_par(fl, rin, weights=PAR_WEIGHTS):
    """Absorbed PAR per unit leaf area (W m-2) on sunlit and shaded leaves of each sheet."""
    w = weights
    flux = np.asarray(rin, dtype=float)[:, None]
    direct = np.sum(fl.abs_direct * w, axis=-1) * flux  # (n, L) W m-2 ground
    diffuse = np.sum(fl.abs_diffuse * w, axis=-1) * flux
    dlai = fl.dlai[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        shade = np.where(dlai > 0, diffuse / np.where(dlai > 0, dlai, 1.0), 0.0)
        sun_area = fl.sunlit * dlai
        sun = shade + np.where(sun_area > 0, direct / np.where(sun_area > 0, sun_area, 1.0), 0.0)
    return sun, shade
