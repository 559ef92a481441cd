"""Single-plate leaf optics with Gaussian specific-absorption coefficients.

Total absorption per wavelength is ``K = sum_i k_i(wl) * c_i``; the leaf
absorbs ``a = 1 - exp(-K / N)``, reflects ``r = 0.45 * (1 - a) * f(N)`` with
structure factor ``f(N) = 2N / (2N + 1)``, and transmits the remainder.
"""
import numpy as np

from .grid import WL, Spectrum
from .params import LEAF_RANGES, LeafParams, check_range

RHO_MAX = 0.45


def _gauss(center, sigma):
    return np.exp(-0.5 * ((WL - center) / sigma) ** 2)


# specific absorption coefficients on the grid, per unit content
# the broad 560 nm term keeps green-band absorption realistic
K_CAB = (0.07 * _gauss(670.0, 40.0) + 0.08 * _gauss(430.0, 30.0)
         + 0.06 * _gauss(560.0, 60.0))  # cm2 ug-1
K_CCA = 0.06 * _gauss(490.0, 35.0)  # cm2 ug-1
K_CANT = 0.05 * _gauss(550.0, 30.0)  # cm2 ug-1
K_CW = 40.0 * _gauss(1450.0, 80.0) + 80.0 * _gauss(1940.0, 80.0)  # cm-1
K_CDM = 5.0 / (1.0 + np.exp(-(WL - 700.0) / 15.0))  # cm2 g-1
K_CS = 4.0 * np.clip((800.0 - WL) / 400.0, 0.0, 1.0)  # per unit senescent fraction

CONSTITUENTS = (
    ("cab", K_CAB),
    ("cca", K_CCA),
    ("cant", K_CANT),
    ("cdm", K_CDM),
    ("cw", K_CW),
    ("cs", K_CS),
)


def structure_factor(n_struct):
    n = np.asarray(n_struct, dtype=float)
    return 2.0 * n / (2.0 * n + 1.0)


def leaf_optics_batch(leaf):
    """Vectorised leaf optics.

    Parameters
    ----------
    leaf : dict of arrays
        Keys ``cab, cca, cant, cdm, cw, cs, n_struct``; each of shape ``(n,)``.

    Returns
    -------
    refl, trans, cab_share : ndarray, shape (n, n_wl)
    """
    parts = {name: np.multiply.outer(np.asarray(leaf[name], dtype=float), k) for name, k in CONSTITUENTS}
    total = sum(parts.values())
    n = np.asarray(leaf["n_struct"], dtype=float)[..., None]
    absorb = -np.expm1(-total / n)
    refl = RHO_MAX * (1.0 - absorb) * structure_factor(n)
    trans = np.clip(1.0 - absorb - refl, 0.0, None)
    with np.errstate(invalid="ignore", divide="ignore"):
        share = np.where(total > 0.0, parts["cab"] / np.where(total > 0.0, total, 1.0), 0.0)
    return refl, trans, share


def leaf_optics(leaf: LeafParams):
    """Leaf reflectance, transmittance and the chlorophyll share of absorption."""
    for name, bounds in LEAF_RANGES.items():
        check_range(name, getattr(leaf, name), bounds)
    batch = {name: np.array([getattr(leaf, name)]) for name in LEAF_RANGES}
    refl, trans, share = leaf_optics_batch(batch)
    return Spectrum(WL, refl[0]), Spectrum(WL, trans[0]), Spectrum(WL, share[0])
