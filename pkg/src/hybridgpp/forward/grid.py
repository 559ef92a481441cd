"""Spectral grid, integration weights and the reference solar irradiance shape."""
from dataclasses import dataclass

import numpy as np

WL = np.arange(400.0, 2401.0, 10.0)
N_WL = WL.size

# trapezoid weights (nm) over the full grid and over 400-700 nm
DW = np.full(N_WL, 10.0)
DW[[0, -1]] = 5.0
PAR_MASK = WL <= 700.0
DW_PAR = np.where(PAR_MASK, DW, 0.0)
DW_PAR[np.flatnonzero(PAR_MASK)[-1]] = 5.0

# J -> umol photons over 400-700 nm
PAR_UMOL_PER_J = 4.57

_H = 6.62607015e-34
_C = 2.99792458e8
_KB = 1.380649e-23


def _planck(wl_nm, temperature=5778.0):
    lam = wl_nm * 1e-9
    return 2 * _H * _C**2 / lam**5 / np.expm1(_H * _C / (lam * _KB * temperature))


SOLAR_SHAPE = _planck(WL)
SOLAR_SHAPE /= np.sum(SOLAR_SHAPE * DW)


def solar_spectrum(rin):
    """Incident spectral flux (W m-2 nm-1) whose 400-2400 nm integral is ``rin``."""
    return np.multiply.outer(np.asarray(rin, dtype=float), SOLAR_SHAPE)


@dataclass(frozen=True)
class Spectrum:
    """Values sampled on the package wavelength grid."""

    wl: np.ndarray
    values: np.ndarray

    def at(self, wavelength):
        return float(np.interp(wavelength, self.wl, self.values))

    def integral(self):
        return float(np.sum(self.values * DW))
