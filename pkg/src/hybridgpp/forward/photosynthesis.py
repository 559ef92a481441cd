"""Collatz et al. (1991) C3 leaf gross assimilation with fixed intercellular CO2.

Leaf temperature is taken equal to air temperature; dark respiration is
not subtracted, so the result is gross photosynthesis.
"""
import numpy as np

from ..errors import DomainError, RangeError

CA = 400.0  # umol mol-1
CI = 0.7 * CA
GAMMA_STAR_25 = 42.75  # umol mol-1
KC_25 = 404.9  # umol mol-1
KO_25 = 278.4  # mmol mol-1
O2 = 209.0  # mmol mol-1
Q10_VCMAX = 2.1
Q10_KC = 2.1
Q10_KO = 1.2
QUANTUM_EFFICIENCY = 0.08  # mol CO2 (mol photons)-1
THETA_1 = 0.98
THETA_2 = 0.95


def q10(value25, q, t):
    return value25 * q ** ((t - 25.0) / 10.0)


def vcmax_at(vcmax25, ta):
    """Temperature-adjusted Vcmax with high/low temperature inhibition."""
    inhibit = (1.0 + np.exp(0.3 * (ta - 36.0))) * (1.0 + np.exp(0.2 * (8.0 - ta)))
    return q10(vcmax25, Q10_VCMAX, ta) / inhibit


def _smaller_root(theta, x, y):
    # theta z^2 - (x + y) z + x y = 0
    s = x + y
    disc = np.maximum(s * s - 4.0 * theta * x * y, 0.0)
    return 2.0 * x * y / (s + np.sqrt(disc) + np.where(s > 0, 0.0, 1.0))


def collatz_rates(apar_leaf, ta, vcmax25):
    """Rubisco-, light- and export-limited rates (Wc, We, Ws) in umol m-2 s-1."""
    vcmax = vcmax_at(vcmax25, ta)
    kc = q10(KC_25, Q10_KC, ta)
    ko = q10(KO_25, Q10_KO, ta)
    gs = GAMMA_STAR_25
    wc = vcmax * (CI - gs) / (CI + kc * (1.0 + O2 / ko))
    we = QUANTUM_EFFICIENCY * apar_leaf * (CI - gs) / (CI + 2.0 * gs)
    ws = vcmax / 2.0
    return wc, we, ws


def leaf_photosynthesis(apar_leaf, ta, vcmax25):
    """Gross leaf assimilation (umol CO2 m-2 leaf s-1).

    Parameters
    ----------
    apar_leaf : float or ndarray
        Absorbed PAR per unit leaf area, umol photons m-2 s-1.
    ta : float or ndarray
        Leaf (= air) temperature, degC, within [-10, 50].
    vcmax25 : float or ndarray
        Carboxylation capacity at 25 degC, umol m-2 s-1.
    """
    apar_leaf = np.asarray(apar_leaf, dtype=float)
    ta = np.asarray(ta, dtype=float)
    if np.any(apar_leaf < 0):
        raise DomainError("absorbed PAR must be non-negative")
    if np.any((ta < -10.0) | (ta > 50.0)):
        raise RangeError("ta", float(np.asarray(ta).flat[0]), -10.0, 50.0)
    wc, we, ws = collatz_rates(apar_leaf, ta, np.asarray(vcmax25, dtype=float))
    jp = _smaller_root(THETA_1, wc, we)
    a = _smaller_root(THETA_2, jp, ws)
    return np.maximum(a, 0.0) if a.ndim else max(float(a), 0.0)
