"""Leaf inclination distribution (two-parameter cumulative family) and projections."""
import numpy as np

# class centres and boundaries (deg); 13 classes, finer near vertical
LIDF_BOUNDS = np.array([0, 10, 20, 30, 40, 50, 60, 70, 80, 82, 84, 86, 88, 90], dtype=float)
LIDF_ANGLES = 0.5 * (LIDF_BOUNDS[:-1] + LIDF_BOUNDS[1:])

# Gauss-Legendre nodes on mu in (0, 1) for hemispherical diffuse integrals
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
MU_NODES = 0.5 * (_GL_X + 1.0)
MU_WEIGHTS = 0.5 * _GL_W


def _dcum(a, b, theta_deg, tol=1e-10, max_iter=500):
    """Cumulative leaf-angle distribution at ``theta_deg`` for arrays ``a``, ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = 2.0 * np.deg2rad(theta_deg)
    x = np.full(np.broadcast(a, b).shape, p)
    y = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        # elements stop updating once converged, so each row is batch-independent
        y_new = a * np.sin(x) + 0.5 * b * np.sin(2.0 * x)
        y = np.where(active, y_new, y)
        dx = np.where(active, 0.5 * (y - x + p), 0.0)
        x = x + dx
        active &= np.abs(dx) >= tol
        if not active.any():
            break
    f = (2.0 * y + p) / np.pi
    planophile_limit = 1.0 - np.cos(np.deg2rad(theta_deg))
    return np.where(a >= 1.0, planophile_limit, f)


def lidf_fractions(lidf_a, lidf_b):
    """Fraction of leaf area in each of the 13 inclination classes, shape (n, 13)."""
    a = np.atleast_1d(np.asarray(lidf_a, dtype=float))
    b = np.atleast_1d(np.asarray(lidf_b, dtype=float))
    cum = np.stack([_dcum(a, b, t) for t in LIDF_BOUNDS[1:-1]], axis=-1)
    cum = np.concatenate([np.zeros(a.shape + (1,)), cum, np.ones(a.shape + (1,))], axis=-1)
    frac = np.clip(np.diff(cum, axis=-1), 0.0, None)
    return frac / frac.sum(axis=-1, keepdims=True)


def _psi(theta_leaf, theta_sun):
    """Projection of a leaf inclination class onto direction ``theta_sun`` (radians)."""
    cl, cs = np.cos(theta_leaf), np.cos(theta_sun)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = cl * cs / (np.sin(theta_leaf) * np.sin(theta_sun))
    beta = np.arccos(np.clip(cot, -1.0, 1.0))
    wide = cl * cs * (1.0 + 2.0 / np.pi * (np.tan(beta) - beta))
    return np.where(np.abs(np.nan_to_num(cot, nan=np.inf, posinf=np.inf)) >= 1.0, cl * cs, wide)


def g_function(frac, zenith_deg):
    """Mean projection G of the leaf area onto direction ``zenith_deg``.

    ``frac`` has shape (n, 13); ``zenith_deg`` broadcasts against (n,) or
    carries a trailing node axis of shape (n, k) or (k,).
    """
    zen = np.deg2rad(np.asarray(zenith_deg, dtype=float))
    leaf = np.deg2rad(LIDF_ANGLES)
    psi = _psi(leaf, zen[..., None])
    if psi.ndim == frac.ndim:
        return np.sum(frac * psi, axis=-1)
    return np.sum(frac[:, None, :] * psi, axis=-1)


def beam_extinction(frac, sza_deg):
    """Direct-beam extinction coefficient ``k_b = G(sza) / cos(sza)``."""
    sza = np.broadcast_to(np.asarray(sza_deg, dtype=float), frac.shape[:1])
    return g_function(frac, sza) / np.cos(np.deg2rad(sza))


def diffuse_transmission(frac, dlai):
    """Uncollided transmission of isotropic diffuse light through leaf area ``dlai``."""
    zen = np.rad2deg(np.arccos(MU_NODES))
    g = g_function(frac, np.broadcast_to(zen, frac.shape[:1] + zen.shape))
    dlai = np.asarray(dlai, dtype=float)[..., None]
    return 2.0 * np.sum(MU_WEIGHTS * MU_NODES * np.exp(-g * dlai / MU_NODES), axis=-1)


def scatter_split(frac):
    """Backward and forward shares of leaf reflection (ddb, ddf) from mean cos^2."""
    m = np.sum(frac * np.cos(np.deg2rad(LIDF_ANGLES)) ** 2, axis=-1)
    return 0.5 * (1.0 + m), 0.5 * (1.0 - m)
