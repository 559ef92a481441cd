"""PAWN density-based sensitivity indices.

For every input, the output distribution obtained with that input fixed at a
conditioning value is compared (two-sample Kolmogorov-Smirnov distance) with
the unconditional output distribution.  The index of an input is the maximum
distance over its conditioning values.
"""
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError
from .forward.params import DEFAULT_METEO, DEFAULT_SZA, METEO_FIELDS
from .forward.simulate import simulate_batch
from .sampling import design_to_batch, lhs_sample

MIN_SUBRANGE_SAMPLES = 10
CHUNK_ROWS = 2048


@dataclass(frozen=True)
class PawnConfig:
    nu: int = 1000
    nc: int = 400
    n_cond: int = 30
    seed: int = 1
    subrange: tuple | None = None
    alpha: float = 0.05

    def __post_init__(self):
        if min(self.nu, self.nc, self.n_cond) < 2:
            raise ValueError("nu, nc and n_cond must all be >= 2")

    def budget(self, n_inputs):
        return self.nu + n_inputs * self.n_cond * self.nc


@dataclass
class PawnResult:
    names: tuple
    indices: np.ndarray
    ks: np.ndarray  # (M, n_cond); NaN where a conditioning value was skipped
    conditioning: np.ndarray  # (M, n_cond)
    threshold: np.ndarray  # (M,) critical KS value for each input's sample sizes
    n_failed: int = 0
    subrange: tuple | None = None
    sample_sizes: dict = field(default_factory=dict)

    @property
    def influential(self):
        return self.indices > self.threshold

    def ranking(self):
        """Input names ordered from most to least influential."""
        order = np.argsort(-self.indices, kind="stable")
        return [self.names[i] for i in order]

    def index_of(self, name):
        return float(self.indices[self.names.index(name)])


def ks_statistic(a, b):
    """Two-sample KS distance: the sup-norm gap between the empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    na, nb = a.size, b.size
    if na == 0 or nb == 0:
        raise ValueError("ks_statistic needs two non-empty samples")
    pts = np.concatenate([a, b])
    ca = np.searchsorted(a, pts, side="right").astype(np.int64)
    cb = np.searchsorted(b, pts, side="right").astype(np.int64)
    # integer numerator keeps the result exactly the rounded rational
    return int(np.max(np.abs(ca * nb - cb * na))) / (na * nb)


def ks_critical(n1, n2, alpha=0.05):
    """Asymptotic two-sample KS critical value c(alpha) sqrt((n1 + n2) / (n1 n2))."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n1 + n2) / (n1 * n2))


def conditioning_values(lo, hi, n_cond):
    """Equally spaced quantiles 0, 1/(n-1), ..., 1 of a uniform range (end points included)."""
    return lo + (hi - lo) * np.linspace(0.0, 1.0, n_cond)


def pawn_design(space, cfg):
    """Unconditional sample and the stacked conditional samples.

    Returns ``(x_u, x_c, cond)`` with ``x_c`` of shape ``(M, n_cond, nc, M)``.
    """
    m = space.dim
    x_u = lhs_sample(space, cfg.nu, np.random.SeedSequence([cfg.seed, 0]).generate_state(1)[0])
    x_c = np.empty((m, cfg.n_cond, cfg.nc, m))
    cond = np.empty((m, cfg.n_cond))
    for i in range(m):
        lo, hi = space.lows[i], space.highs[i]
        cond[i] = conditioning_values(lo, hi, cfg.n_cond)
        for k in range(cfg.n_cond):
            s = np.random.SeedSequence([cfg.seed, 1, i, k]).generate_state(1)[0]
            x = lhs_sample(space, cfg.nc, s)
            x[:, i] = cond[i, k]
            x_c[i, k] = x
    return x_u, x_c, cond


def evaluate(model, x, threads=1):
    """Evaluate ``model`` on rows of ``x`` in fixed-size chunks, preserving order."""
    chunks = [x[s:s + CHUNK_ROWS] for s in range(0, x.shape[0], CHUNK_ROWS)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(model, chunks))
    else:
        parts = [model(c) for c in chunks]
    return np.concatenate([np.asarray(p, dtype=float).reshape(-1) for p in parts])


def pawn_from_outputs(names, y_u, y_c, cond, cfg, n_failed=0):
    """Compute PAWN indices from already evaluated outputs.

    ``y_c`` has shape ``(M, n_cond, nc)``; NaN marks failed runs, which are
    excluded.  With ``cfg.subrange = (lo, hi)`` both samples are restricted
    to outputs in ``(lo, hi]``; conditioning values left with fewer than 10
    conditional outputs are skipped, and an input with no usable
    conditioning value raises :class:`InsufficientDataError`.
    """
    m = len(names)

    def keep(v):
        v = v[np.isfinite(v)]
        if cfg.subrange is not None:
            lo, hi = cfg.subrange
            v = v[(v > lo) & (v <= hi)]
        return v

    yu = keep(y_u)
    if yu.size < MIN_SUBRANGE_SAMPLES:
        raise InsufficientDataError(
            f"only {yu.size} unconditional outputs in subrange {cfg.subrange}", input_name=names[0])
    ks = np.full((m, cfg.n_cond), np.nan)
    thresholds = np.empty(m)
    sizes = {}
    for i in range(m):
        used = []
        for k in range(cfg.n_cond):
            yc = keep(y_c[i, k])
            if yc.size < MIN_SUBRANGE_SAMPLES:
                continue
            ks[i, k] = ks_statistic(yc, yu)
            used.append(yc.size)
        if not used:
            raise InsufficientDataError(
                f"input {names[i]!r}: no conditioning value leaves {MIN_SUBRANGE_SAMPLES} outputs "
                f"in subrange {cfg.subrange}", input_name=names[i])
        nc_eff = float(np.mean(used))
        thresholds[i] = ks_critical(yu.size, nc_eff, cfg.alpha)
        sizes[names[i]] = (int(yu.size), nc_eff, len(used))
    indices = np.nanmax(ks, axis=1)
    return PawnResult(tuple(names), indices, ks, cond, thresholds, n_failed, cfg.subrange, sizes)


def pawn_indices(model, space, cfg, threads=1, return_outputs=False):
    """PAWN indices of every input of ``space`` for a vectorised ``model``.

    ``model`` maps an ``(n, M)`` design matrix to ``n`` outputs (NaN for a
    failed run).
    """
    x_u, x_c, cond = pawn_design(space, cfg)
    m = space.dim
    flat = np.vstack([x_u, x_c.reshape(-1, m)])
    y = evaluate(model, flat, threads)
    n_failed = int((~np.isfinite(y)).sum())
    y_u = y[:cfg.nu]
    y_c = y[cfg.nu:].reshape(m, cfg.n_cond, cfg.nc)
    res = pawn_from_outputs(space.names, y_u, y_c, cond, cfg, n_failed)
    return (res, (y_u, y_c)) if return_outputs else res


def gpp_model(space, meteo=DEFAULT_METEO, sza=DEFAULT_SZA, vcmax_mode="cab-coupled"):
    """Canopy GPP as a function of a design matrix over ``space``.

    Inputs absent from ``space`` stay at ``meteo`` and ``sza``.
    """
    def run(x):
        batch, met, sza_obs = design_to_batch(space, x, vcmax_mode)
        for name in METEO_FIELDS:
            if name not in space.names:
                met[name] = np.full(x.shape[0], getattr(meteo, name))
        if "sza_obs" not in space.names:
            sza_obs = np.full(x.shape[0], sza)
        out = simulate_batch(batch, met, sza_obs, sza_obs, reflectance=False)
        return np.where(out["ok"], out["gpp"], np.nan)
    return run


SUBRANGES = {"low": (-np.inf, 5.0), "medium": (5.0, 20.0), "high": (20.0, np.inf)}


def write_report(path, full, subranges=None):
    """CSV: input, index, rank, influence flag, then one index/flag pair per subrange."""
    subranges = subranges or {}
    rank = {name: r + 1 for r, name in enumerate(full.ranking())}
    header = ["input", "index", "rank", "threshold", "below_threshold"]
    for label in subranges:
        header += [f"index_{label}", f"threshold_{label}", f"below_threshold_{label}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, name in enumerate(full.names):
            row = [name, format(full.indices[i], ".9g"), rank[name], format(full.threshold[i], ".9g"),
                   int(not full.influential[i])]
            for res in subranges.values():
                row += [format(res.indices[i], ".9g"), format(res.threshold[i], ".9g"),
                        int(not res.influential[i])]
            w.writerow(row)
