"""Bagged regression trees (variance-reduction CART) with a numba core.

Each tree presorts its bootstrap sample once per feature and keeps the
per-feature orderings valid through stable partitioning, so a level of the
tree costs O(n * d) rather than a fresh sort per node.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from ..spectral import normalize_spectrum

DEFAULT_FOREST = {"trees": 100, "max_depth": None, "min_leaf": 1, "seed": 1, "bootstrap": True}


@numba.njit(nogil=True, cache=True)
def _grow(xb, yb, order, max_depth, min_leaf):
    n, d = xb.shape
    cap = 2 * n + 1
    feat = np.full(cap, -1, np.int64)
    thr = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap)
    goes_left = np.zeros(n, np.bool_)
    buf = np.empty(n, np.int64)
    st_node = np.empty(cap, np.int64)
    st_start = np.empty(cap, np.int64)
    st_end = np.empty(cap, np.int64)
    st_depth = np.empty(cap, np.int64)
    sp = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n
    st_depth[0] = 0
    sp = 1
    n_nodes = 1
    while sp > 0:
        sp -= 1
        node = st_node[sp]
        s = st_start[sp]
        e = st_end[sp]
        dep = st_depth[sp]
        m = e - s
        tot = 0.0
        for k in range(s, e):
            tot += yb[order[0, k]]
        value[node] = tot / m
        if m < 2 * min_leaf or (max_depth >= 0 and dep >= max_depth):
            continue
        base = tot * tot / m
        best = base + 1e-10 * abs(base) + 1e-300
        best_f = -1
        best_thr = 0.0
        for f in range(d):
            sl = 0.0
            for k in range(s, e - 1):
                p = order[f, k]
                sl += yb[p]
                nl = k - s + 1
                nr = m - nl
                if nr < min_leaf:
                    break
                if nl < min_leaf:
                    continue
                xa = xb[p, f]
                xnext = xb[order[f, k + 1], f]
                if xa == xnext:
                    continue
                sr = tot - sl
                score = sl * sl / nl + sr * sr / nr
                if score > best:
                    best = score
                    best_f = f
                    t = 0.5 * (xa + xnext)
                    if t >= xnext:
                        t = xa
                    best_thr = t
        if best_f < 0:
            continue
        nl = 0
        for k in range(s, e):
            p = order[best_f, k]
            gl = xb[p, best_f] <= best_thr
            goes_left[p] = gl
            if gl:
                nl += 1
        for f in range(d):
            a = s
            b = s + nl
            for k in range(s, e):
                p = order[f, k]
                if goes_left[p]:
                    buf[a] = p
                    a += 1
                else:
                    buf[b] = p
                    b += 1
            for k in range(s, e):
                order[f, k] = buf[k]
        feat[node] = best_f
        thr[node] = best_thr
        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        left[node] = lc
        right[node] = rc
        # right pushed first so the left subtree is expanded first
        st_node[sp] = rc
        st_start[sp] = s + nl
        st_end[sp] = e
        st_depth[sp] = dep + 1
        sp += 1
        st_node[sp] = lc
        st_start[sp] = s
        st_end[sp] = s + nl
        st_depth[sp] = dep + 1
        sp += 1
    return feat[:n_nodes], thr[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes]


@numba.njit(nogil=True, cache=True)
def _predict_tree(feat, thr, left, right, value, x, out):
    for i in range(x.shape[0]):
        node = 0
        while feat[node] >= 0:
            if x[i, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += value[node]


@dataclass
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self):
        return self.feature.size


@dataclass
class ForestModel:
    trees: list
    hyper: dict
    n_inputs: int
    n_bands: int = 0
    target: str = "gpp"
    sensor_name: str = ""
    band_ids: tuple = ()
    layout: str = "case2"
    train_time_s: float = field(default=0.0, compare=False)


def _prepare(x, n_bands):
    x = np.array(x, dtype=float, copy=True)
    if n_bands:
        x[:, :n_bands] = normalize_spectrum(x[:, :n_bands])
    return x


def _fit_tree(args):
    x, y, probs, seed, max_depth, min_leaf, bootstrap = args
    rng = np.random.default_rng(seed)
    n = y.size
    if not bootstrap:
        boot = np.arange(n)
    elif probs is not None:
        boot = rng.choice(n, size=n, replace=True, p=probs)
    else:
        boot = rng.integers(0, n, n)
    xb = np.ascontiguousarray(x[boot])
    yb = np.ascontiguousarray(y[boot])
    order = np.ascontiguousarray(np.argsort(xb, axis=0, kind="stable").T).astype(np.int64)
    return Tree(*_grow(xb, yb, order, max_depth, min_leaf))


def forest_train(train, hyper=None, n_bands=0, target="gpp", sensor_name="", band_ids=(), layout="case2",
                 threads=1):
    """Fit a bagged forest on ``train = (X_raw, y)``.

    ``hyper`` keys: ``trees``, ``max_depth`` (None = unlimited), ``min_leaf``,
    ``sample_weights`` (per-row, used as bootstrap probabilities), ``bootstrap``
    (False fits every tree on all rows) and ``seed``.
    """
    hp = {**DEFAULT_FOREST, **(hyper or {})}
    if hp["max_depth"] is not None and hp["max_depth"] <= 0:
        raise ValueError("max_depth must be positive or None")
    if hp["min_leaf"] < 1:
        raise ValueError("min_leaf must be >= 1")
    x_raw, y = train
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size == 0:
        raise ValueError("forest_train needs at least one row")
    t0 = time.perf_counter()
    x = _prepare(x_raw, n_bands)
    w = hp.get("sample_weights")
    probs = None
    if w is not None:
        w = np.asarray(w, dtype=float)
        probs = w / w.sum()
    seeds = np.random.SeedSequence(hp["seed"]).spawn(int(hp["trees"]))
    depth = -1 if hp["max_depth"] is None else int(hp["max_depth"])
    jobs = [(x, y, probs, s, depth, int(hp["min_leaf"]), bool(hp["bootstrap"])) for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(_fit_tree, jobs))
    else:
        trees = [_fit_tree(j) for j in jobs]
    stored = {k: v for k, v in hp.items() if k != "sample_weights"}
    stored["weighted"] = w is not None
    return ForestModel(trees, stored, x.shape[1], n_bands, target, sensor_name, tuple(band_ids), layout,
                       time.perf_counter() - t0)


def forest_predict(model, rows):
    x = np.atleast_2d(np.asarray(rows, dtype=float))
    if x.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} features, got {x.shape[1]}")
    x = _prepare(x, model.n_bands)
    out = np.zeros(x.shape[0])
    for t in model.trees:
        _predict_tree(t.feature, t.threshold, t.left, t.right, t.value, x, out)
    out /= len(model.trees)
    if model.target == "gpp":
        out = np.maximum(out, 0.0)
    return out


def low_gpp_weights(gpp, factor, threshold=2.0):
    """Row weights boosting samples with GPP below ``threshold`` (umol m-2 s-1) to ``factor``."""
    gpp = np.asarray(gpp, dtype=float)
    return np.where(gpp < threshold, float(factor), 1.0)
