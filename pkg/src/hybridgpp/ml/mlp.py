"""Fully connected ReLU regressor trained with Adam on mini-batches."""
import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError
from ..spectral import MinMaxScaler, apply_minmax, fit_minmax, normalize_spectrum

TABLE2_ARCHITECTURES = ((12, 12), (20, 20), (20, 12), (12, 12, 12), (40, 20, 12))


@dataclass
class MlpModel:
    """Weights are stored in one flat vector; ``weights``/``biases`` are views into it."""

    sizes: tuple
    params: np.ndarray
    scaler: MinMaxScaler | None = None
    target_scaler: MinMaxScaler | None = None
    targets: tuple = ("gpp",)
    n_bands: int = 0
    sensor_name: str = ""
    band_ids: tuple = ()
    layout: str = "case2"

    def __post_init__(self):
        self.params = np.ascontiguousarray(self.params, dtype=float)
        if self.params.size != param_count(self.sizes):
            raise ValueError("parameter vector does not match layer sizes")
        self.weights, self.biases = _views(self.params, self.sizes)

    @property
    def n_inputs(self):
        return self.sizes[0]

    @property
    def n_outputs(self):
        return self.sizes[-1]

    @classmethod
    def random(cls, sizes, seed=0, zero_output=False, **kw):
        """Fan-in scaled uniform initialisation."""
        sizes = tuple(int(s) for s in sizes)
        rng = np.random.default_rng(seed)
        model = cls(sizes, np.zeros(param_count(sizes)), **kw)
        for i, w in enumerate(model.weights):
            if zero_output and i == len(model.weights) - 1:
                continue
            limit = np.sqrt(6.0 / w.shape[0])
            w[...] = rng.uniform(-limit, limit, size=w.shape)
        return model

    def copy(self):
        return MlpModel(self.sizes, self.params.copy(), self.scaler, self.target_scaler, self.targets,
                        self.n_bands, self.sensor_name, self.band_ids, self.layout)


def param_count(sizes):
    return sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))


def _views(flat, sizes):
    weights, biases, k = [], [], 0
    for a, b in zip(sizes[:-1], sizes[1:]):
        weights.append(flat[k:k + a * b].reshape(a, b))
        k += a * b
        biases.append(flat[k:k + b])
        k += b
    return weights, biases


PREDICT_CHUNK = 4096


def _rowwise_matmul(h, w):
    # elementwise product + reduction: each row's result is independent of the batch
    out = np.empty((h.shape[0], w.shape[1]))
    for s in range(0, h.shape[0], PREDICT_CHUNK):
        out[s:s + PREDICT_CHUNK] = np.sum(h[s:s + PREDICT_CHUNK, :, None] * w[None], axis=1)
    return out


def forward(model, x, rowwise=False):
    """Network output on already-scaled inputs.

    ``rowwise`` trades BLAS speed for results that do not depend on how
    rows are batched (used at prediction time).
    """
    h = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        h = (_rowwise_matmul(h, w) if rowwise else h @ w) + b
        if i < last:
            h = np.maximum(h, 0.0)
    return h


def loss_and_grad(model, x, y):
    """Mean squared error over rows and outputs, and its gradient as a flat vector."""
    acts = [x]
    h = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        h = h @ w + b
        if i < last:
            h = np.maximum(h, 0.0)
        acts.append(h)
    diff = h - y
    loss = float(np.mean(diff * diff))
    grad = np.empty_like(model.params)
    gw, gb = _views(grad, model.sizes)
    delta = 2.0 * diff / diff.size
    for i in range(last, -1, -1):
        gw[i][...] = acts[i].T @ delta
        gb[i][...] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (acts[i] > 0)
    return loss, grad


def prepare_inputs(model, raw):
    """Spectral normalisation of the band columns followed by MinMax scaling."""
    raw = np.atleast_2d(np.asarray(raw, dtype=float))
    if raw.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} features, got {raw.shape[1]}")
    x = raw.copy()
    if model.n_bands:
        x[:, :model.n_bands] = normalize_spectrum(x[:, :model.n_bands])
    if model.scaler is not None:
        x = apply_minmax(model.scaler, x)
    return x


def mlp_predict(model, rows):
    """Predict targets for raw feature rows; the ``gpp`` output is clamped at zero."""
    out = forward(model, prepare_inputs(model, rows), rowwise=True)
    if model.target_scaler is not None:
        out = out * (model.target_scaler.max - model.target_scaler.min) + model.target_scaler.min
    if "gpp" in model.targets:
        j = model.targets.index("gpp")
        out[:, j] = np.maximum(out[:, j], 0.0)
    return out


def mlp_gradient_check(model, x, y, epsilon=1e-5):
    """Max relative error between analytic and central-difference gradients.

    ``x`` are scaled inputs (one row or a few), ``y`` the targets.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must lie in [1e-7, 1e-3]")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    _, analytic = loss_and_grad(model, x, y)
    probe = model.copy()
    worst = 0.0
    for k in range(probe.params.size):
        orig = probe.params[k]
        probe.params[k] = orig + epsilon
        up = float(np.mean((forward(probe, x) - y) ** 2))
        probe.params[k] = orig - epsilon
        dn = float(np.mean((forward(probe, x) - y) ** 2))
        probe.params[k] = orig
        numeric = (up - dn) / (2.0 * epsilon)
        scale = max(abs(numeric), abs(analytic[k]), 1e-8)
        worst = max(worst, abs(numeric - analytic[k]) / scale)
    return worst


@dataclass
class TrainReport:
    n_train: int
    n_val: int
    n_test: int
    train_loss: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    r2_train: dict = field(default_factory=dict)
    r2_test: dict = field(default_factory=dict)
    rmse_train: dict = field(default_factory=dict)
    rmse_test: dict = field(default_factory=dict)
    seed: int = 0
    epochs_run: int = 0
    best_epoch: int = 0
    wall_time_s: float = 0.0

    def to_json(self):
        return dict(self.__dict__)


def r2_score(y, pred):
    """Coefficient of determination."""
    y = np.asarray(y, dtype=float)
    ss_res = np.sum((y - pred) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    return float(1.0 - ss_res / ss_tot) if ss_tot > 0 else float("nan")


def _score(report, model, x_raw, y, which):
    if len(y) == 0:
        return
    pred = mlp_predict(model, x_raw)
    for j, name in enumerate(model.targets):
        getattr(report, f"r2_{which}")[name] = r2_score(y[:, j], pred[:, j])
        getattr(report, f"rmse_{which}")[name] = float(np.sqrt(np.mean((y[:, j] - pred[:, j]) ** 2)))


DEFAULT_HYPER = {"batch": 32, "epochs": 200, "lr": 1e-3, "seed": 1, "patience": 10, "monitor": "train", "tol": 1e-5,
                 "val_fraction": 0.1, "beta1": 0.9, "beta2": 0.999, "eps": 1e-8}


def mlp_train(train, test, arch, hyper=None, targets=("gpp",), n_bands=0, sensor_name="",
              band_ids=(), layout="case2"):
    """Train an MLP regressor.

    Parameters
    ----------
    train, test : tuple (X_raw, Y)
        Raw feature rows (bands first, ``n_bands`` of them) and target rows.
        The test pair is used for reporting only.
    arch : sequence of int
        Hidden layer widths.
    hyper : dict
        Overrides for ``DEFAULT_HYPER`` (batch, epochs, lr, seed, patience, ...).

    Early stopping watches a held-out slice (``val_fraction``) of the
    training rows and restores the best weights.
    """
    hp = {**DEFAULT_HYPER, **(hyper or {})}
    t0 = time.perf_counter()
    x_raw, y = (np.asarray(a, dtype=float) for a in train)
    y = y.reshape(len(y), -1)
    x_test, y_test = (np.asarray(a, dtype=float) for a in test)
    y_test = y_test.reshape(len(y_test), y.shape[1])
    if not (np.isfinite(x_raw).all() and np.isfinite(y).all()):
        raise ValueError("training data contain non-finite values")

    rng = np.random.default_rng(hp["seed"])
    n = len(y)
    perm = rng.permutation(n)
    n_val = int(np.floor(n * hp["val_fraction"])) if hp["epochs"] > 0 else 0
    val_idx, fit_idx = np.sort(perm[:n_val]), np.sort(perm[n_val:])

    model = MlpModel.random((x_raw.shape[1], *arch, y.shape[1]), seed=hp["seed"], zero_output=True,
                            targets=tuple(targets), n_bands=n_bands, sensor_name=sensor_name,
                            band_ids=tuple(band_ids), layout=layout)
    probe = x_raw[fit_idx].copy()
    if n_bands:
        probe[:, :n_bands] = normalize_spectrum(probe[:, :n_bands])
    model.scaler = fit_minmax(probe)
    model.target_scaler = fit_minmax(y[fit_idx])
    x = prepare_inputs(model, x_raw)
    ys = apply_minmax(model.target_scaler, y)
    model.biases[-1][...] = ys[fit_idx].mean(axis=0)

    report = TrainReport(n_train=len(fit_idx), n_val=n_val, n_test=len(y_test), seed=int(hp["seed"]))
    m = np.zeros_like(model.params)
    v = np.zeros_like(model.params)
    b1, b2, lr, eps = hp["beta1"], hp["beta2"], hp["lr"], hp["eps"]
    step = 0
    best = (np.inf, model.params.copy(), 0)
    since_best = 0
    best_watched = np.inf
    xf, yf = x[fit_idx], ys[fit_idx]
    xv, yv = x[val_idx], ys[val_idx]
    bs = int(hp["batch"])
    for epoch in range(int(hp["epochs"])):
        order = rng.permutation(len(fit_idx))
        total = 0.0
        for start in range(0, len(order), bs):
            idx = order[start:start + bs]
            loss, grad = loss_and_grad(model, xf[idx], yf[idx])
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            step += 1
            m *= b1
            m += (1 - b1) * grad
            v *= b2
            v += (1 - b2) * grad * grad
            mhat = m / (1 - b1 ** step)
            vhat = v / (1 - b2 ** step)
            model.params -= lr * mhat / (np.sqrt(vhat) + eps)
            total += loss * len(idx)
        train_loss = total / len(order)
        if not np.isfinite(train_loss):
            raise DivergenceError(epoch)
        report.train_loss.append(train_loss)
        val_loss = float(np.mean((forward(model, xv) - yv) ** 2)) if n_val else train_loss
        report.val_loss.append(val_loss)
        report.epochs_run = epoch + 1
        if val_loss < best[0]:
            best = (val_loss, model.params.copy(), epoch + 1)
        watched = val_loss if hp["monitor"] == "val" else train_loss
        if watched < best_watched - hp["tol"]:
            since_best = 0
        else:
            since_best += 1
        best_watched = min(best_watched, watched)
        if since_best >= hp["patience"]:
            break
    if report.epochs_run:
        model.params[...] = best[1]
        report.best_epoch = best[2]

    _score(report, model, x_raw[fit_idx], y[fit_idx], "train")
    _score(report, model, x_test, y_test, "test")
    report.wall_time_s = time.perf_counter() - t0
    return model, report
