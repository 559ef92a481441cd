"""Versioned JSON export of trained models.

Floats are written with ``repr`` precision, so a save/load round trip
reproduces predictions bit for bit.
"""
import json
import os

import numpy as np

from ..errors import ModelLoadError
from ..spectral import MinMaxScaler
from .forest import ForestModel, Tree
from .mlp import MlpModel

FORMAT_VERSION = 1


def _mlp_to_json(model):
    return {
        "kind": "mlp",
        "format_version": FORMAT_VERSION,
        "sizes": list(model.sizes),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "scaler": model.scaler.to_json() if model.scaler is not None else None,
        "target_scaler": model.target_scaler.to_json() if model.target_scaler is not None else None,
        "targets": list(model.targets),
        "n_bands": model.n_bands,
        "sensor_name": model.sensor_name,
        "band_ids": list(model.band_ids),
        "layout": model.layout,
        "input_width": model.n_inputs,
    }


def _forest_to_json(model):
    return {
        "kind": "forest",
        "format_version": FORMAT_VERSION,
        "hyper": model.hyper,
        "n_inputs": model.n_inputs,
        "input_width": model.n_inputs,
        "n_bands": model.n_bands,
        "targets": [model.target],
        "sensor_name": model.sensor_name,
        "band_ids": list(model.band_ids),
        "layout": model.layout,
        "trees": [{"feature": t.feature.tolist(), "threshold": t.threshold.tolist(), "left": t.left.tolist(),
                   "right": t.right.tolist(), "value": t.value.tolist()} for t in model.trees],
    }


def model_to_json(model):
    if isinstance(model, MlpModel):
        return _mlp_to_json(model)
    if isinstance(model, ForestModel):
        return _forest_to_json(model)
    raise TypeError(f"cannot serialise {type(model).__name__}")


def save_model(model, path):
    """Write ``model`` to ``path`` atomically (temp file + rename)."""
    doc = model_to_json(model)
    tmp = f"{path}.tmp"
    with open(tmp, "w") as f:
        json.dump(doc, f, separators=(",", ":"))
        f.write("\n")
    os.replace(tmp, path)


def _scaler(d):
    return None if d is None else MinMaxScaler.from_json(d)


def model_from_json(doc):
    if not isinstance(doc, dict):
        raise ModelLoadError("model document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelLoadError(f"unsupported model format version {doc.get('format_version')!r}")
    try:
        if doc["kind"] == "mlp":
            sizes = tuple(int(s) for s in doc["sizes"])
            parts = []
            for w, b in zip(doc["weights"], doc["biases"]):
                parts += [np.asarray(w, dtype=float).ravel(), np.asarray(b, dtype=float)]
            model = MlpModel(sizes, np.concatenate(parts), _scaler(doc["scaler"]), _scaler(doc["target_scaler"]),
                             tuple(doc["targets"]), int(doc["n_bands"]), doc["sensor_name"], tuple(doc["band_ids"]),
                             doc["layout"])
            for w, s in zip(model.weights, zip(sizes[:-1], sizes[1:])):
                if w.shape != s:
                    raise ModelLoadError("layer array shapes do not match sizes")
            return model
        if doc["kind"] == "forest":
            trees = [Tree(np.asarray(t["feature"], dtype=np.int64), np.asarray(t["threshold"], dtype=float),
                          np.asarray(t["left"], dtype=np.int64), np.asarray(t["right"], dtype=np.int64),
                          np.asarray(t["value"], dtype=float)) for t in doc["trees"]]
            if not trees:
                raise ModelLoadError("forest has no trees")
            return ForestModel(trees, doc["hyper"], int(doc["n_inputs"]), int(doc["n_bands"]), doc["targets"][0],
                               doc["sensor_name"], tuple(doc["band_ids"]), doc["layout"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ModelLoadError(f"malformed model document: {exc}") from exc
    raise ModelLoadError(f"unknown model kind {doc.get('kind')!r}")


def load_model(path):
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"{path}: not valid JSON ({exc.msg})") from exc
    except OSError as exc:
        raise ModelLoadError(f"{path}: {exc}") from exc
    return model_from_json(doc)


def predict(model, rows):
    """Dispatch to the model family's predictor; always returns (n, n_targets)."""
    from .forest import forest_predict
    from .mlp import mlp_predict
    if isinstance(model, MlpModel):
        return mlp_predict(model, rows)
    return forest_predict(model, rows)[:, None]


def model_targets(model):
    return tuple(model.targets) if isinstance(model, MlpModel) else (model.target,)
