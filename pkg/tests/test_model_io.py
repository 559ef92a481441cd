import json

import numpy as np
import pytest

from hybridgpp.errors import ModelLoadError
from hybridgpp.ml import (features, forest_predict, forest_train, load_model, mlp_predict, mlp_train, save_model,
                          split_dataset)


@pytest.fixture(scope="module")
def trained(small_corpus):
    ts = small_corpus
    x = features.raw_features(ts)
    y = features.targets(ts, ("gpp", "lai"))
    tr, te = split_dataset(len(ts))
    kw = dict(n_bands=10, sensor_name=ts.sensor_name, band_ids=ts.band_ids)
    model, _ = mlp_train((x[tr], y[tr]), (x[te], y[te]), (20, 12), {"epochs": 3}, targets=("gpp", "lai"), **kw)
    return model, x


def test_round_trip_bit_identical(tmp_path, trained):
    model, x = trained
    save_model(model, tmp_path / "m.json")
    back = load_model(tmp_path / "m.json")
    rows = x[np.random.default_rng(0).choice(len(x), 100, replace=False)]
    assert np.array_equal(mlp_predict(model, rows), mlp_predict(back, rows))
    doc = json.loads((tmp_path / "m.json").read_text())
    assert doc["format_version"] == 1 and doc["targets"] == ["gpp", "lai"]
    assert doc["sizes"] == [18, 20, 12, 2] and doc["sensor_name"] == "sentinel2"
    assert len(doc["weights"]) == 3 and doc["scaler"]["min"]


def test_truncated_file(tmp_path, trained):
    model, _ = trained
    save_model(model, tmp_path / "m.json")
    text = (tmp_path / "m.json").read_text()
    (tmp_path / "bad.json").write_text(text[: len(text) // 2])
    with pytest.raises(ModelLoadError):
        load_model(tmp_path / "bad.json")


def test_version_and_schema_mismatch(tmp_path, trained):
    model, _ = trained
    save_model(model, tmp_path / "m.json")
    doc = json.loads((tmp_path / "m.json").read_text())
    (tmp_path / "v.json").write_text(json.dumps({**doc, "format_version": 99}))
    with pytest.raises(ModelLoadError, match="version"):
        load_model(tmp_path / "v.json")
    broken = dict(doc)
    del broken["weights"]
    (tmp_path / "s.json").write_text(json.dumps(broken))
    with pytest.raises(ModelLoadError):
        load_model(tmp_path / "s.json")
    with pytest.raises(ModelLoadError):
        load_model(tmp_path / "missing.json")


def test_subset_model_metadata(tmp_path, small_corpus):
    from hybridgpp.spectral import LANDSAT_COMMON
    ts = small_corpus
    cols = [ts.band_ids.index(b) for b in LANDSAT_COMMON]
    sub = ts.subset(np.arange(len(ts)))
    sub.bands, sub.band_ids, sub.sensor_name = ts.bands[:, cols], LANDSAT_COMMON, "sentinel2_subset"
    x = features.raw_features(sub)
    model, _ = mlp_train((x, sub.gpp), (x[:0], sub.gpp[:0]), (12, 12), {"epochs": 1}, n_bands=6,
                         sensor_name=sub.sensor_name, band_ids=sub.band_ids)
    save_model(model, tmp_path / "sub.json")
    doc = json.loads((tmp_path / "sub.json").read_text())
    assert doc["sensor_name"] == "sentinel2_subset" and doc["input_width"] == 14


def test_forest_round_trip(tmp_path, small_corpus):
    x = features.raw_features(small_corpus)
    model = forest_train((x[:500], small_corpus.gpp[:500]), {"trees": 3}, n_bands=10, sensor_name="sentinel2",
                         band_ids=small_corpus.band_ids)
    save_model(model, tmp_path / "f.json")
    back = load_model(tmp_path / "f.json")
    assert np.array_equal(forest_predict(model, x[:100]), forest_predict(back, x[:100]))
