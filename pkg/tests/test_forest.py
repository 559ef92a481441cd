import numpy as np
import pytest

from hybridgpp.ml import forest_predict, forest_train, low_gpp_weights, r2_score


def data(n=400, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, (n, 4))
    y = 10 * x[:, 0] + 5 * np.sin(6 * x[:, 1]) + rng.normal(0, 0.5, n)
    return x, y


def test_single_tree_memorises():
    x, y = data(200)
    model = forest_train((x, y), {"trees": 1, "bootstrap": False}, target="y")
    assert r2_score(y, forest_predict(model, x)) == 1.0


def test_constant_targets():
    x, _ = data(100)
    model = forest_train((x, np.full(100, 3.5)), {"trees": 5})
    assert np.all(forest_predict(model, x) == 3.5)


def test_max_depth_zero_rejected():
    x, y = data(50)
    with pytest.raises(ValueError):
        forest_train((x, y), {"max_depth": 0})
    with pytest.raises(ValueError):
        forest_train((x[:0], y[:0]))


def test_depth_limit():
    x, y = data(300)
    shallow = forest_train((x, y), {"trees": 3, "max_depth": 2})
    assert all(t.n_nodes <= 7 for t in shallow.trees)


def test_min_leaf():
    x, y = data(300)
    model = forest_train((x, y), {"trees": 1, "min_leaf": 40})
    t = model.trees[0]
    leaves = t.feature < 0
    assert leaves.sum() <= 300 // 40


def test_deterministic_and_thread_invariant():
    x, y = data(300)
    a = forest_predict(forest_train((x, y), {"trees": 6, "seed": 2}), x)
    b = forest_predict(forest_train((x, y), {"trees": 6, "seed": 2}, threads=3), x)
    assert np.array_equal(a, b)


def test_overfits_training_rows():
    x, y = data(600)
    xt, yt = data(300, seed=1)
    model = forest_train((x, y), {"trees": 20}, target="y")
    assert r2_score(y, forest_predict(model, x)) > r2_score(yt, forest_predict(model, xt))


def test_more_trees_do_not_hurt():
    x, y = data(500)
    xt, yt = data(400, seed=9)
    mse = {}
    for k in (2, 30):
        mse[k] = np.mean([np.mean((forest_predict(forest_train((x, y), {"trees": k, "seed": s}, target="y"), xt) - yt) ** 2)
                          for s in range(3)])
    assert mse[30] <= mse[2] * 1.02


def test_low_gpp_weights_shift_bootstrap():
    gpp = np.r_[np.zeros(50), np.full(450, 20.0)]
    w = low_gpp_weights(gpp, 20.0)
    assert np.all(w[:50] == 20) and np.all(w[50:] == 1)
    x = np.c_[gpp, np.zeros(500)]
    plain = forest_train((x, gpp), {"trees": 1, "seed": 1})
    weighted = forest_train((x, gpp), {"trees": 1, "seed": 1, "sample_weights": w})
    assert weighted.hyper["weighted"] and not plain.hyper["weighted"]


def test_gpp_clamped_and_shape_checked():
    x, y = data(100)
    model = forest_train((x, y - 100.0), {"trees": 2})
    assert np.all(forest_predict(model, x) == 0.0)
    with pytest.raises(ValueError):
        forest_predict(model, x[:, :3])
