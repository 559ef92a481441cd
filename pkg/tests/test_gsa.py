import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridgpp.errors import InsufficientDataError
from hybridgpp.gsa import (PawnConfig, conditioning_values, ks_critical, ks_statistic, pawn_design,
                           pawn_from_outputs, pawn_indices, write_report)
from hybridgpp.sampling import ParameterSpace
from oracles import ks_brute

SPACE3 = ParameterSpace(("x0", "x1", "dummy"), (0.0, 0.0, 0.0), (1.0, 2.0, 1.0))


def additive(x):
    return x[:, 0] + x[:, 1] ** 2


def test_ks_examples():
    assert ks_statistic([1, 2, 3], [1, 2, 3]) == 0.0
    assert ks_statistic([0, 0, 0], [1, 1, 1]) == 1.0
    assert ks_statistic([1, 2], [1, 2, 3]) == 1 / 3
    with pytest.raises(ValueError):
        ks_statistic([], [1.0])


@settings(max_examples=80, deadline=None)
@given(a=st.lists(st.integers(-5, 5), min_size=1, max_size=15), b=st.lists(st.integers(-5, 5), min_size=1,
                                                                           max_size=15))
def test_ks_matches_brute_force(a, b):
    assert ks_statistic(a, b) == pytest.approx(ks_brute(a, b), abs=1e-15)
    assert ks_statistic(a, b) == ks_statistic(b, a)
    assert (ks_statistic(a, b) == 0) == (sorted(a) == sorted(b))


def test_critical_value():
    assert ks_critical(500, 100) == pytest.approx(1.3581 * np.sqrt(600 / 50000), rel=1e-3)


def test_conditioning_values_span_range():
    np.testing.assert_allclose(conditioning_values(0.0, 9.0, 10), np.arange(10))


def test_budget():
    assert PawnConfig(1000, 400, 30).budget(15) == 1000 + 15 * 30 * 400
    with pytest.raises(ValueError):
        PawnConfig(nu=1)


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_ignored_input_below_threshold(seed):
    res = pawn_indices(additive, SPACE3, PawnConfig(500, 100, 10, seed=seed))
    assert not res.influential[2]
    assert res.influential[0] and res.influential[1]
    assert np.all((res.indices >= 0) & (res.indices <= 1))


def test_identity_model():
    space = ParameterSpace(("x", "y"), (0.0, 0.0), (1.0, 1.0))
    res = pawn_indices(lambda x: x[:, 0], space, PawnConfig(200, 100, 10))
    assert res.index_of("x") > 0.9
    assert res.ranking()[0] == "x"


def test_deterministic_and_thread_invariant():
    cfg = PawnConfig(300, 50, 5, seed=3)
    a = pawn_indices(additive, SPACE3, cfg)
    b = pawn_indices(additive, SPACE3, cfg, threads=3)
    assert np.array_equal(a.indices, b.indices)


def test_conditioning_order_invariance():
    cfg = PawnConfig(300, 50, 6, seed=2)
    x_u, x_c, cond = pawn_design(SPACE3, cfg)
    y_u = additive(x_u)
    y_c = additive(x_c.reshape(-1, 3)).reshape(3, 6, 50)
    a = pawn_from_outputs(SPACE3.names, y_u, y_c, cond, cfg)
    perm = np.random.default_rng(0).permutation(6)
    b = pawn_from_outputs(SPACE3.names, y_u, y_c[:, perm], cond[:, perm], cfg)
    assert np.array_equal(a.indices, b.indices)


def test_failed_runs_excluded_and_counted():
    def flaky(x):
        y = additive(x)
        y[::50] = np.nan
        return y
    res = pawn_indices(flaky, SPACE3, PawnConfig(300, 50, 5))
    assert res.n_failed > 0
    assert np.all(np.isfinite(res.indices))


def test_subrange_too_narrow():
    cfg = PawnConfig(300, 50, 5, subrange=(100.0, 200.0))
    with pytest.raises(InsufficientDataError):
        pawn_indices(additive, SPACE3, cfg)


def test_subrange_skips_sparse_conditioning_values():
    cfg = PawnConfig(400, 60, 6, subrange=(3.0, np.inf))
    res = pawn_indices(additive, SPACE3, cfg)
    # x1 = 0 caps the output at 1, so that conditioning value is skipped
    assert np.isnan(res.ks[1, 0])
    assert np.isfinite(res.indices).all()


def test_report(tmp_path):
    cfg = PawnConfig(300, 50, 5)
    full = pawn_indices(additive, SPACE3, cfg)
    write_report(tmp_path / "r.csv", full, {"low": full})
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0].startswith("input,index,rank")
    assert len(lines) == 4
