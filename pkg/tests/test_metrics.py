import numpy as np
import pytest

from hybridgpp.errors import DegenerateInputError
from hybridgpp.metrics import evaluate_files, metrics, metrics_by_field, write_report


def test_identity():
    r = metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert (r.r2, r.rmse, r.bias) == (1.0, 0.0, 0.0)


def test_shift():
    ref = np.array([1.0, 2.0, 5.0, 7.0])
    r = metrics(ref + 1, ref)
    assert r.r2 == pytest.approx(1.0) and r.rmse == pytest.approx(1.0) and r.bias == pytest.approx(1.0)
    assert r.r2_one_to_one < 1.0


def test_hand_example():
    r = metrics([1, 2, 3], [1, 2, 4])
    assert r.rmse == pytest.approx(np.sqrt(1 / 3)) and r.bias == pytest.approx(-1 / 3)


def test_constant_reference():
    with pytest.raises(DegenerateInputError) as info:
        metrics([1.0, 2.0], [3.0, 3.0])
    assert info.value.rmse == pytest.approx(np.sqrt(2.5)) and info.value.bias == pytest.approx(-1.5)
    r = metrics([1.0, 2.0], [3.0, 3.0], strict=False)
    assert r.r2 is None and r.rmse > 0


def test_length_checks():
    with pytest.raises(ValueError):
        metrics([1.0], [1.0])
    with pytest.raises(ValueError):
        metrics([1.0, 2.0], [1.0, 2.0, 3.0])


def test_affine_invariance():
    rng = np.random.default_rng(0)
    ref = rng.random(50)
    pred = ref + rng.normal(0, 0.1, 50)
    a = metrics(pred, ref)
    b = metrics(3 * pred + 2, ref)
    assert a.r2 == pytest.approx(b.r2) and a.r2 <= 1
    c = metrics(pred + 5, ref + 5)
    assert c.rmse == pytest.approx(a.rmse)


def test_files_and_per_field(tmp_path):
    (tmp_path / "p.csv").write_text("field_id,date,gpp_gc_m2_d\na,d1,1\na,d2,2\nb,d1,3\nb,d2,5\nc,d1,7\n")
    (tmp_path / "r.csv").write_text("field_id,date,gpp_gc_m2_d\na,d1,1\na,d2,2.5\nb,d1,3\nb,d2,4\nz,d1,1\n")
    r = evaluate_files(tmp_path / "p.csv", tmp_path / "r.csv")
    assert r.n == 4 and set(r.per_field) == {"a", "b"}
    write_report(r, tmp_path / "e.json")
    assert "rmse" in (tmp_path / "e.json").read_text()
    assert "all" in r.table()
    r2 = metrics_by_field(["a", "a", "b"], [1.0, 2.0, 3.0], [1.0, 2.5, 3.5])
    assert r2.per_field["b"]["n"] == 1
