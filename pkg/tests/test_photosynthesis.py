import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridgpp.errors import DomainError, RangeError
from hybridgpp.forward import leaf_photosynthesis
from hybridgpp.forward.photosynthesis import vcmax_at
from oracles import collatz_scalar


def test_dark_leaf_fixes_nothing():
    assert leaf_photosynthesis(0.0, 25.0, 100.0) == 0.0


def test_high_light_matches_scalar_oracle():
    a = leaf_photosynthesis(2000.0, 25.0, 100.0)
    ref, (wc, we, ws) = collatz_scalar(2000.0, 25.0, 100.0)
    assert a == pytest.approx(ref, rel=0.01)
    assert wc < we and wc < ws  # Rubisco-limited


def test_zero_capacity():
    np.testing.assert_array_equal(leaf_photosynthesis(np.array([0.0, 100.0, 2000.0]), 25.0, 0.0), 0.0)


def test_negative_apar_rejected():
    with pytest.raises(DomainError):
        leaf_photosynthesis(-1.0, 25.0, 100.0)


def test_temperature_range():
    with pytest.raises(RangeError):
        leaf_photosynthesis(100.0, 55.0, 100.0)


@settings(max_examples=80, deadline=None)
@given(apar=st.floats(0, 2500), d=st.floats(0, 500), ta=st.floats(-10, 50), v=st.floats(0, 200))
def test_monotone_and_bounded(apar, d, ta, v):
    a1 = leaf_photosynthesis(apar, ta, v)
    a2 = leaf_photosynthesis(apar + d, ta, v)
    assert 0.0 <= a1 <= a2 + 1e-12
    assert a2 <= vcmax_at(v, ta) + 1e-9
    ref, _ = collatz_scalar(apar, ta, v) if v > 0 and apar > 0 else (0.0, None)
    assert a1 == pytest.approx(max(ref, 0.0), rel=1e-6, abs=1e-9)


def test_vanishes_with_light():
    assert leaf_photosynthesis(1e-9, 25.0, 100.0) < 1e-9
