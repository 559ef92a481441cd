import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hybridgpp.forward.params import SCENARIO_FIELDS  # noqa: E402
from hybridgpp.sampling import default_space, design_to_batch, generate_training_set, lhs_sample  # noqa: E402
from hybridgpp.spectral import load_sensor  # noqa: E402


@pytest.fixture
def mid_batch():
    """A single mid-range scenario as a batch dict."""
    b = {"cab": 40.0, "cca": 10.0, "cant": 1.0, "cdm": 0.012, "cw": 0.009, "cs": 0.0, "n_struct": 1.5,
         "lai": 3.0, "hc": 1.0, "lidf_a": -0.35, "lidf_b": -0.15, "smc": 0.25, "brightness": 0.5,
         "lat_shape": 25.0, "lon_shape": 45.0, "vcmax25": 73.8}
    return {k: np.array([v]) for k, v in b.items()}


def random_batch(n, seed):
    space = default_space()
    batch, meteo, sza = design_to_batch(space, lhs_sample(space, n, seed))
    return batch, meteo, sza


@pytest.fixture(scope="session")
def sentinel2():
    return load_sensor("sentinel2")


@pytest.fixture(scope="session")
def small_corpus(sentinel2):
    """A 3000 + 200 row corpus for quick training tests."""
    return generate_training_set(default_space(), 3000, 200, 7, sentinel2)


__all__ = ["random_batch", "SCENARIO_FIELDS"]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
