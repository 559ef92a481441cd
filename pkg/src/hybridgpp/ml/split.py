import math

import numpy as np


def split_dataset(rows, fraction=0.85, seed=1):
    """Shuffle row indices and cut them into train/test index arrays.

    ``rows`` may be a row count or any sized collection.
    """
    n = rows if isinstance(rows, (int, np.integer)) else len(rows)
    if n < 20:
        raise ValueError(f"split_dataset needs at least 20 rows, got {n}")
    n_train = int(math.floor(n * fraction + 0.5))
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])
