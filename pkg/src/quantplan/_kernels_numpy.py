"""Pure-numpy kernels: the fallback backend.

Must stay bit-identical to the numba twins in ``_kernels_numba``; both
perform the same float additions in the same order.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def pair_sums(base_acc, base_lat, item_acc, item_lat):
    """Objective sums of every (front entry, candidate point) pair.

    Output index k = i * len(item) + j, i.e. front-major order.
    """
    acc = (base_acc[:, None] + item_acc[None, :]).ravel()
    lat = (base_lat[:, None] + item_lat[None, :]).ravel()
    return acc, lat


def keep_strict_increase(values):
    """Mask that keeps an element iff it exceeds the running maximum.

    Applied to accuracy sums already permuted into scan order (latency
    ascending, accuracy descending, tie-break ascending), the surviving
    elements are exactly the nondominated, deduplicated front.
    """
    n = values.shape[0]
    keep = np.zeros(n, dtype=np.bool_)
    if n == 0:
        return keep
    keep[0] = True
    run = np.maximum.accumulate(values)
    keep[1:] = values[1:] > run[:-1]
    return keep
