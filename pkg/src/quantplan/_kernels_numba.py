"""Numba-jitted kernels: the default backend when numba is importable.

Semantics and float results are bit-identical to ``_kernels_numpy``;
the jitted loops fuse passes and skip numpy temporaries.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def pair_sums(base_acc, base_lat, item_acc, item_lat):
    n = base_acc.shape[0]
    m = item_acc.shape[0]
    acc = np.empty(n * m, dtype=np.float64)
    lat = np.empty(n * m, dtype=np.float64)
    k = 0
    for i in range(n):
        ba = base_acc[i]
        bl = base_lat[i]
        for j in range(m):
            acc[k] = ba + item_acc[j]
            lat[k] = bl + item_lat[j]
            k += 1
    return acc, lat


@njit(cache=True)
def keep_strict_increase(values):
    n = values.shape[0]
    keep = np.zeros(n, dtype=np.bool_)
    best = -np.inf
    for i in range(n):
        v = values[i]
        if v > best:
            keep[i] = True
            best = v
    return keep
