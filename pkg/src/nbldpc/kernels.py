"""Gaussian binomials and the dimension-transition kernels of random subspaces.

Both kernels answer: a fixed subspace of dimension ``i`` meets a uniformly
random subspace of dimension ``j`` of GF(2)^m; what is the law of the
dimension ``k`` of their intersection (variable side) or sum (check side)?
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "gaussian_binomial",
    "log2_gaussian_binomial",
    "intersection_kernel",
    "sum_kernel",
    "KernelTable",
    "kernel_table",
]

_LN2 = math.log(2.0)


def gaussian_binomial(m: int, k: int) -> int:
    """Number of k-dimensional subspaces of GF(2)^m (0 outside 0 <= k <= m)."""
    if k < 0 or k > m:
        return 0
    num = den = 1
    for l in range(k):
        num *= (1 << m) - (1 << l)
        den *= (1 << k) - (1 << l)
    return num // den


@lru_cache(maxsize=None)
def log2_gaussian_binomial(m: int, k: int) -> float:
    if k < 0 or k > m:
        return -math.inf
    # log2(2^m - 2^l) = m + log2(1 - 2^(l-m))
    s = 0.0
    for l in range(k):
        s += (m - k) + (math.log1p(-(2.0 ** (l - m))) - math.log1p(-(2.0 ** (l - k)))) / _LN2
    return s


def _exp2(terms: list[float]) -> np.ndarray:
    a = np.array(terms, dtype=float)
    with np.errstate(over="ignore"):
        return np.where(np.isfinite(a), np.exp2(a), 0.0)


def intersection_kernel(m: int, i: int, j: int) -> np.ndarray:
    """P(dim(V ∩ U) = k), V fixed of dim i, U uniform of dim j; k = 0..m."""
    if not (0 <= i <= m and 0 <= j <= m):
        raise ValueError(f"dimensions ({i}, {j}) out of range for m={m}")
    lg = log2_gaussian_binomial
    logs = [
        lg(i, k) + lg(m - i, j - k) + (i - k) * (j - k) - lg(m, j)
        if 0 <= k <= min(i, j) and j - k <= m - i
        else -math.inf
        for k in range(m + 1)
    ]
    return _exp2(logs)


def sum_kernel(m: int, i: int, j: int) -> np.ndarray:
    """P(dim(V + U) = k), V fixed of dim i, U uniform of dim j; k = 0..m."""
    if not (0 <= i <= m and 0 <= j <= m):
        raise ValueError(f"dimensions ({i}, {j}) out of range for m={m}")
    lg = log2_gaussian_binomial
    logs = [
        lg(m - i, m - k) + lg(i, k - j) + (k - i) * (k - j) - lg(m, m - j)
        if max(i, j) <= k <= min(i + j, m)
        else -math.inf
        for k in range(m + 1)
    ]
    return _exp2(logs)


@dataclass(frozen=True)
class KernelTable:
    """``intersect[i, j, k]`` and ``sum[i, j, k]`` for one ambient dimension."""

    m: int
    intersect: np.ndarray
    sum: np.ndarray


@lru_cache(maxsize=None)
def kernel_table(m: int) -> KernelTable:
    n = m + 1
    I = np.zeros((n, n, n))
    S = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            I[i, j] = intersection_kernel(m, i, j)
            S[i, j] = sum_kernel(m, i, j)
    I.setflags(write=False)
    S.setflags(write=False)
    return KernelTable(m, I, S)
