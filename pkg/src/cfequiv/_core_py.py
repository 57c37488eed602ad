"""Pure-numpy implementations of the hot pairwise kernels.

Same contract as the compiled twin ``cfequiv._corex``; one of the two is
re-exported by ``cfequiv._backend``.  Squared norms accumulate the coordinate
squares in index order for d < 6 and with Neumaier compensation for d >= 6,
matching the compiled code.

Kernel family codes: 0 = stable, 1 = laplace, 2 = energy.
"""

from __future__ import annotations

import numpy as np

KAHAN_MIN_DIM = 6

STABLE = 0
LAPLACE = 1
ENERGY = 2


def _row_sq_plain(block: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", block, block)


def _row_sq_kahan(block: np.ndarray) -> np.ndarray:
    # Neumaier-compensated sum of squares along the last axis.
    acc = np.zeros(block.shape[0])
    comp = np.zeros(block.shape[0])
    for k in range(block.shape[1]):
        v = block[:, k] * block[:, k]
        t = acc + v
        comp += np.where(np.abs(acc) >= np.abs(v), (acc - t) + v, (v - t) + acc)
        acc = t
    return acc + comp


def _row_sq(block: np.ndarray) -> np.ndarray:
    if block.shape[1] >= KAHAN_MIN_DIM:
        return _row_sq_kahan(block)
    return _row_sq_plain(block)


def sqdist_diff_tri(x: np.ndarray) -> np.ndarray:
    """Packed upper triangle (i < j, row-major) of ||x_i - x_j||^2."""
    n = x.shape[0]
    if n < 2:
        return np.zeros(0)
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        m = n - 1 - i
        out[pos : pos + m] = _row_sq(x[i] - x[i + 1 :])
        pos += m
    return out


def sqdist_sum_tri(x: np.ndarray) -> np.ndarray:
    """Packed upper triangle (i < j, row-major) of ||x_i + x_j||^2."""
    n, d = x.shape
    if n < 2:
        return np.zeros(0)
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        m = n - 1 - i
        out[pos : pos + m] = _row_sq(x[i] + x[i + 1 :])
        pos += m
    return out


def sqdist_cross(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Full matrix of ||x_i - y_j||^2, shape (len(x), len(y))."""
    n, m = x.shape[0], y.shape[0]
    out = np.empty((n, m))
    for i in range(n):
        out[i] = _row_sq(x[i] - y)
    return out


def sqdist_cross_tri(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Packed triangles of the cross distances for paired samples.

    For i < j in the same row-major packed order as the ``*_tri`` builders:
    ``upper[k] = ||x_i - y_j||^2`` and ``lower[k] = ||x_j - y_i||^2``.
    Together they cover all ordered pairs i != j of C(x_i - y_j).
    """
    n = x.shape[0]
    if n < 2:
        return np.zeros(0), np.zeros(0)
    upper = np.empty(n * (n - 1) // 2)
    lower = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        m = n - 1 - i
        upper[pos : pos + m] = _row_sq(x[i] - y[i + 1 :])
        lower[pos : pos + m] = _row_sq(x[i + 1 :] - y[i])
        pos += m
    return upper, lower


_SUM_CHUNK = 1 << 21


def kernel_sums(
    sq: np.ndarray, families: np.ndarray, gammas: np.ndarray, scales: np.ndarray
) -> np.ndarray:
    """Sum of each kernel over all entries of ``sq`` in one logical pass."""
    flat = np.asarray(sq, dtype=np.float64).ravel()
    k = len(families)
    out = np.zeros(k)
    for lo in range(0, flat.size, _SUM_CHUNK):
        chunk = flat[lo : lo + _SUM_CHUNK]
        for s in range(k):
            out[s] += float(
                apply_kernel(chunk, int(families[s]), float(gammas[s]), float(scales[s])).sum()
            )
    return out


def apply_kernel(sq: np.ndarray, family: int, gamma: float, scale: float) -> np.ndarray:
    """Evaluate the weight-kernel CF on an array of squared norms.

    stable:  exp(-(scale^2 sq)^(gamma/2))
    laplace: (1 + scale^2 sq)^(-gamma)
    energy:  -(scale^2 sq)^(gamma/2)
    """
    sq = np.asarray(sq, dtype=np.float64)
    s2 = scale * scale
    if family == STABLE or family == ENERGY:
        v = s2 * sq
        if gamma == 2.0:
            t = v
        elif gamma == 1.0:
            t = np.sqrt(v)
        elif gamma == 0.5:
            t = np.sqrt(np.sqrt(v))
        elif gamma == 1.5:
            r = np.sqrt(v)
            t = r * np.sqrt(r)
        else:
            t = np.power(v, 0.5 * gamma)
        return np.exp(-t) if family == STABLE else -t
    u = 1.0 + s2 * sq
    if gamma == 1.0:
        return 1.0 / u
    if gamma == 2.0:
        return 1.0 / (u * u)
    if gamma == 4.0:
        uu = u * u
        return 1.0 / (uu * uu)
    if gamma == 0.5:
        return 1.0 / np.sqrt(u)
    if gamma == 0.25:
        return 1.0 / np.sqrt(np.sqrt(u))
    return np.power(u, -gamma)
