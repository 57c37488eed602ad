"""Empirical CF-distance statistics for the three hypotheses.

All three are U-statistics over the pairwise kernel values; everything runs
in O(n^2) time and, through row-blocked accumulation, in O(n) extra memory
beyond the packed triangles, so the size-B random-approximation thresholds
(B = 5000) stay cheap.  The ``*_multi`` helpers evaluate several kernel specs
against one set of pairwise squared distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .kernels import KernelSpec, apply_to_sqnorm, as_paired_sample, as_sample, as_two_sample

_BLOCK_ROWS = 512


def _spec_arrays(specs: Sequence[KernelSpec]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    fams = np.array([s._code() for s in specs], dtype=np.int64)
    gams = np.array([s.gamma for s in specs])
    scs = np.array([s.scale for s in specs])
    return fams, gams, scs


def symmetry_stat_multi(x, specs: Sequence[KernelSpec]) -> list[float]:
    """Symmetry distance for several kernels on shared pairwise distances."""
    xa = as_sample(x)
    n = xa.shape[0]
    fams, gams, scs = _spec_arrays(specs)
    sums_d = _backend.kernel_sums(_backend.sqdist_diff_tri(xa), fams, gams, scs)
    sums_s = _backend.kernel_sums(_backend.sqdist_sum_tri(xa), fams, gams, scs)
    norm = n * (n - 1)
    return [(sums_d[s] - sums_s[s]) / norm for s in range(len(specs))]


def symmetry_stat(spec: KernelSpec, x) -> float:
    """U-statistic (2n(n-1))^-1 sum_{i != j} {C(x_i-x_j) - C(x_i+x_j)}."""
    return symmetry_stat_multi(x, [spec])[0]


def homogeneity_stat_multi(x, y, specs: Sequence[KernelSpec]) -> list[float]:
    """Two-sample distance for several kernels on shared pairwise distances.

    The cross term is accumulated over the same packed pair order as the
    within terms, so identical samples cancel termwise to an exact zero.
    """
    xa, ya = as_two_sample(x, y)
    n = xa.shape[0]
    fams, gams, scs = _spec_arrays(specs)
    within = _backend.kernel_sums(_backend.sqdist_diff_tri(xa), fams, gams, scs)
    within = within + _backend.kernel_sums(_backend.sqdist_diff_tri(ya), fams, gams, scs)
    upper, lower = _backend.sqdist_cross_tri(xa, ya)
    cross = _backend.kernel_sums(upper, fams, gams, scs)
    cross = cross + _backend.kernel_sums(lower, fams, gams, scs)
    return [2.0 * (within[s] - cross[s]) / (n * (n - 1)) for s in range(len(specs))]


def homogeneity_stat(spec: KernelSpec, x, y) -> float:
    """U-statistic (n(n-1))^-1 sum_{i != j} {C(x_i-x_j)+C(y_i-y_j)-2C(x_i-y_j)}."""
    return homogeneity_stat_multi(x, y, [spec])[0]


@dataclass(frozen=True)
class IndependenceComponents:
    """The four U-statistics of the independence distance and their composition.

    ``stat = u1 + u2*u3 - 2*u4``; u1 pairs the two kernels on matched index
    pairs, u2 and u3 are the marginal pair means, and u4 is the degree-3
    cross term over pairwise-distinct triples.
    """

    u1: float
    u2: float
    u3: float
    u4: float

    @property
    def stat(self) -> float:
        return self.u1 + self.u2 * self.u3 - 2.0 * self.u4


def indep_rowstats(
    spec_p: KernelSpec, spec_q: KernelSpec, x: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Off-diagonal row sums A_i, B_i and Hadamard row sums H_i.

    A_i = sum_{j != i} Cp_ij, B_i analogous for Cq, H_i = sum_{j != i} Cp_ij Cq_ij.
    Computed in row blocks without materializing the full Gram matrices.
    """
    n = x.shape[0]
    a = np.empty(n)
    b = np.empty(n)
    h = np.empty(n)
    p0 = spec_p.at_zero
    q0 = spec_q.at_zero
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        gp = apply_to_sqnorm(spec_p, _backend.sqdist_cross(x[lo:hi], x))
        gq = apply_to_sqnorm(spec_q, _backend.sqdist_cross(y[lo:hi], y))
        a[lo:hi] = gp.sum(axis=1) - p0
        b[lo:hi] = gq.sum(axis=1) - q0
        h[lo:hi] = np.einsum("ij,ij->i", gp, gq) - p0 * q0
    return a, b, h


def _components_from_rowstats(
    a: np.ndarray, b: np.ndarray, h: np.ndarray, n: int
) -> IndependenceComponents:
    pairs = n * (n - 1)
    u1 = float(h.sum()) / pairs
    u2 = float(a.sum()) / pairs
    u3 = float(b.sum()) / pairs
    u4 = float((a * b - h).sum()) / (pairs * (n - 2))
    return IndependenceComponents(u1=u1, u2=u2, u3=u3, u4=u4)


def independence_stat(spec_p: KernelSpec, spec_q: KernelSpec, x, y) -> IndependenceComponents:
    """Independence distance h(U) = u1 + u2*u3 - 2*u4 in O(n^2).

    The degree-3 term uses the row-sum identity
    sum_{i,j,k distinct} Cp_ij Cq_ik = sum_i (A_i B_i - H_i).
    """
    xa, ya = as_paired_sample(x, y, min_rows=3)
    a, b, h = indep_rowstats(spec_p, spec_q, xa, ya)
    return _components_from_rowstats(a, b, h, xa.shape[0])


def independence_stat_multi(
    x, y, spec_pairs: Sequence[tuple[KernelSpec, KernelSpec]]
) -> list[IndependenceComponents]:
    """Independence components for several kernel pairs on shared distances."""
    xa, ya = as_paired_sample(x, y, min_rows=3)
    n = xa.shape[0]
    k = len(spec_pairs)
    a = np.empty((k, n))
    b = np.empty((k, n))
    h = np.empty((k, n))
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        sqp = _backend.sqdist_cross(xa[lo:hi], xa)
        sqq = _backend.sqdist_cross(ya[lo:hi], ya)
        for s, (spec_p, spec_q) in enumerate(spec_pairs):
            gp = apply_to_sqnorm(spec_p, sqp)
            gq = apply_to_sqnorm(spec_q, sqq)
            a[s, lo:hi] = gp.sum(axis=1) - spec_p.at_zero
            b[s, lo:hi] = gq.sum(axis=1) - spec_q.at_zero
            h[s, lo:hi] = np.einsum("ij,ij->i", gp, gq) - spec_p.at_zero * spec_q.at_zero
    return [_components_from_rowstats(a[s], b[s], h[s], n) for s in range(k)]


def independence_stat_bruteforce(
    spec_p: KernelSpec, spec_q: KernelSpec, x, y
) -> IndependenceComponents:
    """O(n^3) oracle for ``independence_stat``: explicit loops over index tuples.

    Intended for small n; kernel values are evaluated pair by pair.
    """
    xa, ya = as_paired_sample(x, y, min_rows=3)
    n = xa.shape[0]
    gp = np.empty((n, n))
    gq = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            dp = xa[i] - xa[j]
            dq = ya[i] - ya[j]
            gp[i, j] = float(apply_to_sqnorm(spec_p, np.dot(dp, dp)))
            gq[i, j] = float(apply_to_sqnorm(spec_q, np.dot(dq, dq)))
    s1 = s2 = s3 = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            s1 += gp[i, j] * gq[i, j]
            s2 += gp[i, j]
            s3 += gq[i, j]
    s4 = 0.0
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                s4 += gp[i, j] * gq[i, k]
    pairs = n * (n - 1)
    return IndependenceComponents(
        u1=s1 / pairs, u2=s2 / pairs, u3=s3 / pairs, u4=s4 / (pairs * (n - 2))
    )
