"""Consistent estimators of the limit standard deviation of the statistics.

The symmetry and homogeneity estimators are the quadratic forms

    4/(n(n-1)(n-2)) sum_{i,j,k distinct} psi(z_i,z_j) psi(z_i,z_k)
      - 4 [ (n(n-1))^-1 sum_{i != j} psi(z_i,z_j) ]^2,

evaluated in O(n^2) through row sums of the psi matrix.  The independence
test uses the leave-one-out jackknife of h(U), with all n deletions obtained
by downdating cached row sums, again O(n^2) total.  Negative raw values
(possible in finite samples) are clamped to zero so the decision rule always
sees a real standard deviation.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .kernels import (
    KernelSpec,
    apply_to_sqnorm,
    as_paired_sample,
    as_sample,
    as_two_sample,
    gram_cross,
)


def _psi_quadratic_variance(psi: np.ndarray) -> float:
    """Variance quadratic form for a zero-diagonal symmetric psi matrix.

    Evaluated on mean-centered entries: subtracting the pair mean from psi
    turns the displayed two-term expression into the single centered triple
    sum (an exact algebraic identity), which avoids the catastrophic
    cancellation of the raw form near degeneracy.
    """
    n = psi.shape[0]
    mean = float(psi.sum()) / (n * (n - 1))
    centered = psi - mean
    np.fill_diagonal(centered, 0.0)
    rows = centered.sum(axis=1)
    rows_sq = np.einsum("ij,ij->i", centered, centered)
    triple = float((rows * rows - rows_sq).sum())
    return max(4.0 * triple / (n * (n - 1) * (n - 2)), 0.0)


def _symmetric_from_tri(tri: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    out[iu] = tri
    out[iu[1], iu[0]] = tri
    return out


def symmetry_psi_matrix(spec: KernelSpec, x) -> np.ndarray:
    """psi(x_i,x_j) = {C(x_i-x_j) - C(x_i+x_j)}/2 with a zero diagonal."""
    xa = as_sample(x)
    n = xa.shape[0]
    d = apply_to_sqnorm(spec, _backend.sqdist_diff_tri(xa))
    s = apply_to_sqnorm(spec, _backend.sqdist_sum_tri(xa))
    return _symmetric_from_tri(0.5 * (d - s), n)


def symmetry_var(spec: KernelSpec, x) -> float:
    """Estimated limit variance of the symmetry statistic (clamped at 0)."""
    xa = as_sample(x, min_rows=3)
    return _psi_quadratic_variance(symmetry_psi_matrix(spec, xa))


def homogeneity_psi_matrix(spec: KernelSpec, x, y) -> np.ndarray:
    """psi(z_i,z_j) = C(x_i-x_j)+C(y_i-y_j)-C(x_i-y_j)-C(x_j-y_i), zero diagonal."""
    xa, ya = as_two_sample(x, y)
    n = xa.shape[0]
    dxx = _symmetric_from_tri(apply_to_sqnorm(spec, _backend.sqdist_diff_tri(xa)), n)
    dyy = _symmetric_from_tri(apply_to_sqnorm(spec, _backend.sqdist_diff_tri(ya)), n)
    cxy = gram_cross(spec, xa, ya)
    at0 = spec.at_zero
    np.fill_diagonal(dxx, at0)
    np.fill_diagonal(dyy, at0)
    psi = dxx + dyy - cxy - cxy.T
    np.fill_diagonal(psi, 0.0)
    return psi


def homogeneity_var(spec: KernelSpec, x, y) -> float:
    """Estimated limit variance of the two-sample statistic (clamped at 0)."""
    xa, ya = as_two_sample(x, y, min_rows=3)
    return _psi_quadratic_variance(homogeneity_psi_matrix(spec, xa, ya))


def independence_var_jackknife(spec_p: KernelSpec, spec_q: KernelSpec, x, y) -> float:
    """Jackknife variance estimate (n-1) sum_i (h_i - hbar)^2 of h(U).

    All n leave-one-out statistics are produced by downdating the cached row
    sums of the two Gram matrices and of their Hadamard product, so the whole
    estimate costs O(n^2).
    """
    xa, ya = as_paired_sample(x, y, min_rows=4)
    n = xa.shape[0]
    gp = gram_cross(spec_p, xa, xa)
    gq = gram_cross(spec_q, ya, ya)
    a = gp.sum(axis=1) - gp.diagonal()
    b = gq.sum(axis=1) - gq.diagonal()
    h = np.einsum("ij,ij->i", gp, gq) - gp.diagonal() * gq.diagonal()
    t1 = float(h.sum())
    t2 = float(a.sum())
    t3 = float(b.sum())
    p_ab = float((a * b).sum())
    c1 = gq @ a - gq.diagonal() * a
    c2 = gp @ b - gp.diagonal() * b
    m2 = (n - 1) * (n - 2)
    m3 = (n - 1) * (n - 2) * (n - 3)
    u1 = (t1 - 2.0 * h) / m2
    u2 = (t2 - 2.0 * a) / m2
    u3 = (t3 - 2.0 * b) / m2
    u4 = (p_ab - a * b - c1 - c2 + 3.0 * h - t1) / m3
    loo = u1 + u2 * u3 - 2.0 * u4
    centered = loo - loo.mean()
    return max(float((n - 1) * np.dot(centered, centered)), 0.0)
