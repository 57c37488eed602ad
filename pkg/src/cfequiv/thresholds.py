"""Equivalence margins for the named benchmarks.

Three routes produce a margin Delta:

* random approximation (RA): evaluate the distance statistic on a single
  large draw of size B from the benchmark law;
* deterministic quadrature for the Gaussian-shift two-sample benchmark,
  through the expectation form of the population distance: with
  X ~ N_p(0, I) and Y ~ N_p(mu*1_p, I),

      Delta = 2 E[C(W)] - 2 E[C(W')],  W ~ N_p(0, 2I), W' ~ N_p(mu*1_p, 2I),

  where ||W||^2/2 is chi-square(p) and ||W'||^2/2 is noncentral chi-square
  with noncentrality p*mu^2/2, expanded as a Poisson mixture of central
  chi-squares; every term is a one-dimensional radial integral;
* closed forms for the bivariate-Gaussian independence distance and for the
  Gaussian-mixture symmetry/homogeneity distances (printed with the
  unnormalized weights exp(-t1^2-t2^2) resp. exp(-||t||^2); dividing by
  pi^(p/2) gives the value for the matching unit-mass weight, realized by
  the stable kernel with gamma = 2, scale = 1/2).

The module also houses the quadrature oracles used to validate the kernel
expectation identities: a termwise Fourier-cosine integration of the squared
empirical-CF difference, and a 2-D quadrature of the bivariate-Gaussian
independence integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .decision import ThresholdProvenance
from .estimators import (
    homogeneity_stat_multi,
    independence_stat_multi,
    symmetry_stat_multi,
)
from .exceptions import ConfigError, InputDomainError, NumericalError, UnsupportedKernelError
from .kernels import KernelFamily, KernelSpec, as_sample
from .samplers import BenchmarkSpec, RngStream

KernelOrPair = Union[KernelSpec, tuple[KernelSpec, KernelSpec]]


@dataclass(frozen=True)
class ThresholdResult:
    delta: float
    method: ThresholdProvenance
    b_used: Optional[int] = None
    estimated_error: Optional[float] = None
    seed: Optional[int] = None
    negative_warning: bool = False

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "method": self.method.value,
            "b_used": self.b_used,
            "estimated_error": self.estimated_error,
            "seed": self.seed,
            "negative_warning": self.negative_warning,
        }


def _normalize_pair(kernel: KernelOrPair) -> tuple[KernelSpec, KernelSpec]:
    if isinstance(kernel, KernelSpec):
        return kernel, kernel
    spec_p, spec_q = kernel
    return spec_p, spec_q


def threshold_random_approx_batch(
    benchmark: BenchmarkSpec,
    kernels: Sequence[KernelOrPair],
    b: int,
    seed: Union[int, RngStream],
) -> list[ThresholdResult]:
    """RA margins for several kernels from one shared size-b benchmark draw.

    ``threshold_random_approx(benchmark, k, b, seed)`` equals the entry for
    ``k`` here: the draw depends only on (benchmark, b, seed).
    """
    if b < 100:
        raise ConfigError(f"random approximation needs B >= 100, got {b}")
    stream = seed if isinstance(seed, RngStream) else RngStream(int(seed))
    seed_out = stream.seed
    data = benchmark.draw(b, stream.generator())
    hyp = benchmark.hypothesis.value

    def stats_of(subset) -> list[float]:
        if hyp == "symmetry":
            return [float(v) for v in symmetry_stat_multi(subset, list(kernels))]
        x, y = subset
        if hyp == "homogeneity":
            return [float(v) for v in homogeneity_stat_multi(x, y, list(kernels))]
        pairs = [_normalize_pair(k) for k in kernels]
        return [float(c.stat) for c in independence_stat_multi(x, y, pairs)]

    def subset(lo: int, hi: int):
        if hyp == "symmetry":
            return data[lo:hi]
        return data[0][lo:hi], data[1][lo:hi]

    stats = stats_of(data)
    # split-sample standard error: the statistic on G disjoint groups has G
    # times the variance of the full-draw statistic (linear leading term), so
    # sd(group values)/sqrt(G) estimates the draw noise of delta
    groups = min(25, b // 4)
    size = b // groups
    group_stats = np.array([stats_of(subset(g * size, (g + 1) * size)) for g in range(groups)])
    ses = group_stats.std(axis=0, ddof=1) / math.sqrt(groups)
    return [
        ThresholdResult(
            delta=s,
            method=ThresholdProvenance.RANDOM_APPROX,
            b_used=b,
            estimated_error=float(se),
            seed=seed_out,
            negative_warning=bool(s < 0.0),
        )
        for s, se in zip(stats, ses)
    ]


def threshold_random_approx(
    benchmark: BenchmarkSpec,
    kernel: KernelOrPair,
    b: int,
    seed: Union[int, RngStream],
) -> ThresholdResult:
    """Margin from the distance statistic on one size-b benchmark draw.

    Deterministic given (benchmark, b, seed).  A negative value (possible at
    small b) is returned as-is with ``negative_warning`` set.
    """
    return threshold_random_approx_batch(benchmark, [kernel], b, seed)[0]


def _chi2_logpdf(q: float, nu: float) -> float:
    return (0.5 * nu - 1.0) * math.log(q) - 0.5 * q - 0.5 * nu * math.log(2.0) - gammaln(0.5 * nu)


def _kernel_of_sq(spec: KernelSpec):
    s2 = spec.scale * spec.scale
    halfg = 0.5 * spec.gamma
    if spec.family is KernelFamily.STABLE:
        return lambda sq: math.exp(-((s2 * sq) ** halfg))
    return lambda sq: (1.0 + s2 * sq) ** (-spec.gamma)


def _expect_kernel_chi2(spec: KernelSpec, nu: float, epsabs: float) -> tuple[float, float]:
    """E[C(W)] for ||W||^2 = 2 Q, Q ~ chi-square(nu)."""
    g = _kernel_of_sq(spec)
    val, err = integrate.quad(
        lambda q: g(2.0 * q) * math.exp(_chi2_logpdf(q, nu)),
        0.0,
        np.inf,
        epsabs=epsabs,
        epsrel=epsabs,
        limit=400,
    )
    if err > max(1e-6, 100 * epsabs):
        raise NumericalError(f"radial integral did not converge: error estimate {err:g}")
    return val, err


def _expect_kernel_noncentral(
    spec: KernelSpec, nu: float, lam: float, epsabs: float, tail: float = 1e-12
) -> tuple[float, float]:
    """E[C(W')] for ||W'||^2 = 2 Q', Q' ~ noncentral chi-square(nu, lam).

    Poisson mixture over central chi-squares, truncated once the remaining
    Poisson mass drops below ``tail`` (kernel values are bounded by 1, so the
    truncation error is bounded by the tail mass).
    """
    half = 0.5 * lam
    total = 0.0
    err_total = 0.0
    log_w = -half
    mass = 0.0
    k = 0
    while True:
        w = math.exp(log_w)
        val, err = _expect_kernel_chi2(spec, nu + 2 * k, epsabs)
        total += w * val
        err_total += w * err
        mass += w
        if 1.0 - mass <= tail:
            break
        k += 1
        log_w += math.log(half) - math.log(k)
        if k > 100000:
            raise NumericalError("Poisson mixture did not reach the requested tail mass")
    return total, err_total + tail


def threshold_gaussian_shift_quadrature(
    spec: KernelSpec, p: int, mu0: float, epsabs: float = 1e-10
) -> ThresholdResult:
    """Two-sample distance between N_p(0, I) and N_p(mu0*1_p, I) by quadrature."""
    if spec.family is KernelFamily.ENERGY:
        raise UnsupportedKernelError("quadrature margin is defined for CF kernels only")
    if p < 1:
        raise ConfigError(f"p must be >= 1, got {p}")
    if mu0 == 0.0:
        return ThresholdResult(
            delta=0.0, method=ThresholdProvenance.QUADRATURE, estimated_error=0.0
        )
    e0, err0 = _expect_kernel_chi2(spec, p, epsabs)
    lam = p * mu0 * mu0 / 2.0
    e1, err1 = _expect_kernel_noncentral(spec, p, lam, epsabs)
    return ThresholdResult(
        delta=2.0 * (e0 - e1),
        method=ThresholdProvenance.QUADRATURE,
        estimated_error=2.0 * (err0 + err1),
    )


def closed_form_independence_gauss(rho: float) -> float:
    """Independence distance of the bivariate unit Gaussian with correlation rho.

    Weight exp(-t1^2 - t2^2) as printed (unnormalized):
    pi * (1/2 + 1/sqrt(4 - rho^2) - 4/sqrt(16 - rho^2)).
    """
    if not abs(rho) < 1.0:
        raise InputDomainError(f"|rho| must be < 1, got {rho}")
    return math.pi * (
        0.5 + 1.0 / math.sqrt(4.0 - rho * rho) - 4.0 / math.sqrt(16.0 - rho * rho)
    )


def closed_form_symmetry_mixture(p: int, delta_norm: float) -> float:
    """Symmetry distance of the equal Gaussian mixture shifted by ||delta||.

    Weight exp(-||t||^2): pi^(p/2)/2^(p/2+3) * (1 - exp(-||delta||^2/2)).
    """
    if p < 1:
        raise ConfigError(f"p must be >= 1, got {p}")
    if delta_norm < 0:
        raise InputDomainError("delta_norm must be nonnegative")
    return math.pi ** (0.5 * p) / 2.0 ** (0.5 * p + 3.0) * (-math.expm1(-0.5 * delta_norm**2))


def closed_form_homogeneity_mixture(p: int, delta_norm: float) -> float:
    """Two-sample distance between the shifted mixture and the standard Gaussian.

    Weight exp(-||t||^2): pi^(p/2)/2^(p/2+1) * (1 - exp(-||delta||^2/8)).
    """
    if p < 1:
        raise ConfigError(f"p must be >= 1, got {p}")
    if delta_norm < 0:
        raise InputDomainError("delta_norm must be nonnegative")
    return math.pi ** (0.5 * p) / 2.0 ** (0.5 * p + 1.0) * (-math.expm1(-(delta_norm**2) / 8.0))


def independence_gauss_quadrature(rho: float, epsabs: float = 1e-9) -> float:
    """2-D quadrature of the bivariate-Gaussian independence integrand.

    Validates the quadrature engine against ``closed_form_independence_gauss``.
    """
    if not abs(rho) < 1.0:
        raise InputDomainError(f"|rho| must be < 1, got {rho}")

    def integrand(t2: float, t1: float) -> float:
        quad_form = t1 * t1 + t2 * t2
        joint = math.exp(-0.5 * (quad_form + 2.0 * rho * t1 * t2))
        product = math.exp(-0.5 * quad_form)
        return (joint - product) ** 2 * math.exp(-quad_form)

    lim = 8.0
    val, err = integrate.dblquad(integrand, -lim, lim, -lim, lim, epsabs=epsabs, epsrel=1e-10)
    if err > 1e-7:
        raise NumericalError(f"2-D quadrature did not converge: error estimate {err:g}")
    return val


# weight density and, for fast-decaying weights, a cutoff beyond which the
# tail is below 1e-28 (None: integrate to infinity with the QAWF rule)
_ECF_WEIGHTS = {
    (KernelFamily.STABLE, 2.0): (
        lambda t: math.exp(-0.25 * t * t) / math.sqrt(4.0 * math.pi),
        16.0,
    ),
    (KernelFamily.STABLE, 1.0): (lambda t: 1.0 / (math.pi * (1.0 + t * t)), None),
}


def _fourier_cos_weight(delta: float, weight, cutoff, epsabs: float) -> float:
    """integral over R of w(t) cos(t*delta) dt by QUADPACK's cosine rules."""
    upper = np.inf if cutoff is None else cutoff
    if delta == 0.0:
        val, _ = integrate.quad(weight, 0.0, upper, epsabs=epsabs, epsrel=0.0, limit=400)
    else:
        val, _ = integrate.quad(
            weight, 0.0, upper, weight="cos", wvar=abs(delta), epsabs=epsabs, limit=400
        )
    return 2.0 * val


def ecf_distance_quadrature(x, y, spec: KernelSpec, tol: float = 1e-8) -> float:
    """Univariate two-sample CF distance by numerical integration.

    Integrates |ecf_x(t) - ecf_y(t)|^2 w(t) dt for the unit-mass weight
    density w matching ``spec`` (stable gamma=2: N(0,2); stable gamma=1:
    standard Cauchy), exploiting the exact cosine decomposition of the
    squared empirical-CF difference so each term is a Fourier integral of
    the weight.  The U-statistic diagonal correction is applied explicitly,
    so on the same data the result is comparable to ``homogeneity_stat``.
    """
    key = (spec.family, spec.gamma)
    if key not in _ECF_WEIGHTS or spec.scale != 1.0:
        raise UnsupportedKernelError(
            f"no weight density available for {spec.family.value} gamma={spec.gamma} "
            f"scale={spec.scale}; supported: stable gamma in {{1, 2}} at scale 1"
        )
    weight, cutoff = _ECF_WEIGHTS[key]
    xa = as_sample(x, name="x").ravel()
    ya = as_sample(y, name="y").ravel()
    if xa.shape != ya.shape:
        raise UnsupportedKernelError("oracle requires equal-length univariate samples")
    n = xa.shape[0]
    eps = tol / 16.0

    def integral(delta: float) -> float:
        return _fourier_cos_weight(delta, weight, cutoff, eps)

    within_x = sum(integral(xa[i] - xa[j]) for i in range(n - 1) for j in range(i + 1, n))
    within_y = sum(integral(ya[i] - ya[j]) for i in range(n - 1) for j in range(i + 1, n))
    cross = sum(integral(xa[i] - ya[j]) for i in range(n) for j in range(n))
    cross_diag = sum(integral(xa[i] - ya[i]) for i in range(n))
    at_zero = integral(0.0)
    # V-statistic value of the weighted integral, then the diagonal correction
    v_stat = (2.0 * within_x + 2.0 * within_y + 2.0 * n * at_zero - 2.0 * cross) / (n * n)
    return (n * n * v_stat - 2.0 * n * at_zero + 2.0 * cross_diag) / (n * (n - 1))
