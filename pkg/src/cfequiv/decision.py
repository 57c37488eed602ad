"""Equivalence decision rule and result packaging.

The null "distance >= Delta" is rejected (equivalence declared) when

    statistic <= Delta + sigma_n * z_alpha / sqrt(n),

with z_alpha the alpha quantile of the standard normal.  Rejection certifies
that the law of the data is Delta-close to the hypothesized model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .estimators import homogeneity_stat, independence_stat, symmetry_stat
from .exceptions import ConfigError, InputDomainError
from .kernels import KernelSpec, as_paired_sample, as_sample, as_two_sample
from .variance import homogeneity_var, independence_var_jackknife, symmetry_var


class Hypothesis(str, Enum):
    SYMMETRY = "symmetry"
    HOMOGENEITY = "homogeneity"
    INDEPENDENCE = "independence"


class ThresholdProvenance(str, Enum):
    USER_SUPPLIED = "user_supplied"
    RANDOM_APPROX = "random_approx"
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class EquivalenceConfig:
    """Equivalence margin Delta > 0 and significance level alpha in (0, 1)."""

    delta: float
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise ConfigError(f"delta must be a positive real, got {self.delta}")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class TestReport:
    statistic: float
    sigma_n: float
    n: int
    critical_value: float
    z_alpha: float
    reject_null: bool
    degenerate_variance: bool
    hypothesis: Optional[Hypothesis]
    kernels: tuple[KernelSpec, ...]
    threshold_provenance: ThresholdProvenance
    delta: float
    alpha: float
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "sigma_n": self.sigma_n,
            "n": self.n,
            "critical_value": self.critical_value,
            "z_alpha": self.z_alpha,
            "reject_null": self.reject_null,
            "degenerate_variance": self.degenerate_variance,
            "hypothesis": self.hypothesis.value if self.hypothesis else None,
            "kernels": [
                {"family": k.family.value, "gamma": k.gamma, "scale": k.scale}
                for k in self.kernels
            ],
            "threshold_provenance": self.threshold_provenance.value,
            "delta": self.delta,
            "alpha": self.alpha,
            "warnings": list(self.warnings),
        }


# AS241 / PPND16 rational approximation of the standard normal quantile
# (Wichura 1988); absolute error far below the 1e-9 contract.
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.226495278852545703e3,
)
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coeffs: tuple[float, ...], r: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def normal_quantile(alpha: float) -> float:
    """Inverse standard normal CDF via the AS241 rational approximation."""
    if not (0.0 < alpha < 1.0):
        raise InputDomainError(f"alpha must lie in (0, 1), got {alpha}")
    q = alpha - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = alpha if q < 0.0 else 1.0 - alpha
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0.0 else val


def decide(
    statistic: float,
    sigma_n: float,
    n: int,
    cfg: EquivalenceConfig,
    *,
    hypothesis: Optional[Hypothesis] = None,
    kernels: tuple[KernelSpec, ...] = (),
    threshold_provenance: ThresholdProvenance = ThresholdProvenance.USER_SUPPLIED,
    warnings: tuple[str, ...] = (),
) -> TestReport:
    """Apply the critical region; sigma_n = 0 degenerates to statistic <= Delta."""
    if n < 2:
        raise ConfigError(f"decision needs n >= 2, got {n}")
    if not (math.isfinite(sigma_n) and sigma_n >= 0.0):
        raise ConfigError(f"sigma_n must be a nonnegative real, got {sigma_n}")
    z = normal_quantile(cfg.alpha)
    critical = cfg.delta + sigma_n * z / math.sqrt(n)
    degenerate = sigma_n == 0.0
    if degenerate:
        warnings = warnings + ("variance estimate is zero; decision is degenerate",)
    return TestReport(
        statistic=float(statistic),
        sigma_n=float(sigma_n),
        n=int(n),
        critical_value=float(critical),
        z_alpha=z,
        reject_null=bool(statistic <= critical),
        degenerate_variance=degenerate,
        hypothesis=hypothesis,
        kernels=kernels,
        threshold_provenance=threshold_provenance,
        delta=cfg.delta,
        alpha=cfg.alpha,
        warnings=warnings,
    )


def run_test(
    hypothesis: Hypothesis,
    kernels: KernelSpec | tuple[KernelSpec, ...],
    data,
    cfg: EquivalenceConfig,
    *,
    threshold_provenance: ThresholdProvenance = ThresholdProvenance.USER_SUPPLIED,
) -> TestReport:
    """Compute the matching statistic and variance estimate, then decide.

    ``data`` is a single sample for symmetry and an ``(x, y)`` pair for the
    two-sample and independence hypotheses (paired rows for independence).
    """
    hypothesis = Hypothesis(hypothesis)
    if isinstance(kernels, KernelSpec):
        kernels = (kernels,)
    notes: tuple[str, ...] = ()
    for k in kernels:
        notes += k.warnings()
    notes = tuple(dict.fromkeys(notes))
    if hypothesis is Hypothesis.SYMMETRY:
        (spec,) = kernels
        x = as_sample(data, min_rows=3)
        stat = symmetry_stat(spec, x)
        sigma = math.sqrt(symmetry_var(spec, x))
        n = x.shape[0]
    elif hypothesis is Hypothesis.HOMOGENEITY:
        (spec,) = kernels
        x, y = as_two_sample(*data, min_rows=3)
        stat = homogeneity_stat(spec, x, y)
        sigma = math.sqrt(homogeneity_var(spec, x, y))
        n = x.shape[0]
    else:
        if len(kernels) == 1:
            kernels = (kernels[0], kernels[0])
        spec_p, spec_q = kernels
        x, y = as_paired_sample(*data, min_rows=4)
        stat = independence_stat(spec_p, spec_q, x, y).stat
        sigma = math.sqrt(independence_var_jackknife(spec_p, spec_q, x, y))
        n = x.shape[0]
    return decide(
        stat,
        sigma,
        n,
        cfg,
        hypothesis=hypothesis,
        kernels=kernels,
        threshold_provenance=threshold_provenance,
        warnings=notes,
    )
