"""Benchmark and alternative distributions with reproducible split streams.

Streams are (seed, spawn-key) pairs: identical pairs reproduce bitwise,
distinct spawn keys give independent generators by construction of numpy's
SeedSequence spawning.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from .decision import Hypothesis
from .exceptions import ConfigError, InputDomainError

Sample = np.ndarray
SamplePair = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class RngStream:
    """Reproducible generator handle: (seed, spawn key)."""

    seed: int
    key: tuple[int, ...] = ()

    def child(self, *ids: int) -> "RngStream":
        return RngStream(self.seed, self.key + tuple(int(i) for i in ids))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        return np.random.default_rng(ss)


def _as_generator(rng: Union[RngStream, np.random.Generator]) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def sample_mvn(mean, cov, n: int, rng) -> Sample:
    """n rows of N_p(mean, cov); cov must pass a Cholesky factorization."""
    gen = _as_generator(rng)
    mean = np.asarray(mean, dtype=np.float64)
    cov = np.asarray(cov, dtype=np.float64)
    chol = np.linalg.cholesky(cov)
    z = gen.standard_normal((n, mean.shape[0]))
    return mean + z @ chol.T


def sample_skew_normal(p: int, theta: float, n: int, rng) -> Sample:
    """Multivariate skew-normal with identity scatter and slant theta*1_p.

    Stochastic representation: with delta = alpha/sqrt(1+alpha'alpha) and
    alpha = theta*1_p, draw z0 ~ N(0,1), z ~ N_p(0, I - delta delta'), and
    return delta*|z0| + z.  theta = 0 reduces to N_p(0, I_p).
    """
    if theta < 0:
        raise InputDomainError(f"theta must be nonnegative, got {theta}")
    gen = _as_generator(rng)
    alpha = np.full(p, float(theta))
    delta = alpha / np.sqrt(1.0 + alpha @ alpha)
    cov = np.eye(p) - np.outer(delta, delta)
    z0 = np.abs(gen.standard_normal(n))
    z = sample_mvn(np.zeros(p), cov, n, gen)
    return z0[:, None] * delta + z


def sample_skew_cauchy(p: int, theta: float, n: int, rng) -> Sample:
    """Multivariate skew-Cauchy: skew-t with one degree of freedom."""
    gen = _as_generator(rng)
    s = sample_skew_normal(p, theta, n, gen)
    v = gen.chisquare(1, size=n)
    return s / np.sqrt(v)[:, None]


def sample_gamma_iid(p: int, shape: float, scale: float, n: int, rng) -> Sample:
    """n x p matrix of iid Gamma(shape, scale) coordinates."""
    if shape <= 0 or scale <= 0:
        raise InputDomainError("gamma shape and scale must be positive")
    gen = _as_generator(rng)
    return gen.gamma(shape, scale, size=(n, p))


def cross_block_cov(p: int, q: int, rho: float) -> np.ndarray:
    """Covariance with identity diagonal blocks and rho on the cross diagonal."""
    sigma = np.eye(p + q)
    for i in range(min(p, q)):
        sigma[i, p + i] = rho
        sigma[p + i, i] = rho
    return sigma


def sample_mvn_cross(p: int, q: int, rho: float, n: int, rng) -> SamplePair:
    """Jointly Gaussian (X, Y) with dependence rho on matched coordinates."""
    z = sample_mvn(np.zeros(p + q), cross_block_cov(p, q, rho), n, rng)
    return z[:, :p], z[:, p:]


def sample_mvt_cross(p: int, q: int, rho: float, nu: float, n: int, rng) -> SamplePair:
    """Multivariate-t counterpart of ``sample_mvn_cross`` with nu dof."""
    if nu <= 0:
        raise InputDomainError(f"nu must be positive, got {nu}")
    gen = _as_generator(rng)
    g = sample_mvn(np.zeros(p + q), cross_block_cov(p, q, rho), n, gen)
    v = gen.chisquare(nu, size=n)
    z = g / np.sqrt(v / nu)[:, None]
    return z[:, :p], z[:, p:]


def sample_gauss_mixture_shift(p: int, delta, n: int, rng) -> Sample:
    """Equal mixture of N_p(0, I) and N_p(delta, I)."""
    gen = _as_generator(rng)
    delta = np.asarray(delta, dtype=np.float64).reshape(-1)
    if delta.shape[0] != p:
        raise InputDomainError(f"delta must have length p={p}, got {delta.shape[0]}")
    z = gen.standard_normal((n, p))
    shifted = gen.random(n) < 0.5
    z[shifted] += delta
    return z


class Scenario(str, Enum):
    SKEW_NORMAL = "skew-normal"
    SKEW_CAUCHY = "skew-cauchy"
    GAUSS_SHIFT = "gauss-shift"
    GAMMA_SCALE = "gamma-scale"
    MVN_CROSS = "mvn-cross"
    MVT_CROSS = "mvt-cross"
    GAUSS_MIXTURE_SHIFT = "gauss-mixture-shift"


_HYPOTHESIS_OF = {
    Scenario.SKEW_NORMAL: Hypothesis.SYMMETRY,
    Scenario.SKEW_CAUCHY: Hypothesis.SYMMETRY,
    Scenario.GAUSS_MIXTURE_SHIFT: Hypothesis.SYMMETRY,
    Scenario.GAUSS_SHIFT: Hypothesis.HOMOGENEITY,
    Scenario.GAMMA_SCALE: Hypothesis.HOMOGENEITY,
    Scenario.MVN_CROSS: Hypothesis.INDEPENDENCE,
    Scenario.MVT_CROSS: Hypothesis.INDEPENDENCE,
}


@dataclass(frozen=True)
class BenchmarkSpec:
    """One named benchmark/alternative distribution and its parameters.

    scenario            parameter used
    skew-normal         theta (slant), dimension p
    skew-cauchy         theta, p
    gauss-shift         mu (coordinate mean shift of the second sample), p
    gamma-scale         mu (scale of the second sample; shape fixed), p
    mvn-cross           rho (cross-covariance), p, q
    mvt-cross           rho, p, q, nu
    gauss-mixture-shift delta (shift vector of one mixture component), p
    """

    scenario: Scenario
    p: int
    q: Optional[int] = None
    theta: Optional[float] = None
    mu: Optional[float] = None
    rho: Optional[float] = None
    nu: float = 5.0
    shape: float = 5.0
    delta: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if self.p < 1:
            raise ConfigError(f"p must be >= 1, got {self.p}")
        s = self.scenario
        if s in (Scenario.SKEW_NORMAL, Scenario.SKEW_CAUCHY):
            if self.theta is None or self.theta < 0:
                raise ConfigError(f"{s.value} needs theta >= 0")
        elif s is Scenario.GAUSS_SHIFT:
            if self.mu is None:
                raise ConfigError("gauss-shift needs mu")
        elif s is Scenario.GAMMA_SCALE:
            if self.mu is None or self.mu <= 0:
                raise ConfigError("gamma-scale needs mu > 0")
            if self.shape <= 0:
                raise ConfigError("gamma-scale needs shape > 0")
        elif s in (Scenario.MVN_CROSS, Scenario.MVT_CROSS):
            if self.rho is None or not abs(self.rho) < 1:
                raise ConfigError(f"{s.value} needs |rho| < 1")
            if self.q is not None and self.q < 1:
                raise ConfigError(f"q must be >= 1, got {self.q}")
            if s is Scenario.MVT_CROSS and self.nu <= 0:
                raise ConfigError("mvt-cross needs nu > 0")
        else:
            if self.delta is None:
                raise ConfigError("gauss-mixture-shift needs delta")

    @property
    def hypothesis(self) -> Hypothesis:
        return _HYPOTHESIS_OF[self.scenario]

    @property
    def q_effective(self) -> int:
        return self.q if self.q is not None else self.p

    def draw(self, n: int, rng) -> Union[Sample, SamplePair]:
        """One dataset of size n: a matrix, or an (x, y) pair for two-block scenarios."""
        gen = _as_generator(rng)
        s = self.scenario
        if s is Scenario.SKEW_NORMAL:
            return sample_skew_normal(self.p, self.theta, n, gen)
        if s is Scenario.SKEW_CAUCHY:
            return sample_skew_cauchy(self.p, self.theta, n, gen)
        if s is Scenario.GAUSS_SHIFT:
            x = gen.standard_normal((n, self.p))
            y = gen.standard_normal((n, self.p)) + self.mu
            return x, y
        if s is Scenario.GAMMA_SCALE:
            x = sample_gamma_iid(self.p, self.shape, 1.0, n, gen)
            y = sample_gamma_iid(self.p, self.shape, self.mu, n, gen)
            return x, y
        if s is Scenario.MVN_CROSS:
            return sample_mvn_cross(self.p, self.q_effective, self.rho, n, gen)
        if s is Scenario.MVT_CROSS:
            return sample_mvt_cross(self.p, self.q_effective, self.rho, self.nu, n, gen)
        return sample_gauss_mixture_shift(self.p, np.asarray(self.delta), n, gen)

    def with_param(self, value: float) -> "BenchmarkSpec":
        """Copy with the scenario's running parameter replaced."""
        s = self.scenario
        if s in (Scenario.SKEW_NORMAL, Scenario.SKEW_CAUCHY):
            return BenchmarkSpec(s, self.p, self.q, theta=value, nu=self.nu, shape=self.shape)
        if s in (Scenario.GAUSS_SHIFT, Scenario.GAMMA_SCALE):
            return BenchmarkSpec(s, self.p, self.q, mu=value, nu=self.nu, shape=self.shape)
        if s in (Scenario.MVN_CROSS, Scenario.MVT_CROSS):
            return BenchmarkSpec(s, self.p, self.q, rho=value, nu=self.nu, shape=self.shape)
        raise ConfigError(f"{s.value} has no scalar running parameter")
