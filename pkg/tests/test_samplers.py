import numpy as np
import pytest
from scipy import stats

from cfequiv.estimators import homogeneity_stat
from cfequiv.exceptions import ConfigError
from cfequiv.kernels import KernelSpec
from cfequiv.samplers import (
    BenchmarkSpec,
    RngStream,
    Scenario,
    cross_block_cov,
    sample_gamma_iid,
    sample_gauss_mixture_shift,
    sample_mvn,
    sample_mvn_cross,
    sample_mvt_cross,
    sample_skew_cauchy,
    sample_skew_normal,
)


def ecf(sample, t):
    phase = sample @ t
    return np.cos(phase).mean(), np.sin(phase).mean()


def sn_accept_reject(p, theta, n, gen):
    """Skew-normal oracle: propose N_p(0, I), accept with prob Phi(alpha'x)."""
    alpha = np.full(p, theta)
    out = np.empty((n, p))
    filled = 0
    while filled < n:
        m = 2 * (n - filled) + 16
        prop = gen.standard_normal((m, p))
        keep = gen.random(m) < stats.norm.cdf(prop @ alpha)
        take = prop[keep][: n - filled]
        out[filled : filled + take.shape[0]] = take
        filled += take.shape[0]
    return out


def sc_accept_reject(p, theta, n, gen):
    """Skew-Cauchy oracle from the skew-t(1) density: Cauchy proposal, t-cdf tilt."""
    alpha = np.full(p, theta)
    nu = 1.0
    out = np.empty((n, p))
    filled = 0
    while filled < n:
        m = 2 * (n - filled) + 16
        g = gen.standard_normal((m, p))
        v = gen.chisquare(nu, m)
        prop = g / np.sqrt(v / nu)[:, None]
        r2 = np.einsum("ij,ij->i", prop, prop)
        tilt = stats.t.cdf((prop @ alpha) * np.sqrt((nu + p) / (nu + r2)), df=nu + p)
        keep = gen.random(m) < tilt
        take = prop[keep][: n - filled]
        out[filled : filled + take.shape[0]] = take
        filled += take.shape[0]
    return out


def test_streams_reproduce_bitwise():
    a = sample_mvn(np.zeros(3), np.eye(3), 50, RngStream(42, (1, 2)))
    b = sample_mvn(np.zeros(3), np.eye(3), 50, RngStream(42, (1, 2)))
    np.testing.assert_array_equal(a, b)
    c = sample_mvn(np.zeros(3), np.eye(3), 50, RngStream(42, (1, 3)))
    assert not np.array_equal(a, c)


def test_stream_children_are_uncorrelated():
    base = RngStream(7)
    draws = [base.child(i).generator().standard_normal(4000) for i in range(6)]
    for i in range(6):
        for j in range(i + 1, 6):
            corr = np.corrcoef(draws[i], draws[j])[0, 1]
            assert abs(corr) < 4 / np.sqrt(4000)


def test_mvn_moments_and_cholesky_error(rng):
    n = 20000
    x = sample_mvn(np.zeros(3), np.eye(3), n, rng)
    assert np.all(np.abs(x.mean(axis=0)) < 4 / np.sqrt(n))
    with pytest.raises(np.linalg.LinAlgError):
        sample_mvn(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]), 5, rng)


def test_skew_normal_reduces_to_gaussian_at_zero(rng):
    n = 20000
    x = sample_skew_normal(3, 0.0, n, rng)
    skew = stats.skew(x, axis=0)
    assert np.all(np.abs(skew) < 5 * np.sqrt(6 / n))


def test_skew_normal_marginal_mean_formula(rng):
    # slant theta*1_p gives per-coordinate delta = theta/sqrt(1 + p theta^2)
    p, theta, n = 2, 3.0, 200000
    x = sample_skew_normal(p, theta, n, rng)
    dstar = theta / np.sqrt(1 + p * theta * theta)
    target = dstar * np.sqrt(2 / np.pi)
    band = 4 / np.sqrt(n)
    assert np.all(np.abs(x.mean(axis=0) - target) < band)


def test_skew_normal_matches_density_oracle(rng):
    p, theta, n = 2, 3.0, 40000
    ours = sample_skew_normal(p, theta, n, rng)
    oracle = sn_accept_reject(p, theta, n, rng)
    band = 4 * np.sqrt(2.0 / n)
    for t in (np.array([0.7, -0.3]), np.array([1.5, 1.0])):
        re_a, im_a = ecf(ours, t)
        re_b, im_b = ecf(oracle, t)
        assert abs(re_a - re_b) < band
        assert abs(im_a - im_b) < band


def test_skew_cauchy_matches_density_oracle(rng):
    p, theta, n = 2, 3.0, 40000
    ours = sample_skew_cauchy(p, theta, n, rng)
    oracle = sc_accept_reject(p, theta, n, rng)
    band = 4 * np.sqrt(2.0 / n)
    for t in (np.array([0.5, 0.2]), np.array([-1.0, 0.8])):
        re_a, im_a = ecf(ours, t)
        re_b, im_b = ecf(oracle, t)
        assert abs(re_a - re_b) < band
        assert abs(im_a - im_b) < band


def test_skew_cauchy_symmetric_at_zero_and_heavy_tailed(rng):
    n = 20000
    x = sample_skew_cauchy(2, 0.0, n, rng)
    assert np.all(np.abs(np.median(x, axis=0)) < 4 / np.sqrt(n))
    # no second moment: the running sample second moment keeps growing
    second = np.cumsum(x[:, 0] ** 2) / np.arange(1, n + 1)
    assert second[n - 1] > 10 * second[n // 100]


def test_gamma_moments(rng):
    n, a, s = 40000, 5.0, 2.0
    x = sample_gamma_iid(3, a, s, n, rng)
    assert np.all(np.abs(x.mean(axis=0) - a * s) < 4 * np.sqrt(a * s * s / n))
    assert np.all(np.abs(x.var(axis=0) - a * s * s) < 5 * a * s * s * np.sqrt(8 / n))


def test_cross_block_cov_structure():
    sigma = cross_block_cov(3, 2, 0.4)
    assert sigma.shape == (5, 5)
    np.testing.assert_array_equal(np.diag(sigma), np.ones(5))
    assert sigma[0, 3] == 0.4 and sigma[1, 4] == 0.4 and sigma[2, 3] == 0.0
    assert sigma[0, 4] == 0.0


def test_mvn_cross_correlations(rng):
    n = 30000
    x, y = sample_mvn_cross(2, 2, 0.0, n, rng)
    for i in range(2):
        for j in range(2):
            assert abs(np.corrcoef(x[:, i], y[:, j])[0, 1]) < 4 / np.sqrt(n)
    x, y = sample_mvn_cross(2, 2, 0.8, n, rng)
    assert np.corrcoef(x[:, 0], y[:, 0])[0, 1] == pytest.approx(0.8, abs=0.02)


def test_mvt_cross_large_nu_matches_gaussian(rng):
    # energy two-sample statistic between mvt(nu=1e6) and the Gaussian with the
    # same covariance, calibrated against pooled permutation splits
    n = 800
    xt, yt = sample_mvt_cross(2, 2, 0.5, 1e6, n, rng)
    zt = np.hstack([xt, yt])
    zg = sample_mvn(np.zeros(4), cross_block_cov(2, 2, 0.5), n, rng)
    spec = KernelSpec("energy", 1.0)
    observed = homogeneity_stat(spec, zt, zg)
    pooled = np.vstack([zt, zg])
    null_stats = []
    for _ in range(20):
        perm = rng.permutation(2 * n)
        null_stats.append(homogeneity_stat(spec, pooled[perm[:n]], pooled[perm[n:]]))
    assert observed <= max(null_stats)


def test_mvt_cross_zero_rho_uncorrelated(rng):
    n = 30000
    x, y = sample_mvt_cross(2, 2, 0.0, 5.0, n, rng)
    # t(5) has finite second moments; correlations concentrate
    for i in range(2):
        assert abs(np.corrcoef(x[:, i], y[:, i])[0, 1]) < 6 / np.sqrt(n)


def test_gauss_mixture_shift_moments(rng):
    n = 40000
    delta = np.array([2.0, -1.0])
    x = sample_gauss_mixture_shift(2, delta, n, rng)
    np.testing.assert_allclose(x.mean(axis=0), delta / 2, atol=5 / np.sqrt(n) * 2)
    z = sample_gauss_mixture_shift(2, np.zeros(2), n, rng)
    assert np.all(np.abs(stats.skew(z, axis=0)) < 5 * np.sqrt(6 / n))


def test_benchmark_spec_validation_and_draws(rng):
    with pytest.raises(ConfigError):
        BenchmarkSpec(Scenario.SKEW_NORMAL, p=2)  # theta missing
    with pytest.raises(ConfigError):
        BenchmarkSpec(Scenario.MVN_CROSS, p=2, rho=1.0)
    with pytest.raises(ConfigError):
        BenchmarkSpec(Scenario.GAMMA_SCALE, p=2, mu=-1.0)
    bm = BenchmarkSpec(Scenario.GAUSS_SHIFT, p=3, mu=2.0)
    x, y = bm.draw(30, RngStream(1))
    assert x.shape == (30, 3) and y.shape == (30, 3)
    assert bm.with_param(1.5).mu == 1.5
    bi = BenchmarkSpec(Scenario.MVT_CROSS, p=2, q=3, rho=0.5)
    x, y = bi.draw(20, RngStream(2))
    assert x.shape == (20, 2) and y.shape == (20, 3)
    sym = BenchmarkSpec(Scenario.SKEW_CAUCHY, p=2, theta=3.0)
    assert sym.draw(15, RngStream(3)).shape == (15, 2)
