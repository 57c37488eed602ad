import math

import numpy as np
import pytest

from cfequiv.estimators import (
    homogeneity_stat,
    homogeneity_stat_multi,
    independence_stat,
    independence_stat_bruteforce,
    independence_stat_multi,
    symmetry_stat,
    symmetry_stat_multi,
)
from cfequiv.exceptions import InsufficientSampleError, ShapeError
from cfequiv.kernels import KernelSpec
from cfequiv.thresholds import closed_form_symmetry_mixture

from conftest import ALL_SPECS


def test_symmetry_two_point_values(stable2):
    assert symmetry_stat(stable2, [1.0, 1.0]) == pytest.approx(
        (1 - math.exp(-4)) / 2, abs=1e-15
    )
    assert symmetry_stat(stable2, [1.0, -1.0]) == pytest.approx(
        (math.exp(-4) - 1) / 2, abs=1e-15
    )


def test_symmetry_sign_invariance(rng, laplace1):
    x = rng.standard_normal((25, 3)) + 0.7
    assert symmetry_stat(laplace1, x) == symmetry_stat(laplace1, -x)


def test_symmetry_requires_two_rows(stable1):
    with pytest.raises(InsufficientSampleError):
        symmetry_stat(stable1, [1.0])


def test_homogeneity_two_point_value(stable2):
    got = homogeneity_stat(stable2, [[0.0], [0.0]], [[1.0], [1.0]])
    assert got == pytest.approx(2 - 2 * math.exp(-1), abs=1e-15)


def test_homogeneity_identical_samples_exact_zero(rng):
    for d in (1, 3, 7):
        z = rng.standard_normal((19, d))
        for spec in (KernelSpec("stable", 1.0), KernelSpec("laplace", 0.25), KernelSpec("energy", 1.0)):
            assert homogeneity_stat(spec, z, z) == 0.0


def test_homogeneity_symmetric_in_samples(rng, stable1):
    x = rng.standard_normal((15, 2))
    y = rng.standard_normal((15, 2)) + 0.5
    assert homogeneity_stat(stable1, x, y) == pytest.approx(
        homogeneity_stat(stable1, y, x), rel=1e-12
    )


def test_homogeneity_shape_errors(rng, stable1):
    x = rng.standard_normal((10, 2))
    with pytest.raises(ShapeError):
        homogeneity_stat(stable1, x, rng.standard_normal((9, 2)))
    with pytest.raises(ShapeError):
        homogeneity_stat(stable1, x, rng.standard_normal((10, 3)))


def test_independence_constant_y_is_null(rng, stable1, stable2):
    x = rng.standard_normal((12, 2))
    y = np.full((12, 3), 2.5)
    comp = independence_stat(stable1, stable2, x, y)
    assert comp.u3 == 1.0
    assert abs(comp.stat) < 1e-14
    brute = independence_stat_bruteforce(stable1, stable2, x, y)
    assert abs(brute.stat) < 1e-14


def test_independence_matches_bruteforce_small(rng):
    spec_p = KernelSpec("stable", 1.0)
    spec_q = KernelSpec("laplace", 0.25)
    for n in (3, 5, 9, 17, 30):
        x = rng.standard_normal((n, 2))
        y = rng.standard_normal((n, 3)) + 0.4 * np.hstack([x, x[:, :1]])
        fast = independence_stat(spec_p, spec_q, x, y)
        slow = independence_stat_bruteforce(spec_p, spec_q, x, y)
        for name in ("u1", "u2", "u3", "u4"):
            f, s = getattr(fast, name), getattr(slow, name)
            assert f == pytest.approx(s, rel=1e-10), (n, name)
        assert fast.stat == pytest.approx(slow.stat, rel=1e-10, abs=1e-13)


def test_independence_bruteforce_many_random_instances(rng):
    spec = KernelSpec("stable", 1.0)
    for _ in range(100):
        n = int(rng.integers(3, 26))
        x = rng.standard_normal((n, 1))
        y = rng.standard_normal((n, 2)) + 0.3 * x
        fast = independence_stat(spec, spec, x, y)
        slow = independence_stat_bruteforce(spec, spec, x, y)
        assert fast.stat == pytest.approx(slow.stat, rel=1e-10, abs=1e-13)


def test_independence_swap_invariance(rng, stable1, laplace1):
    x = rng.standard_normal((14, 2))
    y = rng.standard_normal((14, 3)) + 0.2 * x[:, :1]
    a = independence_stat(stable1, laplace1, x, y)
    b = independence_stat(laplace1, stable1, y, x)
    assert a.stat == pytest.approx(b.stat, rel=1e-12)
    assert (a.u2, a.u3) == pytest.approx((b.u3, b.u2), rel=1e-12)


def test_independence_requires_three_rows(stable1):
    with pytest.raises(InsufficientSampleError):
        independence_stat(stable1, stable1, [[1.0], [2.0]], [[1.0], [2.0]])


def test_independence_u_components_in_unit_interval(rng, stable1, laplace1):
    x = rng.standard_normal((20, 2))
    y = rng.standard_normal((20, 2))
    comp = independence_stat(stable1, laplace1, x, y)
    for u in (comp.u1, comp.u2, comp.u3, comp.u4):
        assert 0.0 < u <= 1.0


@pytest.mark.parametrize("spec", ALL_SPECS[:8], ids=lambda s: f"{s.family.value}-{s.gamma}")
def test_permutation_invariance(spec, rng):
    x = rng.standard_normal((18, 2))
    y = rng.standard_normal((18, 2)) + 0.3
    perm = rng.permutation(18)
    assert symmetry_stat(spec, x) == pytest.approx(symmetry_stat(spec, x[perm]), rel=1e-12, abs=1e-15)
    # joint row permutation; the excluded i = j cross pairs pin the pairing,
    # so only re-labelings that move both blocks together keep the value
    assert homogeneity_stat(spec, x, y) == pytest.approx(
        homogeneity_stat(spec, x[perm], y[perm]), rel=1e-12, abs=1e-15
    )
    # joint permutation of paired rows
    a = independence_stat(spec, spec, x, y).stat
    b = independence_stat(spec, spec, x[perm], y[perm]).stat
    assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


def test_cf_statistic_ranges(rng):
    spec = KernelSpec("laplace", 1.0)
    for _ in range(25):
        x = rng.standard_normal((10, 2)) * rng.uniform(0.5, 3)
        y = rng.standard_normal((10, 2)) + rng.uniform(-2, 2)
        assert -1.0 <= symmetry_stat(spec, x) <= 1.0
        assert -2.0 <= homogeneity_stat(spec, x, y) <= 4.0


def test_multi_entry_points_match_single(rng):
    specs = [KernelSpec("stable", g) for g in (0.5, 1.0, 2.0)]
    x = rng.standard_normal((30, 2))
    y = rng.standard_normal((30, 2)) + 0.4
    np.testing.assert_array_equal(
        symmetry_stat_multi(x, specs), [symmetry_stat(s, x) for s in specs]
    )
    np.testing.assert_array_equal(
        homogeneity_stat_multi(x, y, specs), [homogeneity_stat(s, x, y) for s in specs]
    )
    multi = independence_stat_multi(x, y, [(s, s) for s in specs])
    single = [independence_stat(s, s, x, y) for s in specs]
    assert [c.stat for c in multi] == [c.stat for c in single]


def test_symmetry_unbiased_against_closed_form(rng):
    # equal Gaussian mixture shifted by delta, kernel matched to the
    # unit-mass weight exp(-||t||^2)/pi^(p/2): stable gamma=2 at scale 1/2;
    # the closed form divided by pi^(p/2) is the population value
    p, shift, n, reps = 2, 1.5, 50, 10000
    spec = KernelSpec("stable", 2.0, scale=0.5)
    delta = np.array([shift, 0.0])
    target = closed_form_symmetry_mixture(p, shift) / math.pi ** (p / 2)
    vals = np.empty(reps)
    for r in range(reps):
        comp = rng.standard_normal((n, p))
        comp[rng.random(n) < 0.5] += delta
        vals[r] = symmetry_stat(spec, comp)
    se = vals.std(ddof=1) / math.sqrt(reps)
    assert abs(vals.mean() - target) < 3 * se
