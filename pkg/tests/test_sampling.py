import numpy as np
import pytest

from quasar_opt import BoundsBox, InitMethod, RngStream, lhs_sample, sobol_sample, uniform_sample
from quasar_opt.sampling import SOBOL_MAX_DIM, initial_population


def gray_radical_inverse(i: int) -> float:
    """Base-2 radical inverse of the Gray code of i (the sequence's 1-D law)."""
    g = i ^ (i >> 1)
    value, denom = 0.0, 1.0
    while g:
        denom *= 2.0
        value += (g & 1) / denom
        g >>= 1
    return value


def unit_box(d):
    return BoundsBox.cube(0.0, 1.0, d)


class TestSobol:
    def test_first_three_points_match_radical_inverse_oracle(self):
        pts = sobol_sample(3, unit_box(1))
        expected = [gray_radical_inverse(i) for i in (1, 2, 3)]
        assert expected == [0.5, 0.75, 0.25]
        assert np.array_equal(pts[:, 0], expected)

    def test_first_point_is_midpoint(self):
        pts = sobol_sample(1, BoundsBox.cube(-5.0, 5.0, 3))
        assert np.array_equal(pts, np.zeros((1, 3)))

    def test_seed_independent_without_scramble(self):
        b = BoundsBox.cube(-2.0, 7.0, 5)
        a = sobol_sample(64, b, RngStream(1))
        c = sobol_sample(64, b, RngStream(999))
        assert np.array_equal(a, c)

    def test_first_256_bin_occupancy(self):
        # Computed with the counting oracle: dropping the zero point leaves
        # bin 0 empty and doubles exactly one other bin per coordinate; the
        # remaining 254 bins hold exactly one point each.
        pts = sobol_sample(256, unit_box(10))
        for c in range(10):
            counts = np.bincount((pts[:, c] * 256).astype(int), minlength=256)
            assert counts[0] == 0
            assert np.sum(counts == 2) == 1
            assert np.sum(counts == 1) == 254

    def test_aligned_block_stratifies_exactly(self):
        # Points with underlying indices [256, 512) form a dyadic block and
        # must occupy every bin of width 1/256 exactly once per coordinate.
        pts = sobol_sample(511, unit_box(10))[255:]
        assert pts.shape == (256, 10)
        for c in range(10):
            counts = np.bincount((pts[:, c] * 256).astype(int), minlength=256)
            assert np.all(counts == 1)

    def test_scramble_changes_points_but_keeps_stratification(self):
        b = unit_box(4)
        plain = sobol_sample(511, b)[255:]
        scrambled = sobol_sample(511, b, RngStream(5), scramble=True)[255:]
        assert not np.array_equal(plain, scrambled)
        assert np.all(scrambled >= 0.0) and np.all(scrambled < 1.0)
        # A digital XOR shift permutes dyadic bins, so exact one-per-bin
        # coverage of aligned blocks survives.
        for c in range(4):
            counts = np.bincount((scrambled[:, c] * 256).astype(int),
                                 minlength=256)
            assert np.all(counts == 1)

    def test_scramble_is_seeded(self):
        b = unit_box(3)
        a = sobol_sample(32, b, RngStream(1), scramble=True)
        c = sobol_sample(32, b, RngStream(1), scramble=True)
        d = sobol_sample(32, b, RngStream(2), scramble=True)
        assert np.array_equal(a, c)
        assert not np.array_equal(a, d)

    def test_scramble_requires_rng(self):
        with pytest.raises(ValueError, match="rng"):
            sobol_sample(8, unit_box(2), scramble=True)

    def test_dimension_limit_named(self):
        big = BoundsBox.cube(0.0, 1.0, SOBOL_MAX_DIM + 1)
        with pytest.raises(ValueError, match=str(SOBOL_MAX_DIM)):
            sobol_sample(2, big)

    def test_points_inside_box(self):
        b = BoundsBox(np.array([-3.0, 10.0]), np.array([-1.0, 20.0]))
        pts = sobol_sample(100, b)
        assert np.all(pts >= b.low) and np.all(pts < b.high)


class TestLhs:
    def test_one_point_per_stratum_1d(self):
        b = BoundsBox.cube(0.0, 4.0, 1)
        pts = lhs_sample(4, b, RngStream(3))
        strata = np.sort(np.floor(pts[:, 0]).astype(int))
        assert np.array_equal(strata, [0, 1, 2, 3])

    def test_single_point_in_box(self):
        b = BoundsBox.cube(-1.0, 1.0, 2)
        pts = lhs_sample(1, b, RngStream(0))
        assert b.contains(pts)

    def test_decile_projections(self):
        b = unit_box(3)
        pts = lhs_sample(10, b, RngStream(8))
        for c in range(3):
            counts = np.bincount((pts[:, c] * 10).astype(int), minlength=10)
            assert np.all(counts == 1)

    def test_deterministic_per_seed(self):
        b = unit_box(2)
        assert np.array_equal(lhs_sample(6, b, RngStream(4)),
                              lhs_sample(6, b, RngStream(4)))


class TestUniform:
    def test_mean_near_center(self):
        pts = uniform_sample(10_000, unit_box(1), RngStream(11))
        assert abs(pts.mean() - 0.5) < 0.02

    def test_inside_box(self):
        b = BoundsBox.cube(-7.0, -2.0, 3)
        assert b.contains(uniform_sample(500, b, RngStream(2)))

    def test_deterministic_per_seed(self):
        b = unit_box(4)
        assert np.array_equal(uniform_sample(9, b, RngStream(6)),
                              uniform_sample(9, b, RngStream(6)))


def test_initial_population_dispatch():
    b = unit_box(2)
    for method in InitMethod:
        pts = initial_population(method, 8, b, RngStream(1))
        assert pts.shape == (8, 2)
        assert np.all(pts >= 0.0) and np.all(pts < 1.0)


def test_rejects_nonpositive_count():
    for fn in (lambda: sobol_sample(0, unit_box(1)),
               lambda: lhs_sample(0, unit_box(1), RngStream(0)),
               lambda: uniform_sample(0, unit_box(1), RngStream(0))):
        with pytest.raises(ValueError):
            fn()
