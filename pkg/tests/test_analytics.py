"""Closed-form floors against frozen quadrature-oracle values and invariants.

Frozen expected values were computed with a 50-digit mpmath oracle: the tail
probability as two explicit integrals of the Gaussian density outside
(-pi/n, pi/n), which agrees with the erfc closed form to all printed digits.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from npsksim import (
    FloorPrediction,
    LinkParams,
    ber_floor,
    ber_floor_with_eepn,
    gaussian_pdf,
    log10_ber_floor,
    log10_ser_floor,
    ser_floor,
    total_variance,
)

# Two-tail quadrature oracle results (50-digit working precision).
SER_N16_VAR_1E2 = 0.04958863747519107
BER_N16_VAR_1E2 = 0.012397159368797768
SER_N8_VAR_4E2 = 0.04958863747519107
BER_N8_VAR_4E2 = 0.01652954582506369
SER_N4_VAR_16E2 = 0.04958863747519107
BER_N4_VAR_16E2 = 0.024794318737595535
SER_N4_SIGMA_02 = 8.6015263886031796e-5
BER_N4_SIGMA_02 = 4.3007631943015898e-5
INV_SQRT_TWO_PI = 0.39894228040143268
# Reference link (1550 nm, 16 ps/(nm km), 1000 km, 2+2 MHz, 28 GBaud), n=4.
TOTAL_VAR_REFERENCE = 1.2176597471160826e-2
BER_N4_REFERENCE = 5.4954828098854183e-13


def quad_tail_oracle(sigma_sq, n, dps=40):
    """Two-tail integral of the Gaussian increment density outside +-pi/n.

    Each tail is integrated after the substitution x = a + (sigma^2/a) u
    (a = pi/n), which turns the integrand into a unit-rate exponential decay
    so the quadrature stays accurate however deep the tail is. Uses only
    exp and quadrature, independent of any erfc implementation.
    """
    with mp.workdps(dps):
        s2 = mp.mpf(sigma_sq)
        a = mp.pi / n
        core = mp.quad(lambda u: mp.e ** (-u - s2 * u**2 / (2 * a**2)), [0, mp.inf])
        one_tail = (s2 / a) / mp.sqrt(2 * mp.pi * s2) * mp.e ** (-(a**2) / (2 * s2)) * core
        return 2 * one_tail  # the two tails are symmetric


class TestGaussianPdf:
    def test_standard_normal_peak(self):
        assert gaussian_pdf(0.0, 1.0) == pytest.approx(INV_SQRT_TWO_PI, rel=1e-14)

    def test_symmetry(self):
        x = np.linspace(0.01, 5, 40)
        assert np.allclose(gaussian_pdf(x, 0.3), gaussian_pdf(-x, 0.3), rtol=0, atol=0)

    def test_normalization_by_quadrature(self):
        sigma = 0.37
        total, _ = integrate.quad(lambda x: gaussian_pdf(x, sigma**2), -10 * sigma, 10 * sigma)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_rejects_nonpositive_variance(self):
        for bad in (0.0, -1.0):
            with pytest.raises(ValueError):
                gaussian_pdf(0.0, bad)


class TestSerFloor:
    def test_zero_variance(self):
        for n in (2, 4, 16):
            assert ser_floor(0.0, n) == 0.0

    def test_huge_variance_saturates_at_one(self):
        assert ser_floor(1e12, 4) == pytest.approx(1.0, abs=1e-5)

    def test_frozen_oracle_values(self):
        assert ser_floor(0.01, 16) == pytest.approx(SER_N16_VAR_1E2, rel=1e-12)
        assert ser_floor(0.04, 8) == pytest.approx(SER_N8_VAR_4E2, rel=1e-12)
        assert ser_floor(0.16, 4) == pytest.approx(SER_N4_VAR_16E2, rel=1e-12)
        assert ser_floor(0.04, 4) == pytest.approx(SER_N4_SIGMA_02, rel=1e-12)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            ser_floor(-0.1, 4)

    def test_matches_quadrature_on_random_pairs(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            sigma_sq = 10.0 ** rng.uniform(-4, 0)
            n = int(rng.choice([2, 4, 8, 16, 32, 64]))
            got = ser_floor(sigma_sq, n)
            if got <= 1e-250:
                continue
            oracle = quad_tail_oracle(sigma_sq, n)
            assert abs(mp.mpf(got) - oracle) / oracle < 1e-10

    def test_strictly_increasing_in_variance_and_order(self):
        grid = np.logspace(-3, -1, 15)
        vals = [ser_floor(s, 8) for s in grid]
        assert np.all(np.diff(vals) > 0)
        by_order = [ser_floor(1e-2, n) for n in (2, 4, 8, 16, 32, 64)]
        assert np.all(np.diff(by_order) > 0)


class TestBerFloor:
    def test_ratio_is_bits_per_symbol(self):
        for n, bits in [(2, 1), (4, 2), (8, 3), (16, 4), (32, 5)]:
            s = ser_floor(0.02, n)
            assert ber_floor(0.02, n) == pytest.approx(s / bits, rel=1e-15)

    def test_frozen_values(self):
        assert ber_floor(0.01, 16) == pytest.approx(BER_N16_VAR_1E2, rel=1e-12)
        assert ber_floor(0.04, 8) == pytest.approx(BER_N8_VAR_4E2, rel=1e-12)
        assert ber_floor(0.16, 4) == pytest.approx(BER_N4_VAR_16E2, rel=1e-12)
        assert ber_floor(0.04, 4) == pytest.approx(BER_N4_SIGMA_02, rel=1e-12)

    def test_zero_variance(self):
        for n in (2, 4, 8, 16, 32, 64):
            assert ber_floor(0.0, n) == 0.0

    def test_ordering_by_modulation_level_at_fixed_variance(self):
        floors = [ber_floor(1e-2, n) for n in (4, 8, 16, 32)]
        assert floors[0] < floors[1] < floors[2] < floors[3]


class TestLogDomain:
    def test_consistent_with_probability_where_representable(self):
        for sigma_sq, n in [(1e-2, 16), (1e-3, 8), (0.16, 4), (1e-2, 64)]:
            p = ser_floor(sigma_sq, n)
            assert 10.0 ** log10_ser_floor(sigma_sq, n) == pytest.approx(p, rel=1e-9)

    def test_finite_far_below_double_underflow(self):
        # Probability clamps to zero but the log-domain value stays usable.
        assert ser_floor(1e-5, 4) == 0.0
        lg = log10_ser_floor(1e-5, 4)
        assert math.isfinite(lg) and lg < -300

    def test_zero_variance_gives_minus_inf(self):
        assert log10_ser_floor(0.0, 4) == -math.inf

    def test_strict_monotonicity_through_underflow_region(self):
        grid = np.logspace(-6, -1, 40)
        vals = [log10_ber_floor(s, 4) for s in grid]
        assert np.all(np.diff(vals) > 0)

    def test_ber_offset(self):
        assert log10_ber_floor(1e-2, 16) == pytest.approx(
            log10_ser_floor(1e-2, 16) - math.log10(4), rel=1e-12
        )


class TestFloorWithEepn:
    def make_link(self, length_km):
        return LinkParams.from_engineering(4, 2e6, 2e6, 28e9, 16.0, length_km, 1550.0)

    def test_reduces_to_intrinsic_floor_without_fiber(self):
        p = self.make_link(0.0)
        pred = ber_floor_with_eepn(p)
        assert pred.ber_floor == ber_floor(total_variance(p), 4)
        assert pred.includes_eepn

    def test_frozen_reference_setting(self):
        pred = ber_floor_with_eepn(self.make_link(1000.0))
        assert pred.sigma_sq == pytest.approx(TOTAL_VAR_REFERENCE, rel=1e-12)
        assert pred.ber_floor == pytest.approx(BER_N4_REFERENCE, rel=1e-10)
        assert not pred.underflow

    def test_strictly_increasing_with_distance(self):
        floors = [ber_floor_with_eepn(self.make_link(km)).ber_floor
                  for km in np.linspace(0, 5000, 21)]
        assert np.all(np.diff(floors) > 0)

    def test_underflow_flagged(self):
        quiet = LinkParams.from_engineering(4, 100.0, 100.0, 28e9, 16.0, 0.0, 1550.0)
        pred = ber_floor_with_eepn(quiet)
        assert pred.ber_floor == 0.0 and pred.underflow

    def test_prediction_is_value_like(self):
        pred = FloorPrediction(1e-2, 0.5, 0.25, False)
        assert pred.ser == 0.5 and not pred.includes_eepn
