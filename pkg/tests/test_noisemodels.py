"""Variance closed forms against frozen high-precision values; noise generators."""

import numpy as np
import pytest
from scipy import stats

from npsksim import (
    LinkParams,
    awgn,
    eepn_variance,
    intrinsic_variance,
    total_variance,
    wiener_path,
)

# Frozen from a 50-digit arithmetic oracle evaluated on the same expressions.
INTRINSIC_1MHZ_PAIR_28G = 4.4879895051282761e-4
INTRINSIC_2MHZ_PAIR_28G = 8.9759790102565521e-4
EEPN_1550_16_1000KM_2MHZ_28G = 1.1278999570135171e-2
TOTAL_REFERENCE_SETTING = 1.2176597471160826e-2


def make_link(lw_tx=2e6, lw_lo=2e6, baud=28e9, disp=16.0, length_km=1000.0,
              lambda_nm=1550.0, order=4):
    return LinkParams.from_engineering(order, lw_tx, lw_lo, baud, disp, length_km, lambda_nm)


def chi2_band(sample_var, requested_var, count, confidence=0.99):
    """True if the sample variance sits inside the two-sided chi^2 band."""
    dof = count - 1
    alpha = 1 - confidence
    lo = stats.chi2.ppf(alpha / 2, dof) / dof
    hi = stats.chi2.ppf(1 - alpha / 2, dof) / dof
    return lo <= sample_var / requested_var <= hi


class TestLinkParams:
    def test_engineering_conversion(self):
        p = make_link()
        assert p.disp == pytest.approx(16e-6, rel=1e-15)
        assert p.length == pytest.approx(1e6, rel=1e-15)
        assert p.wavelength == pytest.approx(1.55e-6, rel=1e-15)
        assert p.ts == pytest.approx(1 / 28e9, rel=1e-15)
        assert p.symbol_rate == pytest.approx(28e9, rel=1e-12)

    def test_carrier_frequency(self):
        p = make_link()
        assert p.carrier_frequency == pytest.approx(299792458.0 / 1.55e-6, rel=1e-12)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(lw_tx=-1.0),
            dict(lw_lo=-0.5),
            dict(baud=0.0),
            dict(length_km=-5.0),
            dict(lambda_nm=0.0),
            dict(order=3),
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(ValueError):
            make_link(**kwargs)

    def test_negative_dispersion_allowed(self):
        p = make_link(disp=-16.0)
        assert p.disp == pytest.approx(-16e-6)


class TestIntrinsicVariance:
    def test_noiseless_lasers(self):
        assert intrinsic_variance(make_link(lw_tx=0.0, lw_lo=0.0)) == 0.0

    def test_frozen_value_1mhz_pair(self):
        p = make_link(lw_tx=1e6, lw_lo=1e6)
        assert intrinsic_variance(p) == pytest.approx(INTRINSIC_1MHZ_PAIR_28G, rel=1e-12)

    def test_frozen_value_2mhz_pair(self):
        assert intrinsic_variance(make_link()) == pytest.approx(
            INTRINSIC_2MHZ_PAIR_28G, rel=1e-12
        )

    def test_linear_in_combined_linewidth(self):
        base = intrinsic_variance(make_link(lw_tx=1e6, lw_lo=2e6))
        doubled = intrinsic_variance(make_link(lw_tx=2e6, lw_lo=4e6))
        assert doubled == pytest.approx(2 * base, rel=1e-12)

    def test_linear_in_symbol_period(self):
        assert intrinsic_variance(make_link(baud=14e9)) == pytest.approx(
            2 * intrinsic_variance(make_link(baud=28e9)), rel=1e-12
        )


class TestEepnVariance:
    def test_no_fiber(self):
        assert eepn_variance(make_link(length_km=0.0)) == 0.0

    def test_quiet_lo(self):
        assert eepn_variance(make_link(lw_lo=0.0)) == 0.0

    def test_frozen_reference_value(self):
        assert eepn_variance(make_link()) == pytest.approx(
            EEPN_1550_16_1000KM_2MHZ_28G, rel=1e-12
        )

    def test_linear_scalings(self):
        base = eepn_variance(make_link())
        assert eepn_variance(make_link(length_km=2000.0)) == pytest.approx(2 * base, rel=1e-12)
        assert eepn_variance(make_link(lw_lo=4e6)) == pytest.approx(2 * base, rel=1e-12)
        assert eepn_variance(make_link(baud=56e9)) == pytest.approx(2 * base, rel=1e-12)
        assert eepn_variance(make_link(lambda_nm=3100.0)) == pytest.approx(
            4 * base, rel=1e-12
        )

    def test_dispersion_sign_ignored(self):
        assert eepn_variance(make_link(disp=-16.0)) == pytest.approx(
            eepn_variance(make_link(disp=16.0)), rel=1e-15
        )

    def test_opposing_rate_trends(self):
        # Faster symbol rate shrinks the intrinsic term and grows the
        # equalization-enhanced term by the same factor.
        slow, fast = make_link(baud=28e9), make_link(baud=112e9)
        assert intrinsic_variance(fast) == pytest.approx(
            intrinsic_variance(slow) / 4, rel=1e-12
        )
        assert eepn_variance(fast) == pytest.approx(4 * eepn_variance(slow), rel=1e-12)


class TestTotalVariance:
    def test_zero_when_everything_off(self):
        assert total_variance(make_link(lw_tx=0.0, lw_lo=0.0, length_km=0.0)) == 0.0

    def test_frozen_reference_setting(self):
        assert total_variance(make_link()) == pytest.approx(TOTAL_REFERENCE_SETTING, rel=1e-12)

    def test_additivity_over_random_draws(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            p = make_link(
                lw_tx=rng.uniform(0, 5e6),
                lw_lo=rng.uniform(0, 5e6),
                baud=rng.uniform(1e9, 100e9),
                disp=rng.uniform(-20, 20),
                length_km=rng.uniform(0, 5000),
            )
            assert total_variance(p) == intrinsic_variance(p) + eepn_variance(p)


class TestWienerPath:
    def test_zero_variance_gives_zero_path(self):
        traj = wiener_path(1000, 0.0, seed=1)
        assert np.all(traj.phases == 0.0)

    def test_starts_at_zero(self):
        assert wiener_path(10, 1e-3, seed=3).phases[0] == 0.0

    def test_deterministic(self):
        a = wiener_path(1000, 1e-3, seed=11)
        b = wiener_path(1000, 1e-3, seed=11)
        assert np.array_equal(a.phases, b.phases)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            wiener_path(0, 1e-3)
        with pytest.raises(ValueError):
            wiener_path(10, -1e-3)

    def test_increment_variance_in_chi2_band(self):
        var = 2.5e-4
        traj = wiener_path(100_001, var, seed=7)
        incr = np.diff(traj.phases)
        assert chi2_band(np.var(incr, ddof=1), var, incr.size)

    def test_increments_look_gaussian(self):
        traj = wiener_path(100_001, 1e-3, seed=8)
        incr = np.diff(traj.phases)
        n = incr.size
        assert abs(stats.skew(incr)) < 5 * np.sqrt(6 / n)
        assert abs(stats.kurtosis(incr)) < 5 * np.sqrt(24 / n)


class TestAwgn:
    def test_zero_variance_is_identity(self):
        x = np.exp(1j * np.linspace(0, 3, 50))
        assert np.array_equal(awgn(x, 0.0, seed=1), x)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            awgn(np.ones(4, complex), -1.0)

    def test_deterministic(self):
        x = np.ones(100, complex)
        assert np.array_equal(awgn(x, 0.1, seed=5), awgn(x, 0.1, seed=5))

    def test_per_dimension_variance(self):
        var = 0.04
        x = np.zeros(1_000_000, complex)
        noisy = awgn(x, var, seed=9)
        assert chi2_band(np.var(noisy.real, ddof=1), var, noisy.size)
        assert chi2_band(np.var(noisy.imag, ddof=1), var, noisy.size)

    def test_zero_mean(self):
        var = 0.04
        noisy = awgn(np.zeros(1_000_000, complex), var, seed=10)
        bound = 5 * np.sqrt(var / noisy.size)
        assert abs(noisy.real.mean()) < bound
        assert abs(noisy.imag.mean()) < bound
