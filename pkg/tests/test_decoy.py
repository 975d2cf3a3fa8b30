import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from qkdcoex.decoy import (ChannelPoint, DecoyIntensities, DetectorSpec,
                           ProtocolParams, background_yield, binary_entropy,
                           e1_upper_bound, find_rate_cliff, gain_and_qber,
                           key_rate_details, max_secure_distance_km,
                           secure_key_rate_bps, y1_lower_bound)
from qkdcoex.errors import (ConfigError, DomainError, NoSecureDistanceError,
                            UndefinedBoundError)

INT = DecoyIntensities()          # 0.4 / 0.2 / 0 at 6:1:1
PARAMS = ProtocolParams()         # 625 MHz, ed 0.033, f 1.16, q 0.5


def params(ed=0.033, f=1.16):
    return ProtocolParams(misalignment_error=ed, ec_efficiency=f)


class TestBinaryEntropy:
    def test_maximum(self):
        assert binary_entropy(0.5) == 1.0

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_derived_point(self):
        assert binary_entropy(0.11) == pytest.approx(0.499915958164528,
                                                     abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            binary_entropy(-0.01)
        with pytest.raises(DomainError):
            binary_entropy(1.01)

    @given(x=st.floats(0.0, 1.0))
    def test_symmetry(self, x):
        assert binary_entropy(x) == pytest.approx(binary_entropy(1.0 - x),
                                                  abs=1e-12)

    @given(x=st.floats(0.0, 0.49), delta=st.floats(1e-6, 0.5))
    def test_increasing_below_half(self, x, delta):
        # gap large enough that the entropy difference is representable
        hi = min(0.5, x + delta)
        assert binary_entropy(hi) > binary_entropy(x)


class TestTypes:
    def test_intensity_ordering(self):
        with pytest.raises(ConfigError):
            DecoyIntensities(mu=0.2, nu=0.2)
        with pytest.raises(ConfigError):
            DecoyIntensities(mu=0.4, nu=0.0, omega=0.0)

    def test_probabilities_sum(self):
        with pytest.raises(ConfigError):
            DecoyIntensities(p_mu=0.5, p_nu=0.25, p_omega=0.2)

    def test_vacuum_must_be_zero(self):
        with pytest.raises(ConfigError):
            DecoyIntensities(mu=0.4, nu=0.2, omega=0.05)

    def test_detector_ranges(self):
        with pytest.raises(ConfigError):
            DetectorSpec(efficiency=0.0)
        with pytest.raises(ConfigError):
            DetectorSpec(dark_count_per_gate=1.0)

    def test_protocol_ranges(self):
        with pytest.raises(ConfigError):
            ProtocolParams(background_error=0.4)
        with pytest.raises(ConfigError):
            ProtocolParams(misalignment_error=0.5)
        with pytest.raises(ConfigError):
            ProtocolParams(ec_efficiency=0.99)

    def test_channel_point_ranges(self):
        with pytest.raises(ConfigError):
            ChannelPoint(eta=1.2, y0=0.0)
        with pytest.raises(ConfigError):
            ChannelPoint(eta=0.5, y0=1.0)


class TestGainAndQber:
    def test_dark_channel(self):
        ch = ChannelPoint(eta=0.0, y0=1e-4)
        q, e = gain_and_qber(0.4, ch, PARAMS)
        assert q == pytest.approx(1e-4, rel=1e-12)
        assert e == 0.5

    def test_dead_channel_reports_background_error(self):
        q, e = gain_and_qber(0.4, ChannelPoint(0.0, 0.0), PARAMS)
        assert q == 0.0
        assert e == 0.5

    def test_noiseless_error_free(self):
        q, e = gain_and_qber(0.4, ChannelPoint(0.3, 0.0), params(ed=0.0))
        assert e == 0.0
        assert q == pytest.approx(1 - math.exp(-0.12), rel=1e-12)

    def test_derived_gain(self):
        q, _ = gain_and_qber(0.4, ChannelPoint(0.1, 0.0), PARAMS)
        assert q == pytest.approx(0.03921056084767682, rel=1e-12)

    def test_matches_poisson_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            eta = 10 ** rng.uniform(-5, 0)
            y0 = rng.uniform(0.0, 1e-2)
            ed = rng.uniform(0.0, 0.1)
            ch = ChannelPoint(eta, y0)
            p = params(ed=ed)
            for intensity in (INT.mu, INT.nu, 0.0):
                q, e = gain_and_qber(intensity, ch, p)
                q_ref, e_ref = oracles.gain_qber(intensity, eta, y0, 0.5, ed)
                assert q == pytest.approx(q_ref, rel=1e-10, abs=1e-14)
                assert e == pytest.approx(e_ref, rel=1e-10, abs=1e-14)


class TestDecoyBounds:
    def test_frozen_perfect_channel_point(self):
        # eta 0.1, Y0 0: frozen from the closed-form expression and checked
        # against the true single-photon yield eta = 0.1
        qmu, _ = gain_and_qber(INT.mu, ChannelPoint(0.1, 0.0), PARAMS)
        qnu, _ = gain_and_qber(INT.nu, ChannelPoint(0.1, 0.0), PARAMS)
        y1 = y1_lower_bound(qmu, qnu, INT, 0.0)
        assert y1 == pytest.approx(0.09561574268127199, rel=1e-12)
        assert y1 <= oracles.true_y1(0.1, 0.0)

    def test_dead_channel_is_zero(self):
        assert y1_lower_bound(0.0, 0.0, INT, 0.0) == 0.0

    def test_background_only_channel(self):
        y0 = 5e-3
        qmu = qnu = y0
        y1 = y1_lower_bound(qmu, qnu, INT, y0)
        assert 0.0 <= y1 <= oracles.true_y1(0.0, y0)

    def test_e1_noiseless(self):
        p = params(ed=0.0)
        ch = ChannelPoint(0.1, 0.0)
        qnu, enu = gain_and_qber(INT.nu, ch, p)
        qmu, _ = gain_and_qber(INT.mu, ch, p)
        y1 = y1_lower_bound(qmu, qnu, INT, 0.0)
        assert e1_upper_bound(qnu, enu, INT.nu, y1, 0.0) == 0.0

    def test_e1_frozen_value_bounds_truth(self):
        p = params(ed=0.01)
        ch = ChannelPoint(0.1, 0.0)
        qmu, _ = gain_and_qber(INT.mu, ch, p)
        qnu, enu = gain_and_qber(INT.nu, ch, p)
        y1 = y1_lower_bound(qmu, qnu, INT, 0.0)
        e1 = e1_upper_bound(qnu, enu, INT.nu, y1, 0.0)
        assert e1 == pytest.approx(0.01264718254554585, rel=1e-12)
        assert e1 >= oracles.true_e1(0.1, 0.0, 0.5, 0.01)

    def test_e1_background_dominated_clamps(self):
        y0 = 1e-3
        ch = ChannelPoint(0.0, y0)
        qmu, _ = gain_and_qber(INT.mu, ch, PARAMS)
        qnu, enu = gain_and_qber(INT.nu, ch, PARAMS)
        y1 = y1_lower_bound(qmu, qnu, INT, y0)
        assert e1_upper_bound(qnu, enu, INT.nu, y1, y0) == 0.5

    def test_e1_undefined_when_yield_bound_zero(self):
        with pytest.raises(UndefinedBoundError):
            e1_upper_bound(0.01, 0.05, INT.nu, 0.0, 0.0)

    def test_degenerate_intensities_rejected(self):
        with pytest.raises(ConfigError):
            DecoyIntensities(mu=0.2, nu=0.2)

    def test_safety_against_oracle_sample(self):
        # small randomized scan; the full 1e4-point suite runs in acceptance
        rng = np.random.default_rng(11)
        for _ in range(500):
            eta = 10 ** rng.uniform(-6, 0)
            y0 = rng.uniform(0.0, 1e-2)
            ed = rng.uniform(0.0, 0.1)
            qmu, _ = oracles.gain_qber(INT.mu, eta, y0, 0.5, ed)
            qnu, enu = oracles.gain_qber(INT.nu, eta, y0, 0.5, ed)
            y1 = y1_lower_bound(qmu, qnu, INT, y0)
            assert y1 <= oracles.true_y1(eta, y0) + 1e-12
            if y1 > 0.0:
                e1 = e1_upper_bound(qnu, enu, INT.nu, y1, y0)
                assert e1 >= min(0.5, oracles.true_e1(eta, y0, 0.5, ed)) - 1e-12


class TestKeyRate:
    def test_background_only_is_zero(self):
        rate = secure_key_rate_bps(ChannelPoint(0.0, 1e-3), INT, PARAMS)
        assert rate == 0.0

    def test_short_link_positive(self):
        # lossless link: eta is the detector efficiency, Y0 the dark floor
        y0 = 4 * 3.0e-7 * 2
        rate = secure_key_rate_bps(ChannelPoint(0.1, y0), INT, PARAMS)
        assert rate > 0.0
        assert math.isfinite(rate)

    def test_never_negative_never_above_clock(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            ch = ChannelPoint(10 ** rng.uniform(-6, 0), rng.uniform(0, 1e-2))
            p = params(ed=rng.uniform(0, 0.1))
            rate = secure_key_rate_bps(ch, INT, p)
            assert 0.0 <= rate <= p.clock_hz

    def test_monotone_in_y0(self):
        rates = [secure_key_rate_bps(ChannelPoint(1e-3, y0), INT, PARAMS)
                 for y0 in np.linspace(0.0, 5e-4, 40)]
        assert all(a >= b - 1e-9 for a, b in zip(rates, rates[1:]))

    def test_monotone_in_eta(self):
        rates = [secure_key_rate_bps(ChannelPoint(eta, 1e-5), INT, PARAMS)
                 for eta in np.geomspace(1e-5, 1e-1, 40)]
        assert all(b >= a - 1e-9 for a, b in zip(rates, rates[1:]))

    def test_monotone_in_misalignment(self):
        rates = [secure_key_rate_bps(ChannelPoint(1e-3, 1e-5), INT, params(ed=ed))
                 for ed in np.linspace(0.0, 0.1, 40)]
        assert all(a >= b - 1e-9 for a, b in zip(rates, rates[1:]))

    def test_details_report_clamps(self):
        detail = key_rate_details(ChannelPoint(0.0, 1e-3), INT, PARAMS)
        assert detail.rate_bps == 0.0
        assert detail.clamp_events >= 1

    def test_emission_probability_scales_rate(self):
        half = DecoyIntensities(p_mu=0.375, p_nu=0.3125, p_omega=0.3125)
        ch = ChannelPoint(1e-2, 1e-5)
        assert secure_key_rate_bps(ch, half, PARAMS) == pytest.approx(
            0.5 * secure_key_rate_bps(ch, INT, PARAMS), rel=1e-12)


class TestMaxDistance:
    def test_closed_form_crossing(self):
        result = find_rate_cliff(lambda d: 50.0 - d, 0.0, 100.0)
        assert abs(result.distance_km - 50.0) <= 0.01
        assert not result.at_upper_boundary

    def test_positive_everywhere_flags_boundary(self):
        def evaluator(d):
            return ChannelPoint(0.1 * 10 ** (-0.02 * d / 10), 1e-6)

        result = max_secure_distance_km(evaluator, INT, PARAMS, (0.0, 50.0))
        assert result.at_upper_boundary
        assert result.distance_km == 50.0

    def test_bracketing_invariant(self):
        def evaluator(d):
            return ChannelPoint(0.1 * 10 ** (-0.25 * d / 10), 2e-4)

        def rate(d):
            return secure_key_rate_bps(evaluator(d), INT, PARAMS)

        result = max_secure_distance_km(evaluator, INT, PARAMS, (0.0, 300.0))
        assert not result.at_upper_boundary
        assert rate(result.distance_km) > 0.0
        assert rate(result.distance_km + 0.01) <= 0.0

    def test_no_secure_distance(self):
        def evaluator(d):
            return ChannelPoint(1e-9, 5e-3)

        with pytest.raises(NoSecureDistanceError):
            max_secure_distance_km(evaluator, INT, PARAMS, (0.0, 50.0))


class TestBackgroundYield:
    def test_dark_composition(self):
        y0 = background_yield(DetectorSpec(), PARAMS, 0.0)
        assert y0 == pytest.approx(2.4e-6, rel=1e-12)

    def test_noise_divisor_default_is_clock(self):
        y0 = background_yield(DetectorSpec(), PARAMS, 625.0)
        assert y0 == pytest.approx(2.4e-6 + 1e-6, rel=1e-12)

    def test_explicit_gate_divisor(self):
        det = DetectorSpec()
        y0 = background_yield(det, PARAMS, 1250.0,
                              per_pulse_divisor_hz=det.gate_hz)
        assert y0 == pytest.approx(2.4e-6 + 1e-6, rel=1e-12)
