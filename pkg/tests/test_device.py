"""Single-cell model: switching curve, retention law, pulse/relax lifecycle."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from memdecide import (
    OFF,
    DeviceParams,
    DeviceState,
    RetentionDistribution,
    SwitchingCurve,
    apply_pulse,
    read_current,
    relax,
    sample_retention,
    switching_probability,
)

CURVE = SwitchingCurve(v_median=0.6, v_spread=0.05)

# Normal CDF one spread above the median, frozen from the analytic value and
# re-derived below by integrating the density.
PHI_AT_PLUS_ONE_SPREAD = 0.8413447460685429


def _params(median_s=1.0, sigma_log=0.0, i_cc=300.0, **kw):
    return DeviceParams(
        i_cc_uA=i_cc,
        switching=CURVE,
        retention=RetentionDistribution(median_s=median_s, sigma_log=sigma_log),
        **kw,
    )


class TestSwitchingCurve:
    def test_median_gives_half(self):
        assert switching_probability(CURVE, 0.6) == pytest.approx(0.5, abs=1e-15)

    def test_far_left_tail_negligible(self):
        assert switching_probability(CURVE, 0.0) < 1e-6

    def test_one_spread_above_median_golden(self):
        assert switching_probability(CURVE, 0.65) == pytest.approx(
            PHI_AT_PLUS_ONE_SPREAD, abs=1e-12
        )

    def test_golden_value_against_quadrature(self):
        # Independent re-derivation: integrate the set-voltage density up to
        # the pulse amplitude.
        def density(v):
            z = (v - 0.6) / 0.05
            return math.exp(-0.5 * z * z) / (0.05 * math.sqrt(2.0 * math.pi))

        integral, err = quad(density, -np.inf, 0.65)
        assert err < 1e-7  # quad's conservative bound; actual agreement ~1e-16
        assert integral == pytest.approx(PHI_AT_PLUS_ONE_SPREAD, abs=1e-9)

    def test_limits(self):
        assert switching_probability(CURVE, -np.inf) == 0.0
        assert switching_probability(CURVE, np.inf) == 1.0

    @given(
        v1=st.floats(-2.0, 2.0),
        v2=st.floats(-2.0, 2.0),
    )
    def test_monotone_in_amplitude(self, v1, v2):
        lo, hi = sorted((v1, v2))
        assert switching_probability(CURVE, lo) <= switching_probability(CURVE, hi)

    @pytest.mark.parametrize("bad_spread", [0.0, -0.05])
    def test_invalid_spread_rejected(self, bad_spread):
        with pytest.raises(ValueError):
            SwitchingCurve(v_median=0.6, v_spread=bad_spread)

    def test_independent_of_compliance_current(self):
        # Same curve in parameter sets with different compliance currents must
        # give bit-identical probabilities.
        p_small = _params(i_cc=10.0)
        p_large = _params(i_cc=300.0)
        for v in (0.45, 0.6, 0.62, 0.8):
            assert switching_probability(p_small.switching, v) == switching_probability(
                p_large.switching, v
            )


class TestRetention:
    def test_degenerate_spread_is_exact(self, rng):
        dist = RetentionDistribution(median_s=1.0, sigma_log=0.0)
        assert sample_retention(dist, rng) == 1.0

    def test_median_convergence(self, rng):
        dist = RetentionDistribution(median_s=1.0, sigma_log=0.5)
        samples = sample_retention(dist, rng, size=100_000)
        assert np.all(samples > 0.0)
        # Sample-median standard error is ~1.2533 * sigma_log / sqrt(n) in the
        # log domain, about 0.2% here; [0.98, 1.02] is a ~10-sigma band.
        assert 0.98 <= np.median(samples) <= 1.02

    def test_millisecond_scale(self, rng):
        dist = RetentionDistribution(median_s=0.01, sigma_log=0.5)
        samples = sample_retention(dist, rng, size=100_000)
        assert np.all(samples > 0.0)
        assert 0.0098 <= np.median(samples) <= 0.0102

    @pytest.mark.parametrize("median,sigma", [(0.0, 0.5), (-1.0, 0.5), (1.0, -0.1)])
    def test_invalid_parameters_rejected(self, median, sigma):
        with pytest.raises(ValueError):
            RetentionDistribution(median_s=median, sigma_log=sigma)


class TestDeviceParams:
    def test_i_on_defaults_to_compliance(self):
        assert _params(i_cc=270.0).i_on_uA == 270.0

    def test_on_current_must_exceed_leakage(self):
        with pytest.raises(ValueError):
            _params(i_on_uA=1.0, i_off_uA=2.0)

    def test_invalid_compliance(self):
        with pytest.raises(ValueError):
            _params(i_cc=0.0)


class TestApplyPulse:
    def test_certain_switching(self, rng):
        # +inf amplitude realizes switching probability exactly 1.
        params = _params(median_s=2.0, sigma_log=0.5)
        for _ in range(100):
            state = apply_pulse(OFF, params, np.inf, t=1.0, rng=rng)
            assert state.is_on and state.expiry > 1.0

    def test_impossible_switching(self, rng):
        params = _params()
        for _ in range(100):
            assert apply_pulse(OFF, params, -np.inf, t=1.0, rng=rng) is OFF

    def test_bernoulli_frequency(self, rng):
        # 3-standard-error band around p=0.1 over 1e5 Bernoulli repetitions.
        params = _params()
        v_10pct = CURVE.quantile(0.1)
        n = 100_000
        hits = sum(
            apply_pulse(OFF, params, v_10pct, 0.0, rng).is_on for _ in range(n)
        )
        band = 3.0 * math.sqrt(0.1 * 0.9 / n)
        assert abs(hits / n - 0.1) < band

    def test_repulse_refreshes_expiry(self, rng):
        params = _params(median_s=1.0, sigma_log=0.0)
        state = DeviceState(expiry=5.0)
        refreshed = apply_pulse(state, params, -np.inf, t=4.0, rng=rng)
        assert refreshed.is_on
        assert refreshed.expiry == 5.0  # t + deterministic retention of 1.0

    def test_determinism(self):
        params = _params(median_s=1.0, sigma_log=0.5)
        v = CURVE.quantile(0.3)
        runs = []
        for _ in range(2):
            rng = np.random.default_rng(42)
            state = OFF
            states = []
            for k in range(20):
                state = relax(state, 0.1 * k)
                state = apply_pulse(state, params, v, 0.1 * k, rng)
                states.append(state)
            runs.append(states)
        assert runs[0] == runs[1]


class TestRelax:
    def test_before_expiry_unchanged(self):
        state = DeviceState(expiry=2.0)
        assert relax(state, 1.0) == state

    def test_boundary_is_inclusive(self):
        assert relax(DeviceState(expiry=2.0), 2.0) is OFF

    def test_off_is_absorbing(self):
        assert relax(OFF, 123.0) is OFF

    @given(expiry=st.floats(0.1, 100.0), t=st.floats(0.0, 200.0))
    def test_idempotent(self, expiry, t):
        state = DeviceState(expiry=expiry)
        once = relax(state, t)
        assert relax(once, t) == once

    @given(
        expiry=st.floats(0.1, 100.0),
        t1=st.floats(0.0, 200.0),
        dt=st.floats(0.0, 100.0),
    )
    def test_off_stays_off(self, expiry, t1, dt):
        state = relax(DeviceState(expiry=expiry), t1)
        if not state.is_on:
            assert not relax(state, t1 + dt).is_on


class TestReadCurrent:
    @pytest.mark.parametrize("i_on", [300.0, 10.0])
    def test_on_reads_on_current(self, i_on):
        params = _params(i_cc=i_on)
        assert read_current(DeviceState(expiry=9.0), params) == i_on

    def test_off_reads_leakage(self):
        assert read_current(OFF, _params()) == 0.0

    def test_non_destructive(self):
        state = DeviceState(expiry=9.0)
        read_current(state, _params())
        assert state == DeviceState(expiry=9.0)
