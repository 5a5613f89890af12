"""Tests for path gain, geometry mapping, SNR and the capacity function."""
import math

import pytest
from hypothesis import given, strategies as st

from relaycap import (
    LinkGains,
    NodeGeometry,
    ParameterDomainError,
    PathLossParams,
    PowerBudget,
    capacity_of_snr,
    gains_from_geometry,
    path_gain,
    snr,
)

# (0.12 / 4 pi)^2, evaluated independently
REF_GAIN_1M = 9.118906527810398e-05


class TestPathGain:
    def test_reference_distance(self):
        assert path_gain(1.0) == pytest.approx(REF_GAIN_1M, rel=1e-12)
        assert path_gain(1.0) == pytest.approx((0.12 / (4 * math.pi)) ** 2, rel=1e-15)
        assert path_gain(1.0) == pytest.approx(9.1189e-5, rel=1e-5)

    def test_inverse_square(self):
        assert path_gain(2.0) == path_gain(1.0) / 4.0

    def test_offset_relay_distance(self):
        # relay at (0.5, 0.1): squared distance 0.26
        d = math.sqrt(0.26)
        assert path_gain(d) == pytest.approx(REF_GAIN_1M / 0.26, rel=1e-12)

    def test_base_gain_scales(self):
        params = PathLossParams(base_gain=42.0)
        assert path_gain(3.0, params) == pytest.approx(42.0 * path_gain(3.0), rel=1e-15)

    def test_exponent(self):
        params = PathLossParams(exponent=4.0)
        assert path_gain(2.0, params) == pytest.approx(path_gain(1.0) / 16.0, rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_nonpositive_distance_rejected(self, bad):
        with pytest.raises(ParameterDomainError):
            path_gain(bad)

    def test_invalid_params_rejected(self):
        with pytest.raises(ParameterDomainError):
            PathLossParams(wavelength=0.0)
        with pytest.raises(ParameterDomainError):
            PathLossParams(base_gain=-1.0)

    @given(st.floats(min_value=1e-3, max_value=1e6),
           st.floats(min_value=1e-3, max_value=1e6))
    def test_monotone_decreasing(self, d1, d2):
        if d1 == d2:
            return
        lo, hi = min(d1, d2), max(d1, d2)
        assert path_gain(lo) > path_gain(hi)


class TestGainsFromGeometry:
    def test_midpoint_on_axis(self):
        gains = gains_from_geometry(NodeGeometry(d_sd=1.0, d_sr_axis=0.5, d_r=0.0))
        assert gains.gamma_sr == pytest.approx(4.0 * gains.gamma_sd, rel=1e-12)
        assert gains.gamma_rd == pytest.approx(4.0 * gains.gamma_sd, rel=1e-12)

    def test_midpoint_with_offset_is_symmetric(self):
        gains = gains_from_geometry(NodeGeometry(d_sd=1.0, d_sr_axis=0.5, d_r=0.1))
        assert gains.gamma_sr == gains.gamma_rd

    def test_long_range_values(self):
        gains = gains_from_geometry(NodeGeometry(d_sd=500.0, d_sr_axis=250.0, d_r=10.0))
        assert gains.gamma_sr == pytest.approx(REF_GAIN_1M / 62600.0, rel=1e-12)
        assert gains.gamma_rd == pytest.approx(REF_GAIN_1M / 62600.0, rel=1e-12)
        assert gains.gamma_sd == pytest.approx(REF_GAIN_1M / 250000.0, rel=1e-12)

    def test_colocated_relay_rejected(self):
        with pytest.raises(ParameterDomainError):
            gains_from_geometry(NodeGeometry(d_sd=1.0, d_sr_axis=0.0, d_r=0.0))
        with pytest.raises(ParameterDomainError):
            gains_from_geometry(NodeGeometry(d_sd=1.0, d_sr_axis=1.0, d_r=0.0))

    @given(st.floats(min_value=-2.0, max_value=3.0),
           st.floats(min_value=0.01, max_value=1.0))
    def test_reflection_swaps_hop_gains(self, x, d_r):
        # Mirroring the relay across the bisector swaps the two hop gains.
        mirrored = 1.0 - x
        at_x = gains_from_geometry(NodeGeometry(1.0, x, d_r))
        at_mirror = gains_from_geometry(NodeGeometry(1.0, mirrored, d_r))
        assert at_mirror.gamma_sr == at_x.gamma_rd
        assert at_x.gamma_sd == at_mirror.gamma_sd

    def test_geometry_domain(self):
        with pytest.raises(ParameterDomainError):
            NodeGeometry(d_sd=0.0, d_sr_axis=0.5, d_r=0.1)
        with pytest.raises(ParameterDomainError):
            NodeGeometry(d_sd=1.0, d_sr_axis=0.5, d_r=-0.1)


class TestSnr:
    def test_zero_power(self):
        assert snr(1.0, 0.0, 1.0) == 0.0

    def test_fig_scale_arithmetic(self):
        assert snr(9.1189e-5, 0.1, 1e-6) == pytest.approx(9.1189, rel=1e-12)

    def test_unity(self):
        assert snr(2.0, 3.0, 6.0) == pytest.approx(1.0, rel=1e-15)

    def test_bad_noise(self):
        with pytest.raises(ParameterDomainError):
            snr(1.0, 1.0, 0.0)
        with pytest.raises(ParameterDomainError):
            snr(1.0, 1.0, -1.0)

    def test_negative_inputs(self):
        with pytest.raises(ParameterDomainError):
            snr(-1.0, 1.0, 1.0)


class TestCapacity:
    def test_zero(self):
        assert capacity_of_snr(0.0) == 0.0

    def test_snr_three_is_one_bit(self):
        assert capacity_of_snr(3.0) == pytest.approx(1.0, abs=1e-12)

    def test_half_log2_form(self):
        # independently: 0.5 * log2(1 + 9.1189) = 1.66949...
        assert capacity_of_snr(9.1189) == pytest.approx(1.6694902808590368, rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ParameterDomainError):
            capacity_of_snr(-0.5)

    @given(st.floats(min_value=0.0, max_value=1e9),
           st.floats(min_value=0.0, max_value=1e9))
    def test_subadditive(self, a, b):
        # concavity corollary: C(a) + C(b) >= C(a + b)
        assert capacity_of_snr(a) + capacity_of_snr(b) >= capacity_of_snr(a + b) - 1e-12

    @given(st.floats(min_value=0.0, max_value=1e12),
           st.floats(min_value=1e-9, max_value=1e12))
    def test_monotone(self, s, bump):
        assert capacity_of_snr(s + bump) >= capacity_of_snr(s)


class TestDomainTypes:
    def test_power_budget_domains(self):
        PowerBudget(p_s_max=0.0, p_r_max=0.0, noise=1e-9)
        with pytest.raises(ParameterDomainError):
            PowerBudget(p_s_max=-1.0, p_r_max=1.0, noise=1.0)
        with pytest.raises(ParameterDomainError):
            PowerBudget(p_s_max=1.0, p_r_max=1.0, noise=0.0)

    def test_link_gains_domain(self):
        LinkGains(0.0, 0.0, 0.0)
        with pytest.raises(ParameterDomainError):
            LinkGains(-1e-9, 0.0, 0.0)
