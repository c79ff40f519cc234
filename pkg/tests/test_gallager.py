import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bims_extremes.channel import BimsChannel, capacity
from bims_extremes.errors import RhoOutOfRange
from bims_extremes.gallager import (
    THIRD_DERIVATIVE_BOUND,
    bhattacharyya,
    central_abs_moment,
    cutoff_rate,
    dispersion,
    dispersion_fd,
    e0,
    e0_derivative,
    e0_s,
    e0_second_derivative_at_zero,
    e0_third_derivative_at_zero,
    f_rho,
    f_rho_decomposed,
    f_rho_s,
    moment_bound,
    report,
)

from conftest import bsc_dispersion, bsc_f1, f_from_matrix, mixture_components

RHOS = [-0.9, -0.5, 0.5, 1.0, 2.0, 10.0]
CHANNELS = [
    BimsChannel.bsc(0.0), BimsChannel.bsc(0.11), BimsChannel.bsc(0.5), BimsChannel.bec(0.0),
    BimsChannel.bec(0.5), BimsChannel.bec(1.0), BimsChannel.bsec(0.05, 0.2),
    BimsChannel.matrix([[0.6, 0.3, 0.1], [0.1, 0.3, 0.6]]),
    BimsChannel.mixture([(0.2, 0.0), (0.3, 0.25), (0.5, 0.45)]),
    BimsChannel.biawgn(0.0, bins=401),
]
ids = [c.label for c in CHANNELS]


class TestF:
    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_rho_zero_is_one(self, ch):
        assert f_rho(ch, 0.0) == pytest.approx(1.0, abs=1e-14)
        assert e0(ch, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_bec_half(self):
        assert f_rho(BimsChannel.bec(0.5), 1.0) == 0.75
        assert e0(BimsChannel.bec(0.5), 1.0) == pytest.approx(-math.log2(0.75), abs=1e-15)
        assert e0(BimsChannel.bec(0.5), 1.0) == pytest.approx(0.41504, abs=1e-5)

    def test_bsc_half_capacity(self):
        assert f_rho(BimsChannel.bsc(0.110028), 1.0) == pytest.approx(bsc_f1(0.110028), abs=1e-15)
        assert f_rho(BimsChannel.bsc(0.110028), 1.0) == pytest.approx(0.81293, abs=1e-4)

    def test_noiseless_e0_is_rho(self):
        assert e0(BimsChannel.bsc(0.0), 1.0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    @pytest.mark.parametrize("rho", RHOS)
    def test_matches_plain_sum_and_decomposition(self, ch, rho):
        direct = f_rho(ch, rho)
        assert direct == pytest.approx(f_from_matrix(ch.rows.tolist(), rho), rel=1e-12)
        assert abs(direct - f_rho_decomposed(ch, rho)) <= 1e-10

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_range_and_monotone(self, ch):
        grid = np.linspace(-0.99, 10, 200)
        F = np.array([f_rho(ch, r) for r in grid])
        assert np.all(np.diff(F) <= 1e-14)
        assert np.all(F[grid <= 0] <= 2 + 1e-12) and np.all(F[grid <= 0] >= 1 - 1e-12)
        assert np.all(F[grid >= 0] <= 1 + 1e-12) and np.all(F[grid >= 0] >= -1e-12)

    def test_limit_at_minus_one(self):
        # F(rho) -> sum_y max_x P(y|x); for the noiseless channel that is 2
        assert f_rho(BimsChannel.bsc(0.0), -1 + 1e-4) == pytest.approx(2.0, abs=0.01)
        # a useless channel has F = 1 for every rho
        assert f_rho(BimsChannel.bsc(0.5), -1 + 1e-4) == pytest.approx(1.0, abs=1e-12)

    def test_guard(self):
        with pytest.raises(RhoOutOfRange):
            f_rho(BimsChannel.bsc(0.1), -1.0)
        with pytest.raises(RhoOutOfRange):
            e0(BimsChannel.bsc(0.1), -1 + 1e-7)

    def test_near_boundary_no_overflow(self):
        v = f_rho(BimsChannel.bsc(0.3), -1 + 2e-6)
        assert math.isfinite(v) and v == pytest.approx(1.4, abs=1e-4)


class TestFrhoS:
    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_rho_zero(self, ch):
        assert f_rho_s(ch, 0.0, 0.7) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    @pytest.mark.parametrize("rho", RHOS)
    def test_gallager_s_identity(self, ch, rho):
        assert abs(f_rho_s(ch, rho, 1 / (1 + rho)) - f_rho(ch, rho)) <= 1e-12

    def test_bec_s_one(self):
        assert f_rho_s(BimsChannel.bec(0.5), 1.0, 1.0) == pytest.approx(0.75, abs=1e-15)

    def test_bsc_s_one_direct(self):
        # sum over (x, y): 1/2 P(y|x) (P(y) / P(y|x))**rho with P(y) = 1/2
        eps, rho = 0.11, 0.7
        want = (1 - eps) * (0.5 / (1 - eps)) ** rho + eps * (0.5 / eps) ** rho
        assert f_rho_s(BimsChannel.bsc(eps), rho, 1.0) == pytest.approx(want, rel=1e-14)

    def test_negative_s(self):
        with pytest.raises(ValueError):
            f_rho_s(BimsChannel.bsc(0.1), 1.0, -0.1)


class TestBhattacharyya:
    def test_noiseless(self):
        assert bhattacharyya(BimsChannel.bsc(0.0)) == 0.0

    @pytest.mark.parametrize("eps", [0.0, 0.1, 0.5, 0.9, 1.0])
    def test_bec(self, eps):
        assert bhattacharyya(BimsChannel.bec(eps)) == pytest.approx(eps, abs=1e-15)

    def test_bsc(self):
        assert bhattacharyya(BimsChannel.bsc(0.110028)) == pytest.approx(2 * math.sqrt(0.110028 * 0.889972), abs=1e-15)
        assert bhattacharyya(BimsChannel.bsc(0.110028)) == pytest.approx(0.62585, abs=1e-4)

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_identity(self, ch):
        assert abs(bhattacharyya(ch) - (2 * f_rho(ch, 1.0) - 1)) <= 1e-12


class TestCutoffRate:
    def test_values(self):
        assert cutoff_rate(BimsChannel.bsc(0.0)) == pytest.approx(1.0, abs=1e-15)
        assert cutoff_rate(BimsChannel.bec(0.5)) == pytest.approx(0.41504, abs=1e-5)
        assert cutoff_rate(BimsChannel.bec(1.0)) == pytest.approx(0.0, abs=1e-15)


class TestDerivative:
    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_slope_at_zero_is_capacity(self, ch):
        assert e0_derivative(ch, 0.0) == pytest.approx(capacity(ch), abs=1e-6)

    def test_noiseless(self):
        for rho in (-0.5, 0.0, 1.0, 3.0):
            assert e0_derivative(BimsChannel.bsc(0.0), rho) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("rho", [-0.9, -0.3, 0.5, 1.0, 4.0])
    def test_bec_analytic(self, rho):
        eps = 0.5
        a = 2.0**-rho * (1 - eps)
        assert e0_derivative(BimsChannel.bec(eps), rho) == pytest.approx(a / (a + eps), abs=1e-9)

    def test_bec_one(self):
        assert e0_derivative(BimsChannel.bec(0.5), 1.0) == pytest.approx(1 / 3, abs=1e-4)


class TestDispersion:
    def test_noiseless(self):
        assert dispersion(BimsChannel.bsc(0.0)) == 0.0

    def test_bec(self):
        assert dispersion(BimsChannel.bec(0.5)) == pytest.approx(0.25, abs=1e-15)

    def test_bsc(self):
        assert dispersion(BimsChannel.bsc(0.110028)) == pytest.approx(bsc_dispersion(0.110028), abs=1e-14)
        assert dispersion(BimsChannel.bsc(0.110028)) == pytest.approx(0.8908, abs=1e-3)

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_two_routes(self, ch):
        assert abs(dispersion(ch) - dispersion_fd(ch)) <= 1e-4

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_e0_curvature_independent_of_s(self, ch):
        a = e0_second_derivative_at_zero(ch)
        b = e0_second_derivative_at_zero(ch, s=1.0)
        assert abs(a - b) <= 1e-4


class TestMoments:
    def test_noiseless(self):
        assert central_abs_moment(BimsChannel.bsc(0.0), 3) == 0.0

    def test_second_moment_is_dispersion(self):
        ch = BimsChannel.bec(0.5)
        assert central_abs_moment(ch, 2) == pytest.approx(0.25, abs=1e-15)

    def test_bsc_two_point(self):
        eps = 0.11
        a, b = math.log2(2 * (1 - eps)), math.log2(2 * eps)
        mean = (1 - eps) * a + eps * b
        want = (1 - eps) * abs(a - mean) ** 3 + eps * abs(b - mean) ** 3
        got = central_abs_moment(BimsChannel.bsc(eps), 3)
        assert got == pytest.approx(want, rel=1e-12)
        assert got <= moment_bound(3)

    def test_bound_values(self):
        assert moment_bound(3) == pytest.approx((2 + (3 / math.log(2)) * (1 + 2 ** (1 / 3))) ** 3, rel=1e-15)
        assert moment_bound(3) == pytest.approx(1635.1625, abs=1e-3)
        assert THIRD_DERIVATIVE_BOUND == pytest.approx(785.6188, abs=1e-3)
        assert THIRD_DERIVATIVE_BOUND <= 785.7

    def test_bad_k(self):
        with pytest.raises(ValueError):
            central_abs_moment(BimsChannel.bsc(0.1), 0)

    @pytest.mark.parametrize("ch", CHANNELS, ids=ids)
    def test_third_derivative_is_scaled_third_cumulant(self, ch):
        from bims_extremes.channel import info_density_distribution
        d = info_density_distribution(ch)
        mean = sum(s.value * s.probability for s in d)
        k3 = sum(s.probability * (s.value - mean) ** 3 for s in d)
        assert e0_third_derivative_at_zero(ch) == pytest.approx(math.log(2) ** 2 * k3, abs=2e-3)


@settings(max_examples=60, deadline=None)
@given(mixture_components, st.sampled_from(RHOS))
def test_two_path_property(comps, rho):
    ch = BimsChannel.mixture(comps)
    assert abs(f_rho(ch, rho) - f_rho_decomposed(ch, rho)) <= 1e-10
    assert abs(bhattacharyya(ch) - (2 * f_rho(ch, 1.0) - 1)) <= 1e-12


def test_report_invariants():
    r = report(BimsChannel.bsc(0.11), [0.5, 1.0])
    assert abs(r.z - (2 * r.f1 - 1)) <= 1e-12
    assert abs(r.r0 + math.log2(r.f1)) <= 1e-12
    assert [rho for rho, _ in r.e0_at] == [0.5, 1.0]
