import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from omnisynth import antenna as ant
from omnisynth.errors import DomainError

hpbws = st.floats(min_value=1.0, max_value=80.0, allow_nan=False)
offsets = st.floats(min_value=-120.0, max_value=120.0, allow_nan=False)


def _oracle_gain(pattern, d_az, d_el):
    """Straight transcription of the horn model, one point at a time."""

    def cut(x_deg, k):
        if abs(x_deg) > 90:
            return 0.0
        x = math.radians(x_deg)
        u = k * math.sin(x)
        s = 1.0 if u == 0 else math.sin(math.pi * u) / (math.pi * u)
        return s * s * math.cos(x) ** 2

    return 10 ** (pattern.boresight_gain_dbi / 10) * cut(d_az, pattern.a) * cut(d_el, pattern.b)


class TestSolveBeamwidthParam:
    def test_ten_degrees(self):
        assert ant.solve_beamwidth_param(10.0) == pytest.approx(5.06, abs=0.05)

    def test_matches_scipy_bisection_for_widebeam(self):
        # Side lobes of sinc^2 stay far below 1/2, so [0.1, 100] brackets one root.
        ref = optimize.bisect(lambda x: ant.half_power_residual(x, 28.8), 0.1, 100.0, xtol=1e-14)
        assert ant.solve_beamwidth_param(28.8) == pytest.approx(ref, abs=1e-9)

    @pytest.mark.parametrize("bad", [0.0, -5.0, 180.0, 200.0, math.nan, math.inf])
    def test_rejects_out_of_domain(self, bad):
        with pytest.raises(DomainError):
            ant.solve_beamwidth_param(bad)

    def test_no_root_at_or_above_ninety(self):
        with pytest.raises(DomainError, match="no half-power root"):
            ant.solve_beamwidth_param(120.0)

    @settings(max_examples=60, deadline=None)
    @given(hpbws)
    def test_root_certifies(self, h):
        a = ant.solve_beamwidth_param(h)
        assert abs(ant.half_power_residual(a, h)) <= 1e-9

    @settings(max_examples=40, deadline=None)
    @given(hpbws, hpbws)
    def test_narrower_beam_needs_larger_param(self, h1, h2):
        if abs(h1 - h2) < 1e-6:
            return
        lo, hi = sorted((h1, h2))
        assert ant.solve_beamwidth_param(lo) > ant.solve_beamwidth_param(hi)


class TestPattern:
    def test_canonical_patterns_build(self):
        for p in (ant.NARROWBEAM_28GHZ, ant.WIDEBEAM_28GHZ, ant.HORN_73GHZ):
            assert abs(ant.half_power_residual(p.a, p.az_hpbw_deg)) <= 1e-9
            assert abs(ant.half_power_residual(p.b, p.el_hpbw_deg)) <= 1e-9

    def test_rejects_mismatched_params(self):
        with pytest.raises(DomainError):
            ant.HornPattern(10.0, 10.0, 10.0, a=4.0, b=5.0562)

    def test_boresight_gain(self):
        p = ant.make_pattern(24.5, 10.9, 8.6)
        assert ant.pattern_gain(p, 0.0, 0.0) == pytest.approx(10**2.45, rel=1e-15)

    def test_back_hemisphere_is_zero(self):
        p = ant.WIDEBEAM_28GHZ
        assert ant.pattern_gain(p, 91.0, 0.0) == 0.0
        assert ant.pattern_gain(p, 0.0, -135.0) == 0.0

    def test_matches_scalar_oracle(self):
        p = ant.NARROWBEAM_28GHZ
        for d_az, d_el in [(0, 0), (3.3, -1.2), (-17.0, 4.0), (45.0, 60.0), (89.9, 0.0)]:
            assert ant.pattern_gain(p, d_az, d_el) == pytest.approx(
                _oracle_gain(p, d_az, d_el), rel=1e-12, abs=1e-300
            )

    def test_broadcasts(self):
        p = ant.NARROWBEAM_28GHZ
        g = ant.pattern_gain(p, np.array([0.0, 5.45]), 0.0)
        assert g.shape == (2,)
        assert g[1] == pytest.approx(p.gain_linear / 2, rel=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(hpbws, hpbws, st.floats(-10, 30))
    def test_half_power_points(self, h_az, h_el, gain):
        p = ant.make_pattern(gain, h_az, h_el)
        for d_az, d_el in [(h_az / 2, 0), (-h_az / 2, 0), (0, h_el / 2), (0, -h_el / 2)]:
            assert ant.pattern_gain(p, d_az, d_el) == pytest.approx(p.gain_linear / 2, rel=1e-6)

    @settings(max_examples=100, deadline=None)
    @given(offsets, offsets)
    def test_symmetry_exact(self, phi, theta):
        p = ant.NARROWBEAM_28GHZ
        g = ant.pattern_gain(p, phi, theta)
        assert ant.pattern_gain(p, -phi, theta) == g
        assert ant.pattern_gain(p, phi, -theta) == g

    @settings(max_examples=100, deadline=None)
    @given(offsets, offsets, hpbws, hpbws)
    def test_separability_exact_at_unit_gain(self, phi, theta, h_az, h_el):
        p = ant.make_pattern(0.0, h_az, h_el)
        assert p.gain_linear == 1.0
        lhs = ant.pattern_gain(p, phi, theta) * p.gain_linear
        rhs = ant.pattern_gain(p, phi, 0.0) * ant.pattern_gain(p, 0.0, theta)
        assert lhs == rhs

    @settings(max_examples=50, deadline=None)
    @given(offsets, offsets)
    def test_separability_at_any_gain(self, phi, theta):
        p = ant.NARROWBEAM_28GHZ
        lhs = ant.pattern_gain(p, phi, theta) * p.gain_linear
        rhs = ant.pattern_gain(p, phi, 0.0) * ant.pattern_gain(p, 0.0, theta)
        assert lhs == pytest.approx(rhs, rel=1e-14, abs=1e-300)


class TestCombine:
    def test_three_pointing_peak(self):
        p = ant.make_pattern(0.0, 10.0, 10.0)
        pts = [(-10.0, 0.0), (0.0, 0.0), (10.0, 0.0)]
        gm = ant.combine_patterns(p, pts, ant.AngularGrid.around(p, pts))
        assert gm.peak_db() == pytest.approx(0.25, abs=0.1)

    def test_nine_pointing_peak(self):
        p = ant.make_pattern(0.0, 10.0, 8.0)
        pts = ant.hpbw_grid_pointings(p)
        gm = ant.combine_patterns(p, pts, ant.AngularGrid.around(p, pts, step=0.05))
        assert gm.peak_db() == pytest.approx(0.5, abs=0.15)

    def test_single_pointing_is_the_pattern(self):
        p = ant.NARROWBEAM_28GHZ
        grid = ant.AngularGrid(-20, 20, -10, 10, step=0.5)
        gm = ant.combine_patterns(p, [(0.0, 0.0)], grid)
        ref = ant.pattern_gain(p, grid.az[:, None], grid.el[None, :])
        np.testing.assert_array_equal(gm.gain_linear, ref)

    def test_wraps_azimuth(self):
        p = ant.make_pattern(0.0, 10.0, 10.0)
        grid = ant.AngularGrid(-5, 5, 0, 0, step=1.0)
        a = ant.combine_patterns(p, [(355.0, 0.0)], grid).gain_linear
        b = ant.combine_patterns(p, [(-5.0, 0.0)], grid).gain_linear
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_empty_pointings_rejected(self):
        with pytest.raises(DomainError):
            ant.combine_patterns(ant.NARROWBEAM_28GHZ, [])

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(-30, 30), st.floats(-20, 20)), min_size=1, max_size=5),
        st.tuples(st.floats(-30, 30), st.floats(-20, 20)),
    )
    def test_linearity_exact(self, a_pts, b_pt):
        p = ant.NARROWBEAM_28GHZ
        grid = ant.AngularGrid(-40, 40, -25, 25, step=1.0)
        both = ant.combine_patterns(p, a_pts + [b_pt], grid)
        split = ant.combine_patterns(p, a_pts, grid) + ant.combine_patterns(p, [b_pt], grid)
        np.testing.assert_array_equal(both.gain_linear, split.gain_linear)

    @settings(max_examples=20, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(-30, 30), st.floats(-20, 20)), min_size=1, max_size=4),
        st.lists(st.tuples(st.floats(-30, 30), st.floats(-20, 20)), min_size=1, max_size=4),
    )
    def test_linearity_general(self, a_pts, b_pts):
        p = ant.NARROWBEAM_28GHZ
        grid = ant.AngularGrid(-40, 40, -25, 25, step=1.0)
        both = ant.combine_patterns(p, a_pts + b_pts, grid)
        split = ant.combine_patterns(p, a_pts, grid) + ant.combine_patterns(p, b_pts, grid)
        np.testing.assert_allclose(both.gain_linear, split.gain_linear, rtol=1e-13)


class TestRipple:
    def test_uniform_map(self):
        gm = ant.GainMap(np.arange(5.0), np.arange(3.0), np.full((5, 3), 7.0))
        assert ant.ripple(gm, (0, 4)) == 0.0

    def test_one_cell(self):
        gm = ant.GainMap(np.arange(5.0), np.arange(3.0), np.arange(15.0).reshape(5, 3) + 1)
        assert ant.ripple(gm, (2, 2), (1, 1)) == 0.0

    def test_known_spread(self):
        gm = ant.GainMap(np.arange(2.0), np.arange(1.0), np.array([[1.0], [10.0]]))
        assert ant.ripple(gm, (0, 1)) == pytest.approx(10.0)

    def test_three_pointing_value_frozen(self):
        # Not below 0.1 dB with this pattern model; see the acceptance notes.
        p = ant.make_pattern(0.0, 10.0, 10.0)
        pts = [(-10.0, 0.0), (0.0, 0.0), (10.0, 0.0)]
        gm = ant.combine_patterns(p, pts, ant.AngularGrid.around(p, pts))
        assert ant.ripple(gm, (-10, 10)) == pytest.approx(0.1488, abs=5e-4)

    def test_outside_region(self):
        gm = ant.GainMap(np.arange(2.0), np.arange(1.0), np.ones((2, 1)))
        with pytest.raises(DomainError):
            ant.ripple(gm, (5, 6))


class TestBeamIntegral:
    def test_matches_dblquad(self):
        p = ant.NARROWBEAM_28GHZ
        la, le = 3 * p.az_hpbw_deg, 3 * p.el_hpbw_deg
        ref, _ = integrate.dblquad(
            lambda th, ph: ant.pattern_gain(p, ph, th), -la, la, -le, le, epsabs=0, epsrel=1e-10
        )
        assert ant.integrated_beam_power(p, rtol=1e-9) == pytest.approx(ref, rel=1e-6)

    def test_offset_pointing_matches_dblquad(self):
        p = ant.WIDEBEAM_28GHZ
        la, le = 2 * p.az_hpbw_deg, 2 * p.el_hpbw_deg
        ref, _ = integrate.dblquad(
            lambda th, ph: ant.pattern_gain(p, ph - 10.0, th + 5.0), -la, la, -le, le, epsrel=1e-10
        )
        got = ant.integrated_beam_power(p, 2.0, [(10.0, -5.0)], rtol=1e-9)
        assert got == pytest.approx(ref, rel=1e-6)

    def test_ratio_to_itself(self):
        p = ant.NARROWBEAM_28GHZ
        assert ant.beam_power_ratio_db(p, p) == 0.0

    def test_wide_over_narrow(self):
        r = ant.beam_power_ratio_db(ant.WIDEBEAM_28GHZ, ant.NARROWBEAM_28GHZ)
        assert r == pytest.approx(9.4, abs=0.2)

    def test_nine_narrow_vs_one_wide(self):
        nb, wb = ant.NARROWBEAM_28GHZ, ant.WIDEBEAM_28GHZ
        d = ant.beam_power_ratio_db(nb, wb, 3.0, ant.hpbw_grid_pointings(nb))
        assert abs(d) == pytest.approx(0.08, abs=0.05)

    def test_limits_clip_at_ninety(self):
        p = ant.WIDEBEAM_28GHZ
        assert ant.integrated_beam_power(p, 10.0) == pytest.approx(
            ant.integrated_beam_power(p, 20.0), rel=1e-9
        )

    def test_bad_limits(self):
        with pytest.raises(DomainError):
            ant.integrated_beam_power(ant.WIDEBEAM_28GHZ, 0.0)

    def test_grid_pointings(self):
        p = ant.make_pattern(0, 10, 8)
        pts = ant.hpbw_grid_pointings(p)
        assert len(pts) == 9
        assert set(pts) == {(a, e) for a in (-10.0, 0.0, 10.0) for e in (-8.0, 0.0, 8.0)}
