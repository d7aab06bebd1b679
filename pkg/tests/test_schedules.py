import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quenchecho import (
    Chain,
    Schedule,
    Segment,
    concat,
    echo,
    gap,
    hold,
    kzm_schedule,
    linear,
    load_table,
    rc_schedule,
    reverse,
    save_table,
)


def gap_slope(chain, g):
    # analytic dDelta/dg
    c = math.cos(math.pi / chain.n_sites)
    return 4.0 * chain.coupling_j ** 2 * (g - c) / gap(chain, g)


class TestLinear:
    def test_endpoints_and_rate(self):
        s = linear(10.0, 0.0, 1.5)
        assert s.g_start == 10.0
        assert s.g_end == pytest.approx(0.0, abs=1e-12)
        assert s.total_duration == pytest.approx(15.0)
        g, gd = s.eval(3.0)
        assert gd == pytest.approx(-1.0 / 1.5)
        assert g == pytest.approx(10.0 - 3.0 / 1.5)

    def test_increasing_direction(self):
        s = linear(-2.0, 4.0, 2.0)
        assert s.eval(1.0)[1] == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            linear(1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            linear(1.0, 1.0, 1.0)

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 50))
    def test_duration_scales_with_span(self, g0, g1, tau):
        if abs(g0 - g1) < 1e-6:
            return
        s = linear(g0, g1, tau)
        assert s.total_duration == pytest.approx(abs(g0 - g1) * tau, rel=1e-12)


class TestHoldReverseEcho:
    def test_hold_constant(self):
        s = hold(3.0, 2.5)
        assert s.g(0.0) == 3.0
        assert s.g(2.5) == 3.0
        assert s.eval(1.0)[1] == 0.0

    def test_zero_duration_hold_allowed(self):
        assert hold(1.0, 0.0).total_duration == 0.0

    def test_reverse_reflects_time(self):
        s = linear(5.0, 1.0, 0.7)
        r = reverse(s)
        for t in np.linspace(0, s.total_duration, 13):
            assert r.g(t) == pytest.approx(s.g(s.total_duration - t), abs=1e-12)

    def test_reverse_flips_slope_sign(self):
        s = linear(5.0, 1.0, 0.7)
        assert reverse(s).eval(0.1)[1] == pytest.approx(-s.eval(0.1)[1])

    def test_echo_is_time_symmetric(self):
        s = concat(linear(4.0, 1.0, 0.3), linear(1.0, 0.5, 2.0))
        e = echo(s)
        assert e.total_duration == pytest.approx(2 * s.total_duration)
        for t in np.linspace(0, e.total_duration, 17):
            assert e.g(t) == pytest.approx(e.g(e.total_duration - t), abs=1e-12)

    def test_echo_of_nonlinear_schedule(self):
        chain = Chain(50, 0.5)
        s = kzm_schedule(chain, 2.0, -3.0, 6.0)
        e = echo(s)
        for t in np.linspace(0, e.total_duration, 17):
            assert e.g(t) == pytest.approx(e.g(e.total_duration - t), abs=1e-10)


class TestConcat:
    def test_continuity_enforced(self):
        with pytest.raises(ValueError):
            concat(linear(2.0, 1.0, 1.0), linear(1.5, 0.0, 1.0))

    def test_segment_count_and_breakpoints(self):
        s = concat(linear(2.0, 1.0, 1.0), hold(1.0, 0.5))
        assert len(s.segments) == 2
        assert np.allclose(s.breakpoints, [0.0, 1.0, 1.5])

    def test_equal_parts_span_full_range(self):
        g0, gT, m = 10.0, 0.0, 5
        edges = np.linspace(g0, gT, m + 1)
        parts = linear(float(edges[0]), float(edges[1]), 1.0)
        for i in range(1, m):
            parts = concat(parts, linear(float(edges[i]), float(edges[i + 1]), 1.0))
        assert parts.g_start == g0
        assert parts.g_end == pytest.approx(gT, abs=1e-12)


class TestKzmSchedule:
    def test_gap_ratio_criterion(self):
        chain = Chain(50, 0.5)
        gamma = 2.0
        s = kzm_schedule(chain, gamma, -10.0, 12.0)
        t_join = s.meta["t_join"]
        for t in np.linspace(0.0, s.total_duration, 401):
            g, gd = s.eval(t)
            if abs(g - math.cos(math.pi / 50)) < 0.01:
                continue
            d = gap(chain, g)
            resid = abs(abs(d / (gap_slope(chain, g) * gd)) * d - gamma) / gamma
            assert resid < 1e-6, (t, g)
        assert t_join > 0

    def test_gap_profile_hyperbolic_in_time(self):
        # Delta(t) = 1 / (1/Delta_min - |t - t_join| / gamma)
        chain = Chain(50, 0.5)
        gamma = 2.0
        s = kzm_schedule(chain, gamma, -10.0, 12.0)
        d_min = s.meta["delta_min"]
        t_join = s.meta["t_join"]
        for t in np.linspace(0.0, s.total_duration, 101):
            expected = 1.0 / (1.0 / d_min - abs(t - t_join) / gamma)
            assert gap(chain, s.g(t)) == pytest.approx(expected, rel=1e-9)

    def test_join_value_and_minimal_gap(self):
        chain = Chain(50, 0.5)
        s = kzm_schedule(chain, 2.0, -10.0, 12.0)
        assert s.g(s.meta["t_join"]) == pytest.approx(math.cos(math.pi / 50), abs=1e-6)
        gaps = [gap(chain, s.g(t)) for t in np.linspace(0, s.total_duration, 301)]
        assert min(gaps) == pytest.approx(s.meta["delta_min"], rel=1e-4)

    def test_unclamped_duration(self):
        chain = Chain(50, 0.5)
        s = kzm_schedule(chain, 2.0, -10.0, 12.0)
        expect = 2.0 / (0.5 * math.sin(math.pi / 50))
        assert s.meta["unclamped_duration"] == pytest.approx(expect, rel=1e-15)
        assert s.total_duration < expect

    def test_monotone_increasing(self):
        chain = Chain(50, 0.5)
        s = kzm_schedule(chain, 2.0, -3.0, 6.0)
        gs = [s.g(t) for t in np.linspace(0, s.total_duration, 200)]
        assert np.all(np.diff(gs) > 0)

    def test_bounds_validation(self):
        chain = Chain(50, 0.5)
        with pytest.raises(ValueError):
            kzm_schedule(chain, 2.0, 1.5, 3.0)  # g_lo above the join
        with pytest.raises(ValueError):
            kzm_schedule(chain, -1.0, -3.0, 3.0)


class TestRcSchedule:
    def test_rate_criterion(self):
        chain = Chain(50, 0.5)
        gp = 4.0 / math.pi
        s = rc_schedule(chain, gp, -10.0, 12.0)
        for t in np.linspace(0.0, s.total_duration, 401):
            g, gd = s.eval(t)
            d = gap(chain, g)
            assert abs(gd) == pytest.approx(d * d / gp, rel=1e-9)

    def test_rate_criterion_general_coupling(self):
        chain = Chain(20, 2.0)
        gp = 1.3
        s = rc_schedule(chain, gp, -4.0, 5.0)
        for t in np.linspace(0.0, s.total_duration, 101):
            g, gd = s.eval(t)
            d = gap(chain, g)
            assert abs(gd) == pytest.approx(d * d / gp, rel=1e-9)

    def test_midpoint_value(self):
        chain = Chain(50, 0.5)
        s = rc_schedule(chain, 4.0 / math.pi, -10.0, 12.0)
        assert s.g(s.meta["t_mid"]) == pytest.approx(math.cos(math.pi / 50), abs=1e-9)

    def test_unclamped_duration(self):
        chain = Chain(50, 0.5)
        gp = 4.0 / math.pi
        s = rc_schedule(chain, gp, -10.0, 12.0)
        # gamma' N / (4 J^2), which is gamma' N / (2J) at J = 1/2
        assert s.meta["unclamped_duration"] == pytest.approx(gp * 50 / (4 * 0.25), rel=1e-15)
        assert s.meta["unclamped_duration"] == pytest.approx(gp * 50 / (2 * 0.5), rel=1e-15)

    def test_duration_matches_gap_ratio_variant(self):
        chain = Chain(50, 0.5)
        gamma = 2.0
        sk = kzm_schedule(chain, gamma, -10.0, 12.0)
        sr = rc_schedule(chain, 2.0 * gamma / math.pi, -10.0, 12.0)
        assert sk.total_duration == pytest.approx(sr.total_duration, rel=0.01)


class TestTableIO:
    def test_roundtrip(self, tmp_path):
        chain = Chain(50, 0.5)
        s = kzm_schedule(chain, 2.0, -3.0, 6.0)
        path = tmp_path / "sched.csv"
        save_table(s, path, n_samples=2000)
        loaded = load_table(path)
        assert loaded.total_duration == pytest.approx(s.total_duration, rel=1e-12)
        for t in np.linspace(0, s.total_duration, 37):
            assert loaded.g(t) == pytest.approx(s.g(t), abs=2e-4)

    def test_header_and_format(self, tmp_path):
        path = tmp_path / "sched.csv"
        save_table(linear(2.0, 0.0, 1.0), path, n_samples=5)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# quenchecho-schedule ")
        assert lines[1] == "t,g"
        assert all("," in ln for ln in lines[2:])

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,g\n0,1\n0,2\n")
        with pytest.raises(ValueError):
            load_table(path)


class TestSegmentValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Segment("spline", 1.0, ())

    def test_nonpositive_duration(self):
        with pytest.raises(ValueError):
            Segment("linear", 0.0, (1.0, 1.0))

    def test_discontinuous_schedule_rejected(self):
        with pytest.raises(ValueError):
            Schedule([Segment("hold", 1.0, (1.0,)), Segment("hold", 1.0, (2.0,))])


@settings(max_examples=25)
@given(st.floats(0.5, 9.5), st.floats(-2.0, 0.4), st.floats(0.05, 5.0),
       st.floats(0.0, 3.0))
def test_echo_with_hold_time_symmetry(g0, g1, tau, dt):
    fwd = linear(g0, g1, tau)
    s = concat(concat(fwd, hold(fwd.g_end, dt)), reverse(fwd))
    assert s.total_duration == pytest.approx(2 * fwd.total_duration + dt, rel=1e-12)
    for t in np.linspace(0, s.total_duration, 11):
        assert s.g(t) == pytest.approx(s.g(s.total_duration - t), abs=1e-10)
