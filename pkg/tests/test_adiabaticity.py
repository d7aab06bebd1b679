import math

import numpy as np
import pytest

from quenchecho import (
    Chain,
    IntegratorConfig,
    NoBracketError,
    classify_regime,
    echo_test,
    gap_minimum,
    linear,
    kzm_schedule,
    min_adiabatic_tau,
    segmented_protocol,
    sweep_tau,
)


class TestEchoTest:
    def test_adiabatic_verdict(self, chain10, icfg):
        rep = echo_test(chain10, linear(10.0, 0.0, 20.0), cfg=icfg)
        assert rep.verdict == "adiabatic"
        assert rep.fidelity > 0.999
        assert rep.regime_hint == "adiabatic"
        assert rep.observables.magnetization == pytest.approx(1.0, abs=1e-3)

    def test_impulse_false_positive_killed_by_delay(self, chain10, icfg):
        fwd = linear(10.0, 0.0, 1e-4)
        no_delay = echo_test(chain10, fwd, delay=0.0, cfg=icfg)
        with_delay = echo_test(chain10, fwd, delay=0.7, cfg=icfg)
        assert no_delay.fidelity > 0.8  # looks adiabatic without the delay
        assert with_delay.fidelity < 0.5
        # the delayed echo lands on the impulse-regime closed form
        from quenchecho import fidelity_free_evolution
        closed = fidelity_free_evolution(chain10, 0.0, 0.7)
        assert with_delay.fidelity == pytest.approx(closed, abs=0.01)
        assert with_delay.verdict == "not-adiabatic"
        assert no_delay.regime_hint == "impulse"
        assert with_delay.delay_used == 0.7

    def test_delay_invariance_when_truly_adiabatic(self, chain10, icfg):
        fwd = linear(10.0, 0.0, 20.0)
        base = echo_test(chain10, fwd, delay=0.0, cfg=icfg).fidelity
        for dt in (0.7, 5.0, 40.0):
            f = echo_test(chain10, fwd, delay=dt, cfg=icfg).fidelity
            assert abs(f - base) <= 0.01

    def test_nonlinear_forward_hint_unknown(self, icfg):
        chain = Chain(10, 0.5)
        rep = echo_test(chain, kzm_schedule(chain, 2.0, -3.0, 5.0), cfg=icfg)
        assert rep.regime_hint == "unknown"
        assert 0.0 <= rep.fidelity <= 1.0

    def test_validation(self, chain10, icfg):
        fwd = linear(10.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            echo_test(chain10, fwd, threshold=0.0, cfg=icfg)
        with pytest.raises(ValueError):
            echo_test(chain10, fwd, delay=-1.0, cfg=icfg)


class TestSweep:
    def test_table_shape_and_trend(self, chain10, icfg):
        grid = np.geomspace(0.1, 30.0, 8)
        tab = sweep_tau(chain10, grid, delay=0.7, g0=10.0, gT=0.0, cfg=icfg)
        assert len(tab.rows()) == 8
        assert tab.fidelity[-1] > 0.99  # slow end is adiabatic
        assert tab.fidelity[0] < 0.5    # fast end is caught by the delay
        assert np.all((tab.kink_density >= 0) & (tab.kink_density <= 1))
        # identity up to the integrator's norm drift
        assert np.allclose(tab.kink_density, 0.5 * (1 - tab.magnetization), atol=1e-5)

    def test_grid_validation(self, chain10, icfg):
        with pytest.raises(ValueError):
            sweep_tau(chain10, [2.0, 1.0], 0.0, 10.0, 0.0, cfg=icfg)
        with pytest.raises(ValueError):
            sweep_tau(chain10, [-1.0, 1.0], 0.0, 10.0, 0.0, cfg=icfg)
        with pytest.raises(ValueError):
            sweep_tau(chain10, [], 0.0, 10.0, 0.0, cfg=icfg)


class TestMinTau:
    def test_threshold_crossing_small_chain(self, chain10, icfg):
        tau_c = min_adiabatic_tau(chain10, 10.0, 0.0, threshold=0.9, cfg=icfg,
                                  tau_min=0.5, tau_max=50.0)
        assert tau_c == pytest.approx(5.19, rel=0.05)
        f = echo_test(chain10, linear(10.0, 0.0, tau_c), cfg=icfg).fidelity
        assert f >= 0.9

    def test_reproducible(self, chain10, icfg):
        a = min_adiabatic_tau(chain10, 10.0, 0.0, threshold=0.9, cfg=icfg,
                              tau_min=0.5, tau_max=50.0)
        b = min_adiabatic_tau(chain10, 10.0, 0.0, threshold=0.9, cfg=icfg,
                              tau_min=0.5, tau_max=50.0)
        assert a == b

    def test_no_bracket(self, chain10, icfg):
        with pytest.raises(NoBracketError):
            min_adiabatic_tau(chain10, 10.0, 0.0, threshold=0.999, cfg=icfg,
                              tau_min=1e-3, tau_max=1e-2)

    def test_validation(self, chain10, icfg):
        with pytest.raises(ValueError):
            min_adiabatic_tau(chain10, 10.0, 0.0, threshold=1.5, cfg=icfg)

    @pytest.mark.slow
    def test_large_chain_decade(self, chain50):
        cfg = IntegratorConfig()
        tau_c = min_adiabatic_tau(chain50, 10.0, 0.0, threshold=0.9, cfg=cfg,
                                  tau_min=50.0, tau_max=1e3)
        assert 1e2 <= tau_c <= 1e3


class TestSegmentedProtocol:
    def test_single_segment_matches_plain_search(self, chain10, icfg):
        sched, rates = segmented_protocol(chain10, 10.0, 0.0, 1, cfg=icfg,
                                          tau_min=0.5, tau_max=50.0)
        plain = min_adiabatic_tau(chain10, 10.0, 0.0, cfg=icfg,
                                  tau_min=0.5, tau_max=50.0)
        assert rates == [plain]
        assert sched.total_duration == pytest.approx(10.0 * plain)

    def test_segmentation_saves_time(self, chain10, icfg):
        s1, _ = segmented_protocol(chain10, 10.0, 0.0, 1, cfg=icfg,
                                   tau_min=0.5, tau_max=50.0)
        s3, rates = segmented_protocol(chain10, 10.0, 0.0, 3, cfg=icfg,
                                       tau_min=0.5, tau_max=50.0)
        assert len(rates) == 3
        assert s3.g_start == 10.0 and s3.g_end == pytest.approx(0.0, abs=1e-12)
        assert s3.total_duration < s1.total_duration
        # the segment containing the minimal gap needs the slowest rate
        assert max(rates) == rates[-1]

    def test_validation(self, chain10, icfg):
        with pytest.raises(ValueError):
            segmented_protocol(chain10, 10.0, 0.0, 0, cfg=icfg)


class TestClassifyRegime:
    def test_examples(self, chain50):
        assert classify_regime(chain50, 0.004, 10.0, 0.0) == "impulse"
        assert classify_regime(chain50, 150.0, 10.0, 0.0) == "adiabatic"
        assert classify_regime(chain50, 10.0, 10.0, 0.0) == "intermediate"

    def test_monotone_in_tau(self, chain50):
        order = {"impulse": 0, "intermediate": 1, "adiabatic": 2}
        labels = [order[classify_regime(chain50, tq, 10.0, 0.0)]
                  for tq in np.geomspace(1e-5, 1e4, 40)]
        assert labels == sorted(labels)

    def test_adiabatic_boundary_constant(self, chain50):
        _, d_min = gap_minimum(chain50)
        edge = 2.0 / d_min ** 2
        assert classify_regime(chain50, edge * 1.01, 10.0, 0.0) == "adiabatic"
        assert classify_regime(chain50, edge * 0.99, 10.0, 0.0) != "adiabatic"

    def test_window_missing_gap_minimum(self, chain50):
        # both endpoints above the gap minimum: the relevant gap is the edge one
        assert classify_regime(chain50, 1e-9, 10.0, 5.0) == "impulse"
        assert classify_regime(chain50, 1.0, 10.0, 5.0) == "adiabatic"

    def test_zero_span(self, chain50):
        assert classify_regime(chain50, 1.0, 3.0, 3.0) == "adiabatic"

    def test_validation(self, chain50):
        with pytest.raises(ValueError):
            classify_regime(chain50, 0.0, 10.0, 0.0)
