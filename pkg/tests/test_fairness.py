import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lteu_coex import (InvalidReferenceError, ScenarioKey, build_report,
                       classify, service_fairness, throughput_fairness)


class TestThroughputFairness:
    def test_exact_proportional_share(self):
        assert throughput_fairness(2.0, 0.7 * 2.0, 0.3) == pytest.approx(0.0)

    def test_no_interferer(self):
        assert throughput_fairness(1.5, 1.5, 0.0) == pytest.approx(0.0)

    def test_direct_arithmetic(self):
        assert throughput_fairness(2.0, 1.0, 0.3) == pytest.approx(0.2)

    def test_invalid_reference(self):
        with pytest.raises(InvalidReferenceError):
            throughput_fairness(0.0, 1.0, 0.3)

    @given(ref=st.floats(min_value=0.1, max_value=10),
           lo=st.floats(min_value=0, max_value=5),
           delta=st.floats(min_value=0.001, max_value=5),
           alpha=st.floats(min_value=0, max_value=1))
    @settings(max_examples=60, deadline=None)
    def test_antitone_in_scenario_throughput(self, ref, lo, delta, alpha):
        assert (throughput_fairness(ref, lo + delta, alpha)
                < throughput_fairness(ref, lo, alpha))


class TestServiceFairness:
    def test_exact_proportional_stretch(self):
        assert service_fairness(100.0, 100.0 / 0.8, 0.2) == pytest.approx(0.0)

    def test_no_interferer(self):
        assert service_fairness(250.0, 250.0, 0.0) == pytest.approx(0.0)

    def test_direct_arithmetic(self):
        assert service_fairness(100.0, 150.0, 0.2) == pytest.approx(0.25)

    def test_alpha_one_undefined(self):
        with pytest.raises(ValueError, match="undefined"):
            service_fairness(100.0, 150.0, 1.0)

    def test_invalid_reference(self):
        with pytest.raises(InvalidReferenceError):
            service_fairness(-5.0, 1.0, 0.3)

    @given(ref=st.floats(min_value=1, max_value=1e5),
           lo=st.floats(min_value=1, max_value=1e5),
           delta=st.floats(min_value=0.01, max_value=1e4),
           alpha=st.floats(min_value=0, max_value=0.95))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_scenario_delay(self, ref, lo, delta, alpha):
        assert (service_fairness(ref, lo + delta, alpha)
                > service_fairness(ref, lo, alpha))


class TestClassify:
    def test_both_fair(self):
        assert classify(-0.01, -0.02) == (True, True, True)

    def test_boundary_inclusive(self):
        assert classify(0.0, 0.0) == (True, True, True)

    def test_mixed(self):
        assert classify(0.1, -0.1) == (False, True, False)

    def test_threshold_flip(self):
        eps = 1e-12
        assert classify(eps, -1.0)[0] is False
        assert classify(-eps, -1.0)[0] is True


class TestBuildReport:
    def test_report_fields(self):
        key = ScenarioKey(period_slots=55556, alpha=0.3, q=1.0,
                          payload_bits=8192, n=17, regime="weak")
        rep = build_report(key, mean_r=0.3, mean_d=30_000.0, ref_r=0.45,
                           ref_d=18_000.0)
        assert rep.phi_r == pytest.approx((0.45 - 0.3) / 0.45 - 0.3)
        assert rep.phi_d == pytest.approx(12_000 / 18_000 - 0.3 / 0.7)
        assert rep.fair == (rep.fair_throughput and rep.fair_service)
        assert rep.throughput_estimator == "renewal_reward"
        assert rep.reference_source == "monte_carlo"
