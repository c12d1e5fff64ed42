import numpy as np
import pytest

from lteu_coex import (BackoffChainSpec, PmfValidityError, WifiParams,
                       chain_transmit_probability, mean_unit_decrement,
                       solve_fixed_point, stationary_distribution)
from lteu_coex.dcf import RESIDUAL_TOL, _tau_of


class TestStationaryDistribution:
    def test_no_collisions_gives_closed_form_tau(self):
        # single effective stage: tau = 2/(CW0+1) by direct balance solve
        for cw0 in (4, 16, 32):
            dist = stationary_distribution(BackoffChainSpec(cw0, 6), 0.0)
            assert chain_transmit_probability(dist) == pytest.approx(2 / (cw0 + 1))

    def test_no_retries_is_single_stage(self):
        for p_c in (0.0, 0.3, 0.9):
            dist = stationary_distribution(BackoffChainSpec(16, 0), p_c)
            assert len(dist) == 1
            assert chain_transmit_probability(dist) == pytest.approx(2 / 17)

    def test_normalization(self):
        for p_c in (0.0, 0.2, 0.5, 0.95):
            dist = stationary_distribution(BackoffChainSpec(16, 6), p_c)
            assert sum(float(s.sum()) for s in dist) == pytest.approx(1.0, abs=1e-12)
            assert all((s >= 0).all() for s in dist)

    def test_rejects_certain_collision(self):
        with pytest.raises(ValueError):
            stationary_distribution(BackoffChainSpec(16, 6), 1.0)


class TestSolveFixedPoint:
    def test_single_station(self):
        sol = solve_fixed_point(WifiParams(n=1))
        assert sol.p_c == 0.0
        assert sol.tau == pytest.approx(2 / 17)
        assert sol.mean_td == pytest.approx(1.0)

    def test_full_scale_frozen_value(self, default_sol):
        # frozen from this solver and confirmed by the slotted oracle
        # (tests/test_oracle.py); 17 stations, CW0=16, M=6, saturated
        assert default_sol.p_c == pytest.approx(0.47135, abs=2e-4)
        assert default_sol.residual < RESIDUAL_TOL

    def test_residual_meets_contract(self, default_sol, reduced_sol):
        for sol in (default_sol, reduced_sol):
            lam = sol.params.lambda_
            mapped = 1 - (1 - (1 - lam) * sol.tau) ** (sol.params.n - 1)
            assert abs(sol.p_c - mapped) < RESIDUAL_TOL

    def test_td_pmf_is_valid(self, default_sol):
        assert all(p >= 0 for p in default_sol.td_probs)
        assert sum(default_sol.td_probs) == pytest.approx(1.0)
        assert default_sol.p_s <= default_sol.p_c

    def test_large_lambda_fails_loudly(self):
        # Eq-8-style p_s uses raw tau, so a mostly-empty buffer breaks the
        # p_s <= p_c ordering and must raise rather than emit a bogus pmf
        with pytest.raises(PmfValidityError):
            solve_fixed_point(WifiParams(lambda_=0.95))

    def test_p_c_monotone_in_n(self):
        values = [solve_fixed_point(WifiParams(n=n)).p_c
                  for n in (2, 3, 5, 9, 17, 33)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_tau_monotone_in_p_c(self):
        spec = BackoffChainSpec(16, 6)
        taus = [_tau_of(spec, pc) for pc in np.linspace(0, 0.99, 50)]
        assert all(b <= a + 1e-15 for a, b in zip(taus, taus[1:]))

    def test_p_s_below_p_c_across_sizes(self):
        for n in (2, 5, 17):
            sol = solve_fixed_point(WifiParams(n=n))
            assert sol.p_s <= sol.p_c + 1e-12


class TestMeanUnitDecrement:
    def test_degenerate_pmf(self):
        sol = solve_fixed_point(WifiParams(n=1))
        assert mean_unit_decrement(sol) == pytest.approx(1.0)

    def test_matches_stored_value(self, default_sol):
        assert mean_unit_decrement(default_sol) == pytest.approx(default_sol.mean_td)

    def test_two_stations_collapse(self):
        # with one competitor, every busy step it causes is a success, so the
        # pmf collapses to 1-p_c at one slot and p_c at T_s
        sol = solve_fixed_point(WifiParams(n=2))
        assert sol.p_s == pytest.approx(sol.p_c, abs=1e-8)
        expected = (1 - sol.p_c) + sol.p_c * sol.t_s
        assert sol.mean_td == pytest.approx(expected)
