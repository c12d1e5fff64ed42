import numpy as np
import pytest

from lteu_coex import WifiParams, simulate_bss, solve_fixed_point


class TestSimulateBss:
    def test_single_station_never_collides(self):
        emp = simulate_bss(WifiParams(n=1), slots=200_000, seed=1)
        assert emp.p_c == 0.0

    def test_matches_solved_p_c_small_n(self):
        # cross-validation: both sides computed independently
        for n, seed in ((2, 3), (5, 3)):
            params = WifiParams(n=n)
            sol = solve_fixed_point(params)
            emp = simulate_bss(params, slots=4_000_000, seed=seed)
            assert emp.p_c == pytest.approx(sol.p_c, abs=0.01)

    def test_td_histogram_support_and_shape(self, default_params, default_sol):
        emp = simulate_bss(default_params, slots=2_000_000, seed=5)
        assert set(emp.td_pmf) == {1, default_sol.t_c, default_sol.t_s}
        solved = dict(zip(default_sol.td_support, default_sol.td_probs))
        for atom, prob in solved.items():
            assert emp.td_pmf[atom] == pytest.approx(prob, abs=0.02)

    def test_tau_tracks_solution(self, default_params, default_sol):
        emp = simulate_bss(default_params, slots=2_000_000, seed=5)
        assert emp.tau == pytest.approx(default_sol.tau, abs=0.005)

    def test_short_horizon_rejected(self):
        with pytest.raises(ValueError):
            simulate_bss(WifiParams(n=2), slots=10_000, seed=0)

    def test_unsaturated_rejected(self):
        with pytest.raises(ValueError):
            simulate_bss(WifiParams(n=2, lambda_=0.5), slots=200_000, seed=0)

    def test_doubling_horizon_shrinks_variance(self):
        # deterministic seed set; sample variance of p_c across seeds should
        # drop by roughly 2x when the horizon doubles
        params = WifiParams(n=5)
        seeds = range(12)
        short = [simulate_bss(params, 400_000, s).p_c for s in seeds]
        long = [simulate_bss(params, 800_000, s).p_c for s in seeds]
        ratio = np.var(short, ddof=1) / np.var(long, ddof=1)
        assert 1.0 < ratio < 4.5
