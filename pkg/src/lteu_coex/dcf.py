"""Background-traffic DCF model: the back-off chain fixed point.

Solves the coupled pair (tau, p_c) for n saturated stations, then derives
p_s and the unit-decrement-time pmf over {1 slot, T_c, T_s}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import FrameTimes, WifiParams, frame_times

RESIDUAL_TOL = 1e-10
BALANCE_TOL = 1e-12
MAX_ITERATIONS = 10_000


class ConvergenceError(RuntimeError):
    """Fixed-point iteration failed to reach the residual tolerance."""


class PmfValidityError(RuntimeError):
    """Solved quantities violate p_s <= p_c, so the T_d pmf is not a pmf."""


@dataclass(frozen=True)
class BackoffChainSpec:
    """Per-packet back-off chain: stages 0..M, window doubling per stage.

    From (i, 0) a transmission succeeds with probability 1-p and restarts at
    stage 0, or fails with probability p and moves to stage i+1; stage M
    always returns to stage 0 (new packet or drop). Counters decrement by
    one per unit-decrement step.
    """

    cw0: int
    m_retries: int

    @property
    def windows(self) -> tuple[int, ...]:
        return tuple(self.cw0 * 2 ** i for i in range(self.m_retries + 1))


@dataclass(frozen=True)
class DcfSolution:
    """Solved background-traffic quantities for one WifiParams instance."""

    params: WifiParams
    frame_times: FrameTimes
    tau: float
    p_c: float
    p_s: float
    residual: float
    td_support: tuple[int, int, int]       # (1, T_c, T_s)
    td_probs: tuple[float, float, float]   # (1-p_c, p_c-p_s, p_s)
    mean_td: float

    @property
    def t_s(self) -> int:
        return self.frame_times.t_s

    @property
    def t_c(self) -> int:
        return self.frame_times.t_c


def stationary_distribution(spec: BackoffChainSpec, p_c: float) -> list[np.ndarray]:
    """Stationary distribution of the back-off chain at failure prob p_c.

    Returns one array per stage; entry [i][j] is the stationary mass of
    state (i, j). Balance equations hold in closed form: mass p_c^i flows
    into stage i, spread uniformly over CW_i, and counter state j
    accumulates the pass-through from states above it.
    """
    if not 0.0 <= p_c < 1.0:
        raise ValueError(f"p_c must be in [0, 1), got {p_c}")
    windows = spec.windows
    norm = sum(p_c ** i * (cw + 1) / 2.0 for i, cw in enumerate(windows))
    b00 = 1.0 / norm
    dist = []
    for i, cw in enumerate(windows):
        head = b00 * p_c ** i
        j = np.arange(cw)
        dist.append(head * (cw - j) / cw)
    residual = _balance_residual(dist, p_c, windows)
    if residual >= BALANCE_TOL:
        raise AssertionError(f"balance residual {residual} >= {BALANCE_TOL}")
    return dist


def _balance_residual(dist: list[np.ndarray], p_c: float,
                      windows: tuple[int, ...]) -> float:
    """Max |pi(s) - inflow(s)| over all states."""
    m = len(windows) - 1
    heads = [stage[0] for stage in dist]
    # mass entering stage 0: successes from stages < M plus the stage-M reset
    if m == 0:
        into0 = heads[0]
    else:
        into0 = (1.0 - p_c) * sum(heads[:m]) + heads[m]
    worst = 0.0
    for i, cw in enumerate(windows):
        arrive = (into0 if i == 0 else p_c * heads[i - 1]) / cw
        stage = dist[i]
        for j in range(cw):
            inflow = arrive + (stage[j + 1] if j + 1 < cw else 0.0)
            worst = max(worst, abs(stage[j] - inflow))
    return worst


def chain_transmit_probability(dist: list[np.ndarray]) -> float:
    """Per-step transmit probability: total mass of the (i, 0) states."""
    return float(sum(stage[0] for stage in dist))


def _tau_of(spec: BackoffChainSpec, p_c: float) -> float:
    windows = spec.windows
    norm = sum(p_c ** i * (cw + 1) / 2.0 for i, cw in enumerate(windows))
    return sum(p_c ** i for i in range(len(windows))) / norm


def _collision_prob(tau: float, n: int, lambda_: float) -> float:
    return 1.0 - (1.0 - (1.0 - lambda_) * tau) ** (n - 1)


def solve_fixed_point(p: WifiParams) -> DcfSolution:
    """Solve tau and p_c jointly to residual < 1e-10.

    Damped iteration (step 0.5) with a bisection fallback; no closed form
    exists for the pair.
    """
    spec = BackoffChainSpec(p.cw0, p.m_retries)
    if p.n == 1:
        pc = 0.0                      # Eq. 2 with an empty product
        residual = 0.0
    else:
        pc = 0.5
        residual = np.inf
        for _ in range(MAX_ITERATIONS):
            mapped = _collision_prob(_tau_of(spec, pc), p.n, p.lambda_)
            residual = abs(mapped - pc)
            if residual < RESIDUAL_TOL:
                break
            pc = 0.5 * pc + 0.5 * mapped
        if residual >= RESIDUAL_TOL:
            pc, residual = _bisect(spec, p)
            if residual >= RESIDUAL_TOL:
                raise ConvergenceError(
                    f"fixed point did not converge; last residual {residual:g}")
    tau = _tau_of(spec, pc)

    if p.n >= 2:
        p_s = (p.n - 1) * tau * (1.0 - tau) ** (p.n - 2)
    else:
        p_s = 0.0
    if p_s > pc + 1e-12:
        raise PmfValidityError(
            f"p_s={p_s:.6g} exceeds p_c={pc:.6g}; T_d pmf would be invalid "
            f"(n={p.n}, lambda={p.lambda_})")
    p_s = min(p_s, pc)

    ft = frame_times(p)
    probs = (1.0 - pc, pc - p_s, p_s)
    mean_td = probs[0] * 1.0 + probs[1] * ft.t_c + probs[2] * ft.t_s
    return DcfSolution(params=p, frame_times=ft, tau=tau, p_c=pc, p_s=p_s,
                       residual=residual,
                       td_support=(1, ft.t_c, ft.t_s), td_probs=probs,
                       mean_td=mean_td)


def _bisect(spec: BackoffChainSpec, p: WifiParams) -> tuple[float, float]:
    """Root of p_c - G(F(p_c)) on (0, 1); the map is monotone decreasing."""
    lo, hi = 0.0, 1.0 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _collision_prob(_tau_of(spec, mid), p.n, p.lambda_) > mid:
            lo = mid
        else:
            hi = mid
    pc = 0.5 * (lo + hi)
    return pc, abs(pc - _collision_prob(_tau_of(spec, pc), p.n, p.lambda_))


def mean_unit_decrement(sol: DcfSolution) -> float:
    """Expected unit decrement time in slots."""
    return float(sum(v * pr for v, pr in zip(sol.td_support, sol.td_probs)))
