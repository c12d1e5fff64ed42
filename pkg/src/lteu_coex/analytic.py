"""Exact enumeration of the conditional service/throughput distributions.

Three steps, tractable only at reduced CW/M:

1. enumerate every back-off vector (and terminal outcome) conditioned on a
   start slot t0, giving the finish-time pmf, drop probability, and the
   conditional means;
2. fold finish times modulo the duty-cycle period into a start-slot Markov
   chain and solve its stationary distribution;
3. average the conditional means under that distribution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dcf import DcfSolution
from .timeline import (DutyCycle, Regime, _advance_strong, _advance_weak,
                       next_start_slot, overlap_flag)

PMF_TOL = 1e-9
CHAIN_TOL = 1e-9


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed the configured outcome-path budget."""


@dataclass(frozen=True)
class EnumerationBudget:
    """Guard rails: exact enumeration refuses rather than sampling."""

    max_paths: int = 10 ** 6          # outcome paths per start slot
    max_chain_paths: int = 10 ** 8    # period length x outcome paths


@dataclass(frozen=True)
class ConditionalDist:
    """Distributions and means for packets whose contention starts at t0."""

    t0: int
    te_pmf: dict[float, float]            # Eq. 16 map: expected last attempt
    te_pmf_resolved: dict[float, float]   # terminal outcomes resolved
    p_drop: float
    mean_d: float                         # E[service | t0], slots
    mean_r: float                         # L(1-p_drop)E[1/D | t0], bits/slot
    mean_r_ratio: float                   # L(1-p_drop)/E[D | t0], bits/slot


@dataclass(frozen=True)
class StartTimeChain:
    """Start-slot residue chain over {0..T-1} and its stationary vector."""

    period: int
    matrix: np.ndarray
    pi: np.ndarray
    residual: float


def outcome_path_count(cw0: int, m_retries: int) -> int:
    """Number of enumerated (w, outcome) leaves for one start slot."""
    windows = [cw0 * 2 ** i for i in range(m_retries + 1)]
    total = 0
    prod = 1
    for m in range(1, m_retries + 1):
        prod *= windows[m - 1]
        total += prod
    prod *= windows[m_retries]
    return total + 2 * prod


def backoff_vector_prob(w, t0: int, sol: DcfSolution, dc: DutyCycle, q: float,
                        regime: Regime, dropped: bool = False) -> float:
    """Probability of one back-off pattern (and outcome) given t0.

    Attempts 0..m-2 fail, each contributing (1 - (1-p_c)(1-q g_i)) / CW_i;
    the final attempt contributes its success probability over CW_{m-1},
    except at m = M+1 where ``dropped`` selects which terminal outcome's
    probability is returned.
    """
    seq = tuple(w.w) if hasattr(w, "w") else tuple(w)
    m_max = sol.params.m_retries + 1
    if not 1 <= len(seq) <= m_max:
        raise ValueError(f"attempt count {len(seq)} outside [1, {m_max}]")
    if dropped and len(seq) != m_max:
        raise ValueError("only the final retry stage can drop")
    advance = _advance_strong if regime == "strong" else _advance_weak
    prob = 1.0
    te = float(t0)
    for i, wi in enumerate(seq):
        zeta = advance(te, wi, sol, dc, None)
        g = overlap_flag(zeta, sol.t_s, dc)
        p_succ = (1.0 - sol.p_c) * (1.0 - q * g)
        cw = sol.params.contention_window(i)
        if i < len(seq) - 1:
            prob *= (1.0 - p_succ) / cw
            te = zeta + sol.t_c
        else:
            prob *= ((1.0 - p_succ) if dropped else p_succ) / cw
    return prob


def conditional_dist(t0: int, sol: DcfSolution, dc: DutyCycle, q: float,
                     regime: Regime,
                     budget: EnumerationBudget = EnumerationBudget()) -> ConditionalDist:
    """Aggregate the full outcome tree for packets starting at t0."""
    p = sol.params
    paths = outcome_path_count(p.cw0, p.m_retries)
    if paths > budget.max_paths:
        raise BudgetExceededError(
            f"{paths} outcome paths exceed the budget of {budget.max_paths}; "
            f"reduce cw0/m_retries or raise the budget")
    if regime == "strong" and dc.alpha >= 1.0 and not dc.is_reference:
        raise ValueError("strong regime is undefined for alpha = 1")

    advance = _advance_strong if regime == "strong" else _advance_weak
    m_last = p.m_retries
    windows = p.windows
    pmf_map: dict[float, float] = {}
    pmf_resolved: dict[float, float] = {}
    drop_mass = 0.0
    mean_d = 0.0
    inv_mean = 0.0

    def visit(i: int, te: float, prefix: float) -> None:
        nonlocal drop_mass, mean_d, inv_mean
        cw = windows[i]
        share = prefix / cw
        for wi in range(cw):
            zeta = advance(te, wi, sol, dc, None)
            g = overlap_flag(zeta, sol.t_s, dc)
            p_succ = (1.0 - sol.p_c) * (1.0 - q * g)
            if i < m_last:
                pr = share * p_succ
                if pr > 0.0:
                    te_s = zeta + sol.t_s
                    pmf_map[te_s] = pmf_map.get(te_s, 0.0) + pr
                    pmf_resolved[te_s] = pmf_resolved.get(te_s, 0.0) + pr
                    mean_d += pr * (te_s - t0)
                    inv_mean += pr / (te_s - t0)
                fail = share * (1.0 - p_succ)
                if fail > 0.0:
                    visit(i + 1, zeta + sol.t_c, fail)
            else:
                te_s = zeta + sol.t_s
                te_d = zeta + sol.t_c
                te_mix = zeta + p_succ * sol.t_s + (1.0 - p_succ) * sol.t_c
                pmf_map[te_mix] = pmf_map.get(te_mix, 0.0) + share
                if p_succ > 0.0:
                    pmf_resolved[te_s] = pmf_resolved.get(te_s, 0.0) + share * p_succ
                pmf_resolved[te_d] = pmf_resolved.get(te_d, 0.0) + share * (1.0 - p_succ)
                drop_mass += share * (1.0 - p_succ)
                mean_d += share * (p_succ * (te_s - t0) + (1.0 - p_succ) * (te_d - t0))
                inv_mean += share / (te_mix - t0)

    visit(0, float(t0), 1.0)

    for pmf in (pmf_map, pmf_resolved):
        total = sum(pmf.values())
        if abs(total - 1.0) > PMF_TOL:
            raise AssertionError(f"finish-time pmf sums to {total}, not 1")
    mean_r = p.payload_bits * (1.0 - drop_mass) * inv_mean
    return ConditionalDist(t0=t0, te_pmf=pmf_map, te_pmf_resolved=pmf_resolved,
                           p_drop=drop_mass, mean_d=mean_d, mean_r=mean_r,
                           mean_r_ratio=p.payload_bits * (1.0 - drop_mass) / mean_d)


def all_conditionals(sol: DcfSolution, dc: DutyCycle, q: float, regime: Regime,
                     budget: EnumerationBudget = EnumerationBudget()) -> list[ConditionalDist]:
    paths = outcome_path_count(sol.params.cw0, sol.params.m_retries)
    if paths * dc.period_slots > budget.max_chain_paths:
        raise BudgetExceededError(
            f"{paths} paths x {dc.period_slots} start slots exceed the chain "
            f"budget of {budget.max_chain_paths}; reduce the period or windows")
    return [conditional_dist(t0, sol, dc, q, regime, budget)
            for t0 in range(dc.period_slots)]


def stationary_start_distribution(dc: DutyCycle, sol: DcfSolution, q: float,
                                  regime: Regime,
                                  budget: EnumerationBudget = EnumerationBudget(),
                                  dists: list[ConditionalDist] | None = None) -> StartTimeChain:
    """Build the start-slot residue chain and solve pi = pi P.

    Transitions fold each start slot's resolved finish-time pmf through
    ``next start = round(finish) mod T``, mirroring the simulated process of
    back-to-back packets.
    """
    if dists is None:
        dists = all_conditionals(sol, dc, q, regime, budget)
    T = dc.period_slots
    if len(dists) != T:
        raise ValueError(f"need one conditional per start slot (T={T})")
    P = np.zeros((T, T))
    for d in dists:
        for te, pr in d.te_pmf_resolved.items():
            P[d.t0, next_start_slot(te) % T] += pr
    pi = _solve_stationary(P)
    residual = float(np.max(np.abs(pi @ P - pi)))
    if residual > CHAIN_TOL:
        raise AssertionError(f"stationary solve residual {residual} > {CHAIN_TOL}")
    return StartTimeChain(period=T, matrix=P, pi=pi, residual=residual)


def _solve_stationary(P: np.ndarray) -> np.ndarray:
    T = P.shape[0]
    if T == 1:
        return np.ones(1)
    A = P.T - np.eye(T)
    A[-1, :] = 1.0
    b = np.zeros(T)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        pi, *_ = np.linalg.lstsq(A, b, rcond=None)
        support = np.flatnonzero(pi > 1e-12)
        warnings.warn(f"start-time chain looks reducible; support={support.tolist()}",
                      RuntimeWarning, stacklevel=2)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def unconditional_means(chain: StartTimeChain,
                        dists: list[ConditionalDist]) -> tuple[float, float]:
    """pi-weighted (E[R], E[D])."""
    if len(dists) != chain.period:
        raise ValueError("chain and conditionals disagree on the period")
    e_r = float(sum(chain.pi[d.t0] * d.mean_r for d in dists))
    e_d = float(sum(chain.pi[d.t0] * d.mean_d for d in dists))
    return e_r, e_d


@dataclass(frozen=True)
class ExactResult:
    """Full output of the three-step procedure for one scenario."""

    dists: list[ConditionalDist] = field(repr=False)
    chain: StartTimeChain = field(repr=False)
    e_r: float
    e_d: float
    e_r_ratio: float
    drop_rate: float


def evaluate_exact(sol: DcfSolution, dc: DutyCycle, q: float, regime: Regime,
                   budget: EnumerationBudget = EnumerationBudget()) -> ExactResult:
    dists = all_conditionals(sol, dc, q, regime, budget)
    chain = stationary_start_distribution(dc, sol, q, regime, budget, dists)
    e_r, e_d = unconditional_means(chain, dists)
    drop = float(sum(chain.pi[d.t0] * d.p_drop for d in dists))
    ratio = float(sum(chain.pi[d.t0] * d.mean_r_ratio for d in dists))
    return ExactResult(dists=dists, chain=chain, e_r=e_r, e_d=e_d,
                       e_r_ratio=ratio, drop_rate=drop)
