"""Monte Carlo estimation of mean throughput and service time.

Per packet: draw one uniform back-off per stage and one outcome uniform per
attempt up front, then replay the timeline deterministically; the next
packet starts on the slot where the previous one finished (saturation).
The packet loop is sequential by construction; scenarios parallelize.

The hot loop is compiled with numba when available and falls back to the
same code in pure Python otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dcf import DcfSolution
from .timeline import (DutyCycle, Regime, REGIMES, next_start_slot,
                       resolved_record)

try:
    from numba import njit
except ImportError:                                       # pragma: no cover
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


@dataclass(frozen=True)
class McConfig:
    """One estimation run: sample size, seed, regime, decrement mode."""

    packets: int = 200_000
    seed: int = 0
    regime: Regime = "weak"
    sampled_td: bool = False
    warmup_packets: int = 1_000

    def __post_init__(self):
        if self.packets < 1:
            raise ValueError(f"packets must be >= 1, got {self.packets}")
        if not 0 <= self.warmup_packets < self.packets:
            raise ValueError("warmup_packets must be in [0, packets)")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")


@dataclass(frozen=True)
class McEstimate:
    """Averages with normal-approximation standard errors."""

    mean_r: float
    se_r: float
    mean_d: float
    se_d: float
    drop_rate: float
    packets_used: int
    total_slots: float
    mean_r_recip: float
    se_r_recip: float


@njit(cache=True, nogil=True)
def _simulate(W, U, mean_td, t_c, t_s, period, on, p_c, q, strong,
              service, dropped):
    n_packets, n_attempts = W.shape
    t0 = 0
    for k in range(n_packets):
        te = float(t0)
        drop = False
        for i in range(n_attempts):
            wi = W[k, i]
            if strong and on > 0.0:
                remaining = wi
                while remaining > 0:
                    r = te % period
                    if r < on:
                        te += on - r
                        r = on
                    fit = int(math.ceil((period - r) / mean_td - 1e-12))
                    if fit < 1:
                        fit = 1
                    if fit > remaining:
                        fit = remaining
                    te += fit * mean_td
                    remaining -= fit
                r = te % period
                if r < on:
                    te += on - r
                zeta = te
            else:
                zeta = te + mean_td * wi
            g = False
            if on > 0.0:
                r = zeta % period
                g = not (r >= on and r + t_s <= period)
            p_succ = (1.0 - p_c) * (1.0 - q) if g else (1.0 - p_c)
            if U[k, i] < p_succ:
                te = zeta + t_s
                drop = False
                break
            te = zeta + t_c
            drop = True
        service[k] = te - t0
        dropped[k] = drop
        t0 = int(math.floor(te + 0.5))


def _draws(params, cfg: McConfig) -> tuple[np.ndarray, np.ndarray]:
    """Pre-draw the per-packet back-off vectors and outcome uniforms.

    A counter-based Philox stream keyed by the seed hands every packet a
    fixed block of draws, so results do not depend on execution layout.
    """
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    windows = np.array(params.windows, dtype=np.int64)
    W = rng.integers(0, windows[None, :], size=(cfg.packets, len(windows)),
                     dtype=np.int64)
    U = rng.random((cfg.packets, len(windows)))
    return W, U


def run_scenario(sol: DcfSolution, dc: DutyCycle, q: float,
                 cfg: McConfig) -> McEstimate:
    """Estimate E[R], E[D], and the drop rate for one scenario.

    The clock and the duty cycle both start at slot 0. Throughput is
    reported two ways: successful bits over elapsed slots (renewal-reward,
    the headline estimator) and the mean-of-reciprocals form.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    if cfg.regime == "strong" and dc.alpha >= 1.0 and not dc.is_reference:
        raise ValueError("strong regime is undefined for alpha = 1")
    W, U = _draws(sol.params, cfg)
    service = np.empty(cfg.packets)
    dropped = np.empty(cfg.packets, dtype=np.bool_)
    if cfg.sampled_td:
        _simulate_sampled_td(sol, dc, q, cfg, W, U, service, dropped)
    else:
        _simulate(W, U, sol.mean_td, float(sol.t_c), float(sol.t_s),
                  float(dc.period_slots), float(dc.on_slots), sol.p_c, q,
                  cfg.regime == "strong", service, dropped)
    return _estimate(sol.params.payload_bits, service[cfg.warmup_packets:],
                     dropped[cfg.warmup_packets:])


def _simulate_sampled_td(sol, dc, q, cfg, W, U, service, dropped) -> None:
    """Slow path: each decrement samples T_d from its pmf."""
    rng = np.random.Generator(np.random.Philox(key=cfg.seed, counter=2 ** 64))
    support = np.array(sol.td_support, dtype=np.float64)
    probs = np.array(sol.td_probs)
    t0 = 0
    for k in range(cfg.packets):
        def draw() -> float:
            return float(support[rng.choice(3, p=probs)])

        rec = _walk_resolved(W[k], U[k], t0, sol, dc, q, cfg.regime, draw)
        service[k] = rec.service_slots
        dropped[k] = rec.dropped
        t0 = next_start_slot(rec.te)


def _walk_resolved(w_row, u_row, t0, sol, dc, q, regime, td_draw):
    """Truncate the pre-drawn vectors at the first success, then replay."""
    from .timeline import _advance_strong, _advance_weak, overlap_flag

    advance = _advance_strong if regime == "strong" else _advance_weak
    te = float(t0)
    m_max = len(w_row)
    # first pass decides the attempt count; td_draw must be replayed on the
    # same stream, so resolve outcomes and record the draws in one walk
    draws: list[float] = []

    def recording_draw() -> float:
        v = td_draw()
        draws.append(v)
        return v

    m = m_max
    drop = True
    for i in range(m_max):
        zeta = advance(te, int(w_row[i]), sol, dc, recording_draw)
        g = overlap_flag(zeta, sol.t_s, dc)
        p_succ = (1.0 - sol.p_c) * (1.0 - q * g)
        if u_row[i] < p_succ:
            m = i + 1
            drop = False
            break
        te = zeta + sol.t_c
    it = iter(draws)
    return resolved_record(w_row[:m], t0, sol, dc, q, regime, drop,
                           td_draw=lambda: next(it))


def _estimate(payload_bits: int, service: np.ndarray,
              dropped: np.ndarray) -> McEstimate:
    n = len(service)
    succ = (~dropped).astype(np.float64)
    d = service
    mean_d = float(d.mean())
    se_d = float(d.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    drop_rate = float(dropped.mean())
    total = float(d.sum())

    s_bar = float(succ.mean())
    mean_r = payload_bits * s_bar / mean_d
    inv = 1.0 / d
    inv_bar = float(inv.mean())
    mean_r_recip = payload_bits * s_bar * inv_bar

    if n > 1 and s_bar > 0.0:
        cov_sd = np.cov(succ, d, ddof=1)
        rel_r = (cov_sd[0, 0] / s_bar ** 2 + cov_sd[1, 1] / mean_d ** 2
                 - 2.0 * cov_sd[0, 1] / (s_bar * mean_d)) / n
        se_r = mean_r * math.sqrt(max(rel_r, 0.0))
        cov_si = np.cov(succ, inv, ddof=1)
        rel_recip = (cov_si[0, 0] / s_bar ** 2 + cov_si[1, 1] / inv_bar ** 2
                     + 2.0 * cov_si[0, 1] / (s_bar * inv_bar)) / n
        se_r_recip = mean_r_recip * math.sqrt(max(rel_recip, 0.0))
    else:
        se_r = 0.0
        se_r_recip = 0.0
    return McEstimate(mean_r=mean_r, se_r=se_r, mean_d=mean_d, se_d=se_d,
                      drop_rate=drop_rate, packets_used=n, total_slots=total,
                      mean_r_recip=mean_r_recip, se_r_recip=se_r_recip)


def reference_run(sol: DcfSolution, cfg: McConfig) -> McEstimate:
    """The (infinity, 0) baseline: same machinery, no interferer."""
    return run_scenario(sol, DutyCycle.reference(), 0.0, cfg)
