"""Deterministic transmission timelines under a duty-cycled interferer.

Given a back-off vector, a start slot, and the duty cycle, computes the
attempt times and finish time of one packet. Two regimes:

* weak  -- the station keeps contending while the interferer is ON; attempt
  times follow the closed form zeta_i = t0 + E[Td]*sum(w_0..w_i) + i*T_c.
* strong -- the back-off timer freezes for the remainder of any ON stage;
  the timeline is replayed decrement by decrement, and no attempt ever
  starts inside an ON window.

Back-off decrements advance time by the expected unit-decrement E[Td]
(deterministic mode) or by a sampled draw from the T_d pmf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .dcf import DcfSolution

Regime = str  # "weak" | "strong"

REGIMES = ("weak", "strong")


@dataclass(frozen=True)
class DutyCycle:
    """Interferer schedule: ON during [kT, kT + alpha*T) for every period k.

    ``alpha == 0`` is the reference (no-interferer) schedule; the canonical
    representation of the paper's (infinity, 0) case is ``DutyCycle.reference()``.
    """

    period_slots: int
    alpha: float

    def __post_init__(self):
        if self.period_slots < 1 or self.period_slots != int(self.period_slots):
            raise ValueError(f"period_slots must be an integer >= 1, got {self.period_slots}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    @classmethod
    def reference(cls) -> "DutyCycle":
        return cls(period_slots=1, alpha=0.0)

    @property
    def is_reference(self) -> bool:
        return self.alpha == 0.0

    @property
    def on_slots(self) -> float:
        return self.alpha * self.period_slots


@dataclass(frozen=True)
class BackoffVector:
    """Initial back-off draws across one packet's attempts."""

    w: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.w)

    def validate(self, cw0: int, m_retries: int) -> None:
        if not 1 <= self.m <= m_retries + 1:
            raise ValueError(f"attempt count {self.m} outside [1, {m_retries + 1}]")
        for i, wi in enumerate(self.w):
            cw = cw0 * 2 ** i
            if not 0 <= wi <= cw - 1:
                raise ValueError(f"w[{i}]={wi} outside [0, {cw - 1}]")


@dataclass(frozen=True)
class TransmissionRecord:
    """One packet's life: attempt times, overlap flags, finish, outcome."""

    t0: float
    zeta: tuple[float, ...]
    g_flags: tuple[bool, ...]
    te: float
    dropped: bool

    @property
    def service_slots(self) -> float:
        return self.te - self.t0

    def __post_init__(self):
        for a, b in zip(self.zeta, self.zeta[1:]):
            if not b > a:
                raise AssertionError(f"attempt times not increasing: {self.zeta}")
        if self.te < self.zeta[-1]:
            raise AssertionError("finish precedes last attempt")


def overlap_flag(zeta: float, t_s: int, dc: DutyCycle) -> bool:
    """True unless [zeta, zeta+t_s) sits inside one OFF window."""
    if dc.is_reference:
        return False
    r = zeta % dc.period_slots
    return not (r >= dc.on_slots and r + t_s <= dc.period_slots)


def attempt_times_weak(w: Sequence[int], t0: float, sol: DcfSolution) -> list[float]:
    """zeta_i = t0 + E[Td] * (w_0 + .. + w_i) + i * T_c."""
    times = []
    acc = 0
    for i, wi in enumerate(w):
        acc += wi
        times.append(t0 + sol.mean_td * acc + i * sol.t_c)
    return times


def _advance_weak(te: float, count: int, sol: DcfSolution, dc: DutyCycle,
                  td_draw: Callable[[], float] | None) -> float:
    if td_draw is None:
        return te + sol.mean_td * count
    for _ in range(count):
        te += td_draw()
    return te


def _advance_strong(te: float, count: int, sol: DcfSolution, dc: DutyCycle,
                    td_draw: Callable[[], float] | None) -> float:
    """Freeze-aware advance: ``count`` decrements, then the pre-transmit jump.

    Each decrement first skips to the end of the ON stage if it would start
    inside one, then advances by one unit decrement; the attempt itself is
    also pushed out of ON. Decrements falling inside a single OFF window are
    batched, which is exact because the jump target (the OFF start) never
    lies inside ON for alpha < 1.
    """
    period, on = dc.period_slots, dc.on_slots
    if on <= 0.0:
        return _advance_weak(te, count, sol, dc, td_draw)
    if td_draw is not None:
        for _ in range(count):
            r = te % period
            if r < on:
                te += on - r
            te += td_draw()
    else:
        step = sol.mean_td
        remaining = count
        while remaining > 0:
            r = te % period
            if r < on:
                te += on - r
                r = on
            fit = math.ceil((period - r) / step - 1e-12)
            fit = min(max(fit, 1), remaining)
            te += fit * step
            remaining -= fit
    r = te % period
    if r < on:
        te += on - r
    return te


def _replay(w: Sequence[int], t0: float, sol: DcfSolution, dc: DutyCycle,
            q: float, regime: Regime, last_outcome: str,
            td_draw: Callable[[], float] | None = None) -> TransmissionRecord:
    """Walk the attempt sequence; attempts before the last always fail.

    ``last_outcome``: "success", "drop", or "expected" (the h-weighted mix
    used when the retry budget is exhausted and the outcome is left open).
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    strong = regime == "strong"
    if strong and dc.alpha >= 1.0:
        raise ValueError("strong regime is undefined for alpha = 1: every "
                         "slot is inside ON and no attempt can start")
    advance = _advance_strong if strong else _advance_weak
    te = float(t0)
    zetas: list[float] = []
    flags: list[bool] = []
    dropped = False
    for i, wi in enumerate(w):
        zeta = advance(te, wi, sol, dc, td_draw)
        g = overlap_flag(zeta, sol.t_s, dc)
        zetas.append(zeta)
        flags.append(g)
        if i < len(w) - 1:
            te = zeta + sol.t_c
        elif last_outcome == "success":
            te = zeta + sol.t_s
        elif last_outcome == "drop":
            te = zeta + sol.t_c
            dropped = True
        else:
            h = (1.0 - sol.p_c) * (1.0 - q * g)
            te = zeta + h * sol.t_s + (1.0 - h) * sol.t_c
            dropped = h == 0.0
    if strong:
        for zeta in zetas:
            if zeta % dc.period_slots < dc.on_slots - 1e-9:
                raise AssertionError(f"attempt at {zeta} starts inside ON")
    return TransmissionRecord(t0=float(t0), zeta=tuple(zetas),
                              g_flags=tuple(flags), te=te, dropped=dropped)


def _finish_time(w: Sequence[int], t0: float, sol: DcfSolution, dc: DutyCycle,
                 q: float, regime: Regime) -> TransmissionRecord:
    m_max = sol.params.m_retries + 1
    if not 1 <= len(w) <= m_max:
        raise ValueError(f"attempt count {len(w)} outside [1, {m_max}]")
    last = "expected" if len(w) == m_max else "success"
    return _replay(w, t0, sol, dc, q, regime, last)


def finish_time_weak(w: Sequence[int], t0: float, sol: DcfSolution,
                     dc: DutyCycle, q: float) -> TransmissionRecord:
    """Finish time for an m-attempt back-off vector, weak interference.

    For m <= M the last attempt succeeds by construction; for m = M+1 the
    finish is the success-probability-weighted mix of the two terminal
    durations and ``dropped`` is set only when that probability is zero.
    """
    return _finish_time(w, t0, sol, dc, q, "weak")


def finish_time_strong(w: Sequence[int], t0: float, sol: DcfSolution,
                       dc: DutyCycle, q: float) -> TransmissionRecord:
    """Finish time with back-off frozen during ON stages."""
    return _finish_time(w, t0, sol, dc, q, "strong")


def resolved_record(w: Sequence[int], t0: float, sol: DcfSolution,
                    dc: DutyCycle, q: float, regime: Regime, dropped: bool,
                    td_draw: Callable[[], float] | None = None) -> TransmissionRecord:
    """Timeline with the final attempt's outcome already known.

    Used by the Monte Carlo path, which samples the last attempt instead of
    taking the expected-duration branch.
    """
    return _replay(w, t0, sol, dc, q, regime, "drop" if dropped else "success",
                   td_draw)


def next_start_slot(te: float) -> int:
    """Start slot of the next packet: finish time rounded to a whole slot."""
    return int(math.floor(te + 0.5))
