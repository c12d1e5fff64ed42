"""Independent slot-by-slot simulation of n saturated DCF stations.

No interferer here: this is the validation oracle for the fixed-point
module. All stations are synchronized on unit-decrement steps; a step is
one idle slot, or T_c / T_s when the channel carries a collision / success.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import WifiParams, frame_times


@dataclass(eq=False)
class StationState:
    """Back-off bookkeeping for one station."""

    stage: int = 0
    counter: int = 0
    transmissions: int = 0
    collisions: int = 0


@dataclass(frozen=True)
class BssEmpirical:
    """Empirical counterparts of the solved quantities."""

    p_c: float
    tau: float
    mean_td: float
    td_pmf: dict[int, float]        # duration -> relative frequency
    transmissions: int
    virtual_slots: int
    elapsed_slots: int


def simulate_bss(params: WifiParams, slots: int, seed: int) -> BssEmpirical:
    """Simulate until ``slots`` slot-times have elapsed; tally p_c, tau, T_d.

    The T_d histogram pools, over every unit-decrement step, the step
    duration seen by each station that was counting down (not transmitting),
    which is the observer's unit decrement time.
    """
    if params.lambda_ != 0.0:
        raise ValueError("oracle models saturated stations only (lambda = 0)")
    if slots < 10 ** 5:
        raise ValueError("horizon too short for stable estimates; use >= 1e5 slots")

    ft = frame_times(params)
    windows = np.array(params.windows)
    rng = np.random.default_rng(seed)
    n = params.n
    stations = [StationState(counter=int(rng.integers(0, windows[0])))
                for _ in range(n)]

    elapsed = 0
    virtual_slots = 0
    transmissions = 0
    collisions = 0
    wait_counts = {1: 0, ft.t_c: 0, ft.t_s: 0}

    while elapsed < slots:
        txs = [s for s in stations if s.counter == 0]
        k = len(txs)
        if k == 0:
            duration = 1
        elif k == 1:
            duration = ft.t_s
            s = txs[0]
            s.transmissions += 1
            transmissions += 1
            s.stage = 0
            s.counter = int(rng.integers(0, windows[0]))
        else:
            duration = ft.t_c
            for s in txs:
                s.transmissions += 1
                s.collisions += 1
                transmissions += 1
                collisions += 1
                s.stage = 0 if s.stage >= params.m_retries else s.stage + 1
                s.counter = int(rng.integers(0, windows[s.stage]))
        wait_counts[duration] += n - k
        for s in stations:
            if s not in txs and s.counter > 0:
                s.counter -= 1
        elapsed += duration
        virtual_slots += 1

    waits = sum(wait_counts.values())
    td_pmf = {d: c / waits for d, c in wait_counts.items()}
    mean_td = sum(d * c for d, c in wait_counts.items()) / waits
    return BssEmpirical(
        p_c=collisions / transmissions if transmissions else 0.0,
        tau=transmissions / (virtual_slots * n),
        mean_td=mean_td,
        td_pmf=td_pmf,
        transmissions=transmissions,
        virtual_slots=virtual_slots,
        elapsed_slots=elapsed,
    )
