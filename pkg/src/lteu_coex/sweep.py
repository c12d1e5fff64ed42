"""Parameter sweeps with paired references and stable CSV emission.

One variable sweeps over a value grid while everything else stays fixed;
each (regime, value) point runs a scenario, pairs it with the matching
no-interferer reference, and lands in one CSV row. Rows are written in
deterministic order regardless of worker completion order.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dcf import DcfSolution, solve_fixed_point
from .fairness import ScenarioKey, service_fairness, throughput_fairness
from .mc import McConfig, McEstimate, reference_run, run_scenario
from .params import WifiParams, ms_to_slots
from .timeline import DutyCycle, REGIMES

SWEEP_VARIABLES = ("period_ms", "alpha", "q", "payload_bytes")

# Pinned schema; extra columns carrying the reciprocal-form throughput
# estimator ride after the pinned block.
CSV_COLUMNS = ("regime", "period_slots", "alpha", "q", "payload_bits", "n",
               "mean_r", "se_r", "mean_d", "se_d", "drop_rate", "ref_r",
               "ref_d", "phi_r", "phi_d", "fair", "seed", "packets", "error")
CSV_EXTRA_COLUMNS = ("mean_r_recip", "se_r_recip", "phi_r_recip")


@dataclass(frozen=True)
class ScenarioDefaults:
    """Fixed scenario settings a sweep departs from."""

    period_ms: float = 500.0
    alpha: float = 0.3
    q: float = 1.0
    payload_bytes: int = 1024
    stations: int = 17
    wifi: WifiParams = field(default_factory=WifiParams)

    def resolve(self, variable: str, value: float) -> tuple[WifiParams, DutyCycle, float]:
        period_ms, alpha, q = self.period_ms, self.alpha, self.q
        payload_bytes, stations = self.payload_bytes, self.stations
        if variable == "period_ms":
            period_ms = float(value)
        elif variable == "alpha":
            alpha = float(value)
        elif variable == "q":
            q = float(value)
        elif variable == "payload_bytes":
            payload_bytes = int(value)
        else:
            raise ValueError(f"unknown sweep variable {variable!r}")
        params = replace(self.wifi, n=stations, payload_bits=payload_bytes * 8)
        dc = DutyCycle(period_slots=ms_to_slots(period_ms, params.slot_us),
                       alpha=alpha)
        return params, dc, q


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a value grid, for one or both regimes."""

    variable: str
    values: tuple[float, ...]
    fixed: ScenarioDefaults = field(default_factory=ScenarioDefaults)
    regimes: tuple[str, ...] = ("weak", "strong")
    packets: int = 200_000
    warmup_packets: int = 1_000
    seed: int = 0
    seed_policy: str = "paired"        # "paired" | "per_point"
    threads: int = 1

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"variable must be one of {SWEEP_VARIABLES}, "
                             f"got {self.variable!r}")
        if not self.values:
            raise ValueError("values must be non-empty")
        for regime in self.regimes:
            if regime not in REGIMES:
                raise ValueError(f"unknown regime {regime!r}")
        if self.seed_policy not in ("paired", "per_point"):
            raise ValueError(f"unknown seed policy {self.seed_policy!r}")
        for v in self.values:
            if self.variable in ("alpha", "q") and not 0.0 <= v <= 1.0:
                raise ValueError(f"{self.variable} values must be in [0, 1], got {v}")
            if self.variable in ("period_ms", "payload_bytes") and v <= 0:
                raise ValueError(f"{self.variable} values must be > 0, got {v}")


@dataclass(frozen=True)
class SweepRow:
    """One CSV row; ``error`` is set (and metrics None) on point failure."""

    regime: str
    period_slots: int
    alpha: float
    q: float
    payload_bits: int
    n: int
    seed: int
    packets: int
    mean_r: float | None = None
    se_r: float | None = None
    mean_d: float | None = None
    se_d: float | None = None
    drop_rate: float | None = None
    ref_r: float | None = None
    ref_d: float | None = None
    phi_r: float | None = None
    phi_d: float | None = None
    fair: bool | None = None
    mean_r_recip: float | None = None
    se_r_recip: float | None = None
    phi_r_recip: float | None = None
    error: str = ""

    @property
    def scenario(self) -> ScenarioKey:
        return ScenarioKey(self.period_slots, self.alpha, self.q,
                           self.payload_bits, self.n, self.regime)


def _point_seed(spec: SweepSpec, regime: str, index: int) -> int:
    if spec.seed_policy == "paired":
        return spec.seed
    child = np.random.SeedSequence(entropy=spec.seed,
                                   spawn_key=(REGIMES.index(regime), index))
    return int(child.generate_state(2, np.uint64)[0])


class SweepRunner:
    """Caches fixed-point solutions and references across sweep points."""

    def __init__(self, spec: SweepSpec):
        self.spec = spec
        self._solutions: dict[WifiParams, DcfSolution] = {}
        self._references: dict[tuple[WifiParams, int], McEstimate] = {}

    def solution(self, params: WifiParams) -> DcfSolution:
        if params not in self._solutions:
            self._solutions[params] = solve_fixed_point(params)
        return self._solutions[params]

    def reference(self, params: WifiParams, seed: int) -> McEstimate:
        key = (params, seed)
        if key not in self._references:
            cfg = McConfig(packets=self.spec.packets, seed=seed, regime="weak",
                           warmup_packets=self.spec.warmup_packets)
            self._references[key] = reference_run(self.solution(params), cfg)
        return self._references[key]

    def evaluate(self, regime: str, index: int, value: float) -> SweepRow:
        spec = self.spec
        params, dc, q = spec.fixed.resolve(spec.variable, value)
        seed = _point_seed(spec, regime, index)
        base = dict(regime=regime, period_slots=dc.period_slots, alpha=dc.alpha,
                    q=q, payload_bits=params.payload_bits, n=params.n,
                    seed=seed, packets=spec.packets)
        try:
            sol = self.solution(params)
            ref = self.reference(params, seed)
            cfg = McConfig(packets=spec.packets, seed=seed, regime=regime,
                           warmup_packets=spec.warmup_packets)
            est = run_scenario(sol, dc, q, cfg)
            phi_r = throughput_fairness(ref.mean_r, est.mean_r, dc.alpha)
            phi_d = service_fairness(ref.mean_d, est.mean_d, dc.alpha)
            phi_r_recip = throughput_fairness(ref.mean_r_recip,
                                              est.mean_r_recip, dc.alpha)
            return SweepRow(**base, mean_r=est.mean_r, se_r=est.se_r,
                            mean_d=est.mean_d, se_d=est.se_d,
                            drop_rate=est.drop_rate, ref_r=ref.mean_r,
                            ref_d=ref.mean_d, phi_r=phi_r, phi_d=phi_d,
                            fair=(phi_r <= 0.0 and phi_d <= 0.0),
                            mean_r_recip=est.mean_r_recip,
                            se_r_recip=est.se_r_recip,
                            phi_r_recip=phi_r_recip)
        except Exception as exc:
            return SweepRow(**base, error=str(exc))


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every (regime, value) point; rows ordered by (regime, value)."""
    runner = SweepRunner(spec)
    points = [(regime, idx, value)
              for regime in sorted(set(spec.regimes))
              for idx, value in enumerate(spec.values)]
    # warm the shared caches sequentially so workers only read them
    for regime, idx, value in points:
        params, _, _ = spec.fixed.resolve(spec.variable, value)
        runner.solution(params)
        runner.reference(params, _point_seed(spec, regime, idx))
    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(lambda p: runner.evaluate(*p), points))
    else:
        rows = [runner.evaluate(*p) for p in points]
    sort_field = _SORT_FIELD[spec.variable]
    return sorted(rows, key=lambda r: (r.regime, getattr(r, sort_field)))


_SORT_FIELD = {"period_ms": "period_slots", "alpha": "alpha", "q": "q",
               "payload_bytes": "payload_bits"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = CSV_COLUMNS + CSV_EXTRA_COLUMNS
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(getattr(row, col)) for col in header])
    return buf.getvalue()


def write_csv(rows: list[SweepRow], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows))
