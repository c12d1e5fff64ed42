"""Air-time-sharing fairness metrics and classification.

phi_R compares the throughput loss ratio against the duty cycle alpha;
phi_D compares the service-time increase ratio against alpha/(1-alpha).
A scheme is fair when both are <= 0 (boundary inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass

from .timeline import Regime


class InvalidReferenceError(ValueError):
    """Reference quantities must be positive."""


@dataclass(frozen=True)
class ScenarioKey:
    """Identifies one evaluated coexistence scenario."""

    period_slots: int
    alpha: float
    q: float
    payload_bits: int
    n: int
    regime: Regime


@dataclass(frozen=True)
class FairnessReport:
    """Paired scenario/reference averages and the fairness verdict."""

    scenario: ScenarioKey
    mean_r: float
    mean_d: float
    ref_r: float
    ref_d: float
    phi_r: float
    phi_d: float
    fair_throughput: bool
    fair_service: bool
    fair: bool
    throughput_estimator: str = "renewal_reward"   # or "reciprocal_mean"
    reference_source: str = "monte_carlo"          # or "analytic"


def throughput_fairness(ref_r: float, mean_r: float, alpha: float) -> float:
    """(ref_r - mean_r)/ref_r - alpha."""
    if ref_r <= 0.0:
        raise InvalidReferenceError(f"reference throughput must be > 0, got {ref_r}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return (ref_r - mean_r) / ref_r - alpha


def service_fairness(ref_d: float, mean_d: float, alpha: float) -> float:
    """(mean_d - ref_d)/ref_d - alpha/(1-alpha)."""
    if ref_d <= 0.0:
        raise InvalidReferenceError(f"reference service time must be > 0, got {ref_d}")
    if not 0.0 <= alpha < 1.0:
        raise ValueError(
            f"alpha must be in [0, 1) for service fairness (alpha/(1-alpha) "
            f"is undefined at 1), got {alpha}")
    return (mean_d - ref_d) / ref_d - alpha / (1.0 - alpha)


def classify(phi_r: float, phi_d: float) -> tuple[bool, bool, bool]:
    """(fair_throughput, fair_service, fair), thresholds inclusive at 0."""
    fair_r = phi_r <= 0.0
    fair_d = phi_d <= 0.0
    return fair_r, fair_d, fair_r and fair_d


def build_report(scenario: ScenarioKey, mean_r: float, mean_d: float,
                 ref_r: float, ref_d: float,
                 throughput_estimator: str = "renewal_reward",
                 reference_source: str = "monte_carlo") -> FairnessReport:
    phi_r = throughput_fairness(ref_r, mean_r, scenario.alpha)
    phi_d = service_fairness(ref_d, mean_d, scenario.alpha)
    fair_r, fair_d, fair = classify(phi_r, phi_d)
    return FairnessReport(scenario=scenario, mean_r=mean_r, mean_d=mean_d,
                          ref_r=ref_r, ref_d=ref_d, phi_r=phi_r, phi_d=phi_d,
                          fair_throughput=fair_r, fair_service=fair_d,
                          fair=fair, throughput_estimator=throughput_estimator,
                          reference_source=reference_source)
