"""Saturated Wi-Fi DCF performance and air-time-sharing fairness under
duty-cycled LTE-U interference: fixed-point model, exact enumeration,
Monte Carlo estimation, and an oracle simulator, behind a FastAPI service.
"""

from .analytic import (BudgetExceededError, ConditionalDist, EnumerationBudget,
                       ExactResult, StartTimeChain, backoff_vector_prob,
                       conditional_dist, evaluate_exact,
                       stationary_start_distribution, unconditional_means)
from .dcf import (BackoffChainSpec, ConvergenceError, DcfSolution,
                  PmfValidityError, chain_transmit_probability,
                  mean_unit_decrement, solve_fixed_point,
                  stationary_distribution)
from .fairness import (FairnessReport, InvalidReferenceError, ScenarioKey,
                       build_report, classify, service_fairness,
                       throughput_fairness)
from .mc import McConfig, McEstimate, reference_run, run_scenario
from .oracle import BssEmpirical, StationState, simulate_bss
from .params import (ConfigError, FrameTimes, InvalidRetryIndexError,
                     WifiParams, contention_window, frame_times, load_config,
                     ms_to_slots, slots_to_ms)
from .sweep import (CSV_COLUMNS, CSV_EXTRA_COLUMNS, ScenarioDefaults,
                    SweepRow, SweepSpec, rows_to_csv, run_sweep, write_csv)
from .timeline import (BackoffVector, DutyCycle, TransmissionRecord,
                       attempt_times_weak, finish_time_strong,
                       finish_time_weak, next_start_slot, overlap_flag,
                       resolved_record)

__version__ = "0.1.0"
