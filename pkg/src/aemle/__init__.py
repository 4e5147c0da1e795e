"""Maximum-likelihood amplitude estimation under depolarizing noise.

A library and CLI for the staged-amplification estimation problem: the
forward probability model, Fisher-information error bounds, anomalous-target
analysis, an adaptive grid-search estimator, seeded simulated experiments
checked against an exact circuit simulator, and a hardware-requirement
calculator.
"""
from .circuitsim import (
    amplified_state,
    build_A,
    build_Q,
    depolarize,
    depolarized_good_prob,
    good_state_probability,
    initial_state,
)
from .errors import (
    AemleError,
    ConfigError,
    DegenerateDataError,
    DegenerateScheduleError,
    DegenerateTermError,
    DomainError,
    NotAchievableError,
    SingularPointError,
    SpecError,
)
from .estimator import (
    EstimateResult,
    ExperimentData,
    MleConfig,
    StageTrace,
    data_from_json,
    data_to_json,
    log_likelihood,
    mle_grid_adaptive,
    mle_profile_1d,
)
from .fisher import (
    ANOMALY_THRESHOLD,
    CrBoundResult,
    FisherMatrix,
    anomality,
    classical_bound,
    cr_lower_bound,
    fisher_matrix,
    max_grover_depth,
    nuisance_inflation,
    required_noise_for_error,
    saturated_schedule,
    saturation_floor,
)
from .hwspec import (
    GateErrorGap,
    HardwareAssumptions,
    HardwareReport,
    TimeInterpretation,
    compute_spec,
    gate_error_gap,
    kappa_from_gate_errors,
    total_execution_time,
)
from .integrate import (
    BUILTIN_SPECS,
    IntegrandSpec,
    discretize,
    grid_points,
    sin2_target,
    spec_from_json,
    spec_to_json,
    target_amplitude,
)
from .model import (
    AmplitudePoint,
    Schedule,
    ScheduleKind,
    amplitude_point,
    explicit_schedule,
    ideal_good_prob,
    make_schedule,
    modified_amplitude,
    noisy_good_prob,
    schedule_from_json,
    schedule_to_json,
    total_queries,
)
from .sampler import (
    TrialBatchResult,
    TrialRecord,
    hit_rate_curve,
    run_trials,
    sample_counts,
)
from .survey import (
    ContourGrid,
    DensityResult,
    QueryErrorRow,
    anomality_trace,
    anomalous_segment_count,
    anomaly_density,
    default_density_schedule,
    error_vs_kappa_contour,
    error_vs_queries,
)

__version__ = "0.1.0"

__all__ = [
    "AemleError",
    "AmplitudePoint",
    "ANOMALY_THRESHOLD",
    "BUILTIN_SPECS",
    "ConfigError",
    "ContourGrid",
    "CrBoundResult",
    "DegenerateDataError",
    "DegenerateScheduleError",
    "DegenerateTermError",
    "DensityResult",
    "DomainError",
    "EstimateResult",
    "ExperimentData",
    "FisherMatrix",
    "GateErrorGap",
    "HardwareAssumptions",
    "HardwareReport",
    "IntegrandSpec",
    "MleConfig",
    "NotAchievableError",
    "QueryErrorRow",
    "Schedule",
    "ScheduleKind",
    "SingularPointError",
    "SpecError",
    "StageTrace",
    "TimeInterpretation",
    "TrialBatchResult",
    "TrialRecord",
    "amplified_state",
    "amplitude_point",
    "anomality",
    "anomality_trace",
    "anomalous_segment_count",
    "anomaly_density",
    "build_A",
    "build_Q",
    "classical_bound",
    "compute_spec",
    "cr_lower_bound",
    "data_from_json",
    "data_to_json",
    "default_density_schedule",
    "depolarize",
    "depolarized_good_prob",
    "discretize",
    "error_vs_kappa_contour",
    "error_vs_queries",
    "explicit_schedule",
    "fisher_matrix",
    "gate_error_gap",
    "good_state_probability",
    "grid_points",
    "hit_rate_curve",
    "ideal_good_prob",
    "initial_state",
    "kappa_from_gate_errors",
    "log_likelihood",
    "make_schedule",
    "max_grover_depth",
    "mle_grid_adaptive",
    "mle_profile_1d",
    "modified_amplitude",
    "noisy_good_prob",
    "nuisance_inflation",
    "required_noise_for_error",
    "run_trials",
    "sample_counts",
    "saturated_schedule",
    "saturation_floor",
    "schedule_from_json",
    "schedule_to_json",
    "sin2_target",
    "spec_from_json",
    "spec_to_json",
    "target_amplitude",
    "total_execution_time",
    "total_queries",
]
