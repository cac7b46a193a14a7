"""patchsim: surface-code patch simulation and resource estimation."""

from .pauli import PauliString
from .circuit import FaultSite, Gate, GateKind, SiteKind, TimedCircuit, conjugate
from .frame import (
    ShotRecord,
    enumerate_single_faults,
    run_forced,
    run_shots,
    sample_fault,
    simulate_shot,
    single_fault_table,
)
from .surface import (
    MemoryExperiment,
    Plaquette,
    RotatedSurfaceLayout,
    SyndromeSchedule,
    build_layout,
    build_memory_circuit,
)
from .decoder import (
    DetectorGraph,
    LogicalErrorEstimate,
    MatchingResult,
    ScheduleInvalidError,
    build_detector_graph,
    decode,
    estimate_logical_error_rate,
    predict_pair_failure,
)
from .matching import max_weight_matching, min_weight_perfect_matching
from .injection import (
    InjectionOutcome,
    InjectionProtocol,
    InjectionResult,
    VariantKind,
    build_injection_protocol,
    build_stage1_circuit,
    build_stage2_circuit,
    oracle_leading_coefficients,
    pipelined_depth_bound,
    run_injection_experiment,
)
from .rotation import (
    PecPlan,
    RusModel,
    pec_mitigate,
    rus_error_exact,
    rus_error_terms,
    rus_mean_steps,
    sampling_overhead,
    simulate_rus,
    simulate_rus_batch,
    two_outcome_sampler,
)
from .estimator import (
    DeviceSpec,
    FitResult,
    FtqcBlock,
    LayoutScheme,
    REFERENCE_FIT,
    ResourceReport,
    RotationBudget,
    application_sizing,
    build_resource_report,
    clifford_budget,
    comparison_table_csv,
    distilled_magic_error,
    effective_injection_failure,
    fit_scaling,
    ftqc_comparison,
    injected_magic_error,
    injection_repeats,
    max_logical_qubits,
    quantum_volume,
    quoted_rotation_error,
    rotation_budget,
    t_count_per_rotation,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "FaultSite",
    "Gate",
    "GateKind",
    "SiteKind",
    "TimedCircuit",
    "conjugate",
    "ShotRecord",
    "enumerate_single_faults",
    "run_forced",
    "run_shots",
    "sample_fault",
    "simulate_shot",
    "single_fault_table",
    "MemoryExperiment",
    "Plaquette",
    "RotatedSurfaceLayout",
    "SyndromeSchedule",
    "build_layout",
    "build_memory_circuit",
    "DetectorGraph",
    "LogicalErrorEstimate",
    "MatchingResult",
    "ScheduleInvalidError",
    "build_detector_graph",
    "decode",
    "estimate_logical_error_rate",
    "predict_pair_failure",
    "max_weight_matching",
    "min_weight_perfect_matching",
    "InjectionOutcome",
    "InjectionProtocol",
    "InjectionResult",
    "VariantKind",
    "build_injection_protocol",
    "build_stage1_circuit",
    "build_stage2_circuit",
    "oracle_leading_coefficients",
    "pipelined_depth_bound",
    "run_injection_experiment",
    "PecPlan",
    "RusModel",
    "pec_mitigate",
    "rus_error_exact",
    "rus_error_terms",
    "rus_mean_steps",
    "sampling_overhead",
    "simulate_rus",
    "simulate_rus_batch",
    "two_outcome_sampler",
    "DeviceSpec",
    "FitResult",
    "FtqcBlock",
    "LayoutScheme",
    "REFERENCE_FIT",
    "ResourceReport",
    "RotationBudget",
    "application_sizing",
    "build_resource_report",
    "clifford_budget",
    "comparison_table_csv",
    "distilled_magic_error",
    "effective_injection_failure",
    "fit_scaling",
    "ftqc_comparison",
    "injected_magic_error",
    "injection_repeats",
    "max_logical_qubits",
    "quantum_volume",
    "quoted_rotation_error",
    "rotation_budget",
    "t_count_per_rotation",
    "__version__",
]
