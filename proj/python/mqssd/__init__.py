"""Multi-queue SSD performance modeling toolkit.

C++ core exposed through the `_core` extension module: benchmark workload
planning, the synthetic device oracle, cost-model calibration (per-k least
squares plus rational-function fits), the four throughput predictors and the
LSM-tree cost/compaction analysis.
"""

from ._core import (  # noqa: F401
    AffineParams,
    CalibrationOptions,
    CompactionStats,
    DamParams,
    DataMovementConfig,
    DataMovementReport,
    DeviceProfile,
    LsmLayout,
    MqssdProfile,
    OffsetPlan,
    OpKind,
    OracleConfig,
    PageGeometry,
    PdamParams,
    PerKCosts,
    RationalFitResult,
    RationalFn,
    TrialRecord,
    WorkloadSpec,
    calibrate_profile,
    derive_per_k,
    eval_rational,
    file_rw_cost,
    fit_rational,
    generate_dataset,
    insert_cost_per_byte,
    insert_cost_per_entry,
    level_count,
    load_device_profile,
    load_trial_csv,
    pdam_page_cost,
    plan_offsets,
    predict_affine,
    predict_dam,
    predict_mqssd,
    predict_pdam,
    query_cost,
    save_device_profile,
    save_trial_csv,
    scan_cost,
    simulate_data_movement,
    simulate_trial,
    sl_insert_cost,
    sl_query_cost,
    sorted_run_count,
    validate_plan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
