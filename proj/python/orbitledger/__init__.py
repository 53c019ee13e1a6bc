"""Role-based threshold consensus ledger and constellation simulator."""

from ._core import (  # noqa: F401
    CalibratedCostModel,
    ConstellationConfig,
    ContentionProfile,
    CostModel,
    Group,
    GroupElement,
    KeygenResult,
    KeyShare,
    MetricsReport,
    RoleAssignment,
    MAX_SATELLITES,
    MEASUREMENT_WINDOW_S,
    TooFewNodes,
    WindowOverrun,
    approval_contribution,
    assign_roles,
    check_constraints,
    intra_plane_latency_ms,
    inter_plane_latency_ms,
    keygen,
    lagrange_zero_coeff,
    metrics_csv,
    poly_eval,
    run_experiment,
    satellite_position,
    topology_summary,
    tracking_cycle,
    verification_contribution,
)

__all__ = [name for name in dir() if not name.startswith("_")]
