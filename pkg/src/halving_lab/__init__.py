"""Halving polyhedra, k-distances and their approximation complexity."""

__version__ = "0.1.0"

from .errors import HalvingLabError, InvalidArgumentError, PreconditionViolation, ResourceLimitError
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    TrialRecord,
    run_complexity_experiment,
    run_general_k_experiment,
    run_halving_experiment,
)
from .geom_core import (
    Direction,
    DirectionNet,
    Interval,
    NetVerification,
    PointCloud,
    build_delta_net,
    certified_ball_bound,
    hausdorff_certified,
    hausdorff_to_ball_certified,
    sample_sphere,
    support_points,
)
from .kdistance import (
    CellStatus,
    KDistSpec,
    WeightedSites,
    centroid_sites,
    eval_distance_like,
    eval_kdistance,
    is_extreme,
    power_cell_status,
    ray_support_estimate,
    trace_at_infinity,
)
from .moments import MomentRow, marginal_density, mean_abs_dot, moment_row, sample_abs_dot, variance_abs_dot
from .polytopes import HalvingSpec, KSetSpec, support_halving, support_kset, symmetrize, top_k_average

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "TrialRecord",
    "run_complexity_experiment",
    "run_general_k_experiment",
    "run_halving_experiment",
    "Direction",
    "DirectionNet",
    "Interval",
    "NetVerification",
    "PointCloud",
    "build_delta_net",
    "certified_ball_bound",
    "hausdorff_certified",
    "hausdorff_to_ball_certified",
    "sample_sphere",
    "support_points",
    "CellStatus",
    "KDistSpec",
    "WeightedSites",
    "centroid_sites",
    "eval_distance_like",
    "eval_kdistance",
    "is_extreme",
    "power_cell_status",
    "ray_support_estimate",
    "trace_at_infinity",
    "HalvingLabError",
    "InvalidArgumentError",
    "PreconditionViolation",
    "ResourceLimitError",
    "MomentRow",
    "marginal_density",
    "mean_abs_dot",
    "moment_row",
    "sample_abs_dot",
    "variance_abs_dot",
    "HalvingSpec",
    "KSetSpec",
    "support_halving",
    "support_kset",
    "symmetrize",
    "top_k_average",
]
