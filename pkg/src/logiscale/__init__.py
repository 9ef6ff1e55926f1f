"""Scaling-law evaluation, fitting, budget planning and efficiency projection."""

from .allocation import OptimalSplit, derive_compute_law, optimal_allocation
from .efficiency import (
    BurdenReport,
    EfficiencyState,
    Utilization,
    burden,
    logical_efficiency,
    mfu,
    required_burden,
    required_compute,
)
from .errors import (
    ConditioningError,
    DomainError,
    InfeasibleTargetError,
    InputError,
    RangeError,
    RowError,
    ScalingError,
    SchemaError,
    StateError,
)
from .fitting import FitConfig, FitResult, GridSpec, fit_compute_law, fit_separable
from .lawcore import (
    ComputeLawParams,
    CostModel,
    RunRecord,
    SeparableLawParams,
    compute_from_nd,
    eval_compute_law,
    eval_separable,
    kappa_from_exponents,
)
from .projection import (
    DynamicsParams,
    ProjectionPoint,
    compute_trajectory,
    cumulative_compute,
    efficiency_at,
    excess_loss,
    loss_trajectory,
    sample_trajectory,
    time_to_excess,
)

__version__ = "0.1.0"
