"""Detection of lower-dimensional zero-density regions via ball coverings."""

from .covering import (
    BallClass,
    BoxCountResult,
    ClassifiedCovering,
    GridCovering,
    OccupancyReport,
    box_counting_dimension,
    build_grid_covering,
    classify_ball,
    classify_covering,
    count_occupancy,
)
from .density import (
    CATALOG_IDS,
    DensityModel,
    SmoothnessOrders,
    estimate_smoothness,
    evaluate,
    get_model,
    min_outside_neighborhood,
    normalize,
    sup_density,
)
from .experiments import (
    ReconstructionResult,
    SweepConfig,
    heatmap_1d,
    reconstruct_zero_set,
    run_sweep,
)
from .geometry import (
    AxisBox,
    Ball,
    Box,
    Segment,
    SinglePoint,
    ZeroSet,
    ball_intersects_zero_set,
    distance_to_zero_set,
    in_epsilon_neighborhood,
)
from .noncompact import (
    TruncationSchedule,
    binomial_containment_bound,
    build_truncation_schedule,
    fit_outside_min_decay,
    truncation_halfwidth,
)
from .rates import (
    ConditionReport,
    RateSchedule,
    ball_volume,
    check_conditions,
    check_conditions_multi,
    hoeffding_bound,
    inside_ball_mass_upper,
    outside_ball_mass_lower,
    outside_nonempty_prob_bound,
    schedule_values,
)
from .sampling import SampleBatch, derive_trial_seed, sample

__version__ = "0.1.0"
