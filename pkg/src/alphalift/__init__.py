"""Alpha-lift privacy measures and the optimal X-invariant watchdog mechanism."""

from .experiments import (
    alpha_lift_ordering,
    cdf_trials,
    example_surface,
    nmil,
    put_sweep,
    toy_joint,
)
from .lift import (
    INF,
    Alpha,
    LiftProfile,
    alpha_lift,
    lift_profile,
    max_sibson_mi,
    sibson_mi,
)
from .probability import (
    JointDistribution,
    entropy_x,
    joint_from_conditional,
    marginals,
    random_joint,
    validate_joint,
)
from .relaxation import (
    RelaxationConfig,
    abs_loglift_high_risk,
    combined_high_risk,
    delta_refine,
    realized_delta,
)
from .watchdog import (
    Mechanism,
    WatchdogPartition,
    apply_mechanism,
    attainable,
    optimal_leakage,
    output_alpha_lift,
    partition,
    partition_from_set,
    x_invariant_mechanism,
)

__version__ = "0.1.0"
