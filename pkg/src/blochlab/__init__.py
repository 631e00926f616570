"""Numerical laboratory for weighted composition operators acting from
weighted Bergman-type spaces on the unit disk into the Bloch and little
Bloch spaces: criterion quantities, boundedness and compactness
classification, and independent brute-force oracles."""

__version__ = "0.1.0"

from .disk_functions import (
    Affine,
    BlaschkeFactor,
    ComposedWithSelfMap,
    CompositionMap,
    DiskFunction,
    DomainError,
    FiniteBlaschkeProduct,
    FractionalKernel,
    MonomialPower,
    PowerSeries,
    Product,
    Scaled,
    ScaledMap,
    SelfMap,
    Sum,
    bergman_metric,
    constant,
    identity_map,
    metric_disk_comparability,
    pseudo_hyperbolic,
    rotation,
    truncated_log_series,
    validate_self_map,
)
from .weights import NormalWeight, NormalityReport, SpaceSpec, check_normality
from .norms import (
    DEFAULT_GRID,
    BoundaryProfile,
    NonConvergentError,
    RadialGrid,
    bergman_type_norm,
    bloch_norm,
    bloch_seminorm,
    boundary_profile,
    derivative_form_norm,
    integral_mean,
    is_little_bloch,
    little_bloch_profile,
    sw_integral_check,
)
from .criteria import (
    BoundednessResult,
    CompactnessResult,
    EquivalenceProbe,
    PreconditionUnmetError,
    Status,
    SymbolPair,
    Verdict,
    bergman_specialization_ratio,
    classify_bounded_into_bloch,
    classify_bounded_into_little_bloch,
    classify_compact_into_bloch,
    classify_compact_into_little_bloch,
    composition_limit_probe,
    composition_quotient,
    criterion_profile,
    derivative_limit_probe,
    multiplier_quotient,
)
from .oracle import (
    CompactnessProbe,
    LowerBoundTrend,
    TestFamily,
    boundary_test_function,
    compactness_probe,
    lower_bound_trend,
    operator_apply,
    operator_lower_bound,
    vanishing_test_function,
)
