"""Analysis of T-periodic planar predator-prey Lotka-Volterra systems.

The package decides existence of coexistence states, evaluates the
classical and region-based uniqueness/stability criteria over the whole
exponent range p in [1, inf], and verifies predictions numerically via
period-map fixed points and Floquet multipliers.
"""

from .coeffs import (
    CoeffStats,
    NegativeIntegrand,
    PeriodicCoefficient,
    SystemSpec,
    ZeroDenominator,
    lp_average,
    lp_norm,
    ratio_extrema,
    stats,
)
from .constant_case import (
    ConstantSystem,
    SingularSystem,
    check25,
    demo_constants,
    discriminant,
    equilibrium,
    g_of_p,
    h_of_p,
    linear_term,
)
from .criteria import (
    StabilityReport,
    TestResult,
    condition18,
    condition19,
    intertwined_test,
    scan_p,
    unified_lp_test,
    weak_intertwined_test,
)
from .existence import BoundaryClassification, classify_boundary, coexistence_exists
from .jfunc import INF, angular_integral, conjugate, threshold_p, threshold_q
from .logistic import (
    NoPositiveSolution,
    PeriodicOrbit1D,
    periodic_logistic,
    weighted_average,
)
from .region import (
    RegionBounds,
    RegionSpec,
    SupResult,
    boundary_points,
    compute_uv,
    cp_contains,
    cp_slack,
    region_spec,
    sup_linear,
    sup_linear_c1,
    sup_xy,
)
from .simulate import (
    FloquetData,
    NoConvergence,
    NonPositive,
    PeriodicOrbit2D,
    PredictionReport,
    StepFailure,
    find_coexistence,
    find_coexistence_multistart,
    floquet,
    integrate,
    orbit_averages,
    poincare_map,
    verify_predictions,
)

__version__ = "0.1.0"
