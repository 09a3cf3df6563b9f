"""Exact multidimensional continued-fraction dynamics on a simplex, the
conjugate tent map, and the Minkowski homeomorphism between them."""

from .errors import (
    DegenerateSimplex,
    DensitySingularity,
    DepthExceeded,
    DivergentIntegral,
    InfiniteInvariantMeasure,
    InvalidDimension,
    InvalidInput,
    InvalidProjectiveFrame,
    LemmaViolation,
    MinkmapError,
    NotUnimodular,
    NumericFailure,
    OutsideDomain,
    PointAtInfinity,
    QuadratureFailure,
    SingularMatrix,
    StrategyViolation,
)
from .exact import Mat, hnf, normalize_proj, primitive_proj_of_point, unimodular_inverse
from .simplexes import (
    BaseMatrices,
    RatSimplex,
    UniSimplex,
    barycentric,
    base_matrices,
    diameter,
    farey_cylinder,
    mesh,
    simplex_lebesgue,
    standard_simplex,
    tent_cylinder,
)
from .dynamics import (
    OrbitRecord,
    float_step,
    in_delta,
    inverse_branch,
    itinerary,
    monkemeyer_step,
    tent_step,
    v1,
)
from .minkowski import (
    PhiResult,
    conjugacy_residual,
    orientation_check,
    phi,
    phi_inv,
    phi_t,
    self_similarity_residual,
)
from .arithmetic import (
    PeriodicPointInfo,
    PointClassification,
    classify_point,
    hnf_equiv,
    monkemeyer_periodic_point,
    rational_becomes_vertex,
    tent_periodic_point,
    tent_preperiodic,
)
from .ergodic import (
    EntropyReport,
    G,
    birkhoff_digit_frequency,
    cylinder_contrast,
    density_h,
    entropy,
    mu_of_delta0,
    singularity_samples,
)
from .scrambling import (
    all_products_scrambling,
    is_scrambling,
    lovers_game_value,
    minimal_scrambling_length,
    scrambling_bound,
    strategy_simulate,
)

__version__ = "0.1.0"
