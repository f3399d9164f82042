"""Cosh-weighted finite Hilbert transform for complex parameter mu.

Forward operator by principal-value quadrature, the exponential
Chebyshev functions, explicit inverses on a Chebyshev-node grid, and an
experiment harness for noise studies.
"""

from .cheb_basis import (
    as_mu,
    chebyshev_T,
    chebyshev_U,
    exp_cheb_T,
    exp_cheb_U,
    null_function,
)
from .errors import (
    ComplexParseError,
    ConvergenceError,
    DomainError,
    MissingMomentError,
    RangeWarning,
    SingularWeightError,
)
from .experiments import (
    AnalyticPair,
    ExperimentReport,
    Metrics,
    NoiseSpec,
    add_noise,
    catalog_names,
    metrics,
    noise_study,
    pair_catalog,
    run_experiment,
)
from .identities import check_identity, identity_catalog, make_case, run_catalog
from .quadrature import angular_integral, forward_cosh_fht, pv_integral
from .spectral import (
    ChebGrid,
    FamilyParams,
    GridFunction,
    TransformMatrices,
    cos_to_sin,
    invert_d,
    invert_family,
    invert_m,
    make_grid,
    make_transform_matrices,
    moment_cosh,
    range_functional_d,
    reconstruct_with_moment,
    sin_to_cos,
)

__version__ = "0.1.0"
