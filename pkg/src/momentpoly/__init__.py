"""momentpoly: moment-polytope verification for finite exponential families.

Exact rational layer: polytopes, marginal polytopes, torification data and
the theorem-level identities.  Numeric layer: log-partition geometry, the
Kahler tube, projective momentum maps and the Veronese immersion checks.
"""

from .errors import MomentPolyError
from .expfam import (
    ExponentialFamily,
    LogRational,
    ProbabilityDistribution,
    SampleSpace,
    binomial_family,
    expectation,
    family_from_dict,
    family_to_dict,
    fisher,
    is_full,
    log_partition,
    mean_params,
    new_family,
    pdf,
    pdf_exact,
    point_mass,
)
from .moment import (
    TorificationData,
    canonical_torification,
    marginal_polytope,
    mean_in_interior,
    moment_polytope,
    moment_polytope_from_family,
    t_from_rho,
    torification_consistent,
    verify_corollary,
    verify_identity,
    verify_theorem,
)
from .polytope import (
    AffineMap,
    Polytope,
    Units,
    affine_image,
    contains,
    dim,
    equals,
    hull,
    simplex,
    vertex_diffs_integral,
)
from .report import VerificationReport, Witness

__version__ = "0.1.0"
