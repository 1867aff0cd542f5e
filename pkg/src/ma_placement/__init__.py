"""Movable-antenna placement design and position error bounds for near-field sensing."""

from .crb import (
    MomentMatrix,
    SensingParams,
    crb_r,
    crb_u,
    kappa,
    sample_moments,
    speb,
    speb_distribution,
)
from .design import (
    PlacementDistribution,
    ThreePointDesign,
    baseline_sparse_ula,
    baseline_two_edge,
    baseline_ula,
    discrete_deployment,
    gamma_param,
    optimal_q,
    symmetrize,
    tchakaloff_reduce,
    three_point_design,
)
from .errors import (
    AllPointsDegenerate,
    DegenerateGeometry,
    EndfireSingularity,
    InfeasibleAperture,
    MaPlacementError,
    SearchSpaceTooLarge,
    SingularMoments,
    SpacingViolation,
    SupportOverflow,
)
from .geometry import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    NearFieldRegion,
    SourcePosition,
    cartesian_to_polar,
    effective_aperture,
    exact_distance,
    fresnel_distance,
    polar_to_cartesian,
    rayleigh_distance,
    steering_vector,
)
from .search import (
    DesignReport,
    RegionGrid,
    boundary_speb_profile,
    exhaustive_search,
    symmetric_worst_case,
    worst_case_speb,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "SourcePosition",
    "NearFieldRegion",
    "SensingParams",
    "MomentMatrix",
    "PlacementDistribution",
    "ThreePointDesign",
    "DesignReport",
    "RegionGrid",
    "SPEED_OF_LIGHT",
    "polar_to_cartesian",
    "cartesian_to_polar",
    "effective_aperture",
    "fresnel_distance",
    "rayleigh_distance",
    "exact_distance",
    "steering_vector",
    "sample_moments",
    "kappa",
    "crb_u",
    "crb_r",
    "speb",
    "speb_distribution",
    "symmetrize",
    "gamma_param",
    "optimal_q",
    "three_point_design",
    "tchakaloff_reduce",
    "discrete_deployment",
    "baseline_ula",
    "baseline_sparse_ula",
    "baseline_two_edge",
    "worst_case_speb",
    "boundary_speb_profile",
    "symmetric_worst_case",
    "exhaustive_search",
    "MaPlacementError",
    "DegenerateGeometry",
    "EndfireSingularity",
    "SingularMoments",
    "InfeasibleAperture",
    "SpacingViolation",
    "SupportOverflow",
    "SearchSpaceTooLarge",
    "AllPointsDegenerate",
]
