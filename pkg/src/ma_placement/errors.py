"""Exception hierarchy shared by all modules."""


class MaPlacementError(Exception):
    """Base class for all library errors."""

    code = "error"


class DegenerateGeometry(MaPlacementError):
    """Array positions carry no usable angle/range information (singular bound denominator)."""

    code = "degenerate-geometry"


class EndfireSingularity(MaPlacementError):
    """Source direction too close to the array line; range bound diverges."""

    code = "endfire-singularity"


class SingularMoments(MaPlacementError):
    """Placement moment matrix is not invertible above tolerance."""

    code = "singular-moments"


class InfeasibleAperture(MaPlacementError):
    """Requested element count does not fit in the aperture at minimum spacing."""

    code = "infeasible-aperture"


class SpacingViolation(MaPlacementError):
    """Adjacent elements closer than half a wavelength."""

    code = "spacing-violation"


class SupportOverflow(MaPlacementError):
    """Reduced support point falls outside the aperture; upstream moments were infeasible."""

    code = "support-overflow"


class SearchSpaceTooLarge(MaPlacementError):
    """Exhaustive candidate count exceeds the configured evaluation budget."""

    code = "search-space-too-large"

    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(
            f"exhaustive search would evaluate {count} candidate arrays, "
            f"budget is {budget}; enable symmetry pruning or coarsen the pitch"
        )


class AllPointsDegenerate(MaPlacementError):
    """Every grid point failed to evaluate."""

    code = "all-points-degenerate"
