"""Closed-form estimation error bounds for explicit arrays and placement moments.

Two evaluation routes are provided on purpose: `speb` goes through the
per-parameter bounds of an explicit array, while `speb_distribution` evaluates
the quadratic functional of an inverse moment matrix.  For the empirical
distribution of an array's positions the two agree to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry, EndfireSingularity, SingularMoments
from .geometry import ArrayGeometry, SourcePosition

#: Relative floor for moment-matrix determinants (scale-aware, dimensionless).
_DET_RTOL = 1e-14
#: Reject directions with 1 - u^2 below this.
_ENDFIRE_TOL = 1e-9


@dataclass(frozen=True)
class SensingParams:
    """Link-level constants entering the bound scale kappa."""

    wavelength: float
    snapshots: int
    transmit_power: float
    noise_power: float
    channel_gain_sq: float
    antennas: int

    def __post_init__(self):
        for name in (
            "wavelength",
            "snapshots",
            "transmit_power",
            "noise_power",
            "channel_gain_sq",
            "antennas",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_snr_db(
        cls, wavelength: float, snapshots: int, antennas: int, snr_db: float
    ) -> "SensingParams":
        """Build params from the average received SNR = P*|beta|^2/sigma^2 in dB.

        Only the product enters kappa, so power is carried by transmit_power
        and the gain/noise terms are set to 1.
        """
        return cls(
            wavelength=wavelength,
            snapshots=snapshots,
            transmit_power=10.0 ** (snr_db / 10.0),
            noise_power=1.0,
            channel_gain_sq=1.0,
            antennas=antennas,
        )


def kappa(params: SensingParams) -> float:
    """Scalar bound level: sigma^2 * lambda^2 / (8 pi^2 T P N |beta|^2)."""
    return (params.noise_power * params.wavelength**2) / (
        8.0
        * np.pi**2
        * params.snapshots
        * params.transmit_power
        * params.antennas
        * params.channel_gain_sq
    )


@dataclass(frozen=True)
class MomentMatrix:
    """Second-order statistics of an antenna position variable X.

    Entries are Var(X), Cov(X, X^2), Var(X^2); as a 2x2 matrix this is
    positive semidefinite for any real distribution.
    """

    var_x: float
    cov_x_x2: float
    var_x2: float

    def __post_init__(self):
        if self.var_x < 0 or self.var_x2 < 0:
            raise ValueError("variances must be nonnegative")
        bound = self.var_x * self.var_x2
        if self.cov_x_x2**2 > bound * (1.0 + 1e-9) + 1e-300:
            raise ValueError("cov_x_x2^2 exceeds var_x * var_x2 (not a covariance)")

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.var_x, self.cov_x_x2], [self.cov_x_x2, self.var_x2]]
        )

    @property
    def det(self) -> float:
        return self.var_x * self.var_x2 - self.cov_x_x2**2

    def scaled(self, c: float) -> "MomentMatrix":
        """Moments of c*X: Var scales c^2, Cov c^3, Var(X^2) c^4."""
        return MomentMatrix(
            var_x=c**2 * self.var_x,
            cov_x_x2=c**3 * self.cov_x_x2,
            var_x2=c**4 * self.var_x2,
        )


def _positions(array) -> np.ndarray:
    if isinstance(array, ArrayGeometry):
        return array.as_array()
    return np.asarray(array, dtype=float)


def sample_moments(array) -> MomentMatrix:
    """Empirical position moments of an array (or raw coordinate sequence)."""
    x = _positions(array)
    x2 = x * x
    mean_x = x.mean()
    mean_x2 = x2.mean()
    return MomentMatrix(
        var_x=mean_x2 - mean_x**2,
        cov_x_x2=(x2 * x).mean() - mean_x * mean_x2,
        var_x2=(x2 * x2).mean() - mean_x2**2,
    )


def _checked_det(m: MomentMatrix, scale: float, exc) -> float:
    det = m.det
    if det <= _DET_RTOL * max(scale, m.var_x * m.var_x2):
        raise exc(
            f"moment determinant {det:.3e} below tolerance; positions carry "
            "no independent linear/quadratic spread"
        )
    return det


def _geometry_scale(array) -> float:
    # a^6 for an ArrayGeometry; max|x|^6 for raw coordinates.
    if isinstance(array, ArrayGeometry):
        return array.half_aperture**6
    x = _positions(array)
    return float(np.max(np.abs(x))) ** 6 if x.size else 0.0


def crb_u(array, params: SensingParams) -> float:
    """Lower bound on the variance of any unbiased direction-cosine estimate."""
    m = sample_moments(array)
    det = _checked_det(m, _geometry_scale(array), DegenerateGeometry)
    return kappa(params) * m.var_x2 / det


def _check_endfire(u: float) -> float:
    one = (1.0 - u) * (1.0 + u)
    if one < _ENDFIRE_TOL:
        raise EndfireSingularity(f"1 - u^2 = {one:.3e} too close to endfire")
    return one


def crb_r(array, params: SensingParams, source: SourcePosition) -> float:
    """Lower bound on the variance of any unbiased range estimate."""
    m = sample_moments(array)
    det = _checked_det(m, _geometry_scale(array), DegenerateGeometry)
    one = _check_endfire(source.u)
    u, r = source.u, source.r
    num = (
        4.0 * r**4 * m.var_x
        + 8.0 * u * r**3 * m.cov_x_x2
        + 4.0 * u * u * r * r * m.var_x2
    )
    return kappa(params) * num / (one * one * det)


def speb(array, params: SensingParams, source: SourcePosition) -> float:
    """Squared position error bound: trace of the Cartesian bound matrix."""
    one = _check_endfire(source.u)
    return source.r**2 / one * crb_u(array, params) + crb_r(array, params, source)


def _speb_quadratic(kap, m: MomentMatrix, det, u, r):
    """Vector-friendly quadratic-functional form of the position bound.

    Evaluates kappa * [ r^2/(1-u^2) * (S^-1)_11 + v' S^-1 v / (1-u^2)^2 ]
    with v = [2ur, -2r^2]; u and r may be numpy arrays.
    """
    one = (1.0 - u) * (1.0 + u)
    r2 = r * r
    quad = (
        4.0 * u * u * r2 * m.var_x2
        + 8.0 * u * r2 * r * m.cov_x_x2
        + 4.0 * r2 * r2 * m.var_x
    )
    return (kap / det) * (r2 * m.var_x2 / one + quad / (one * one))


def speb_distribution(
    moments: MomentMatrix, params: SensingParams, source: SourcePosition
) -> float:
    """Position error bound of a placement distribution given only its moments."""
    det = _checked_det(moments, 0.0, SingularMoments)
    _check_endfire(source.u)
    return float(
        _speb_quadratic(kappa(params), moments, det, source.u, source.r)
    )
