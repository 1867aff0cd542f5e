"""Placement distributions, the closed-form three-point optimum, and baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crb import MomentMatrix
from .errors import InfeasibleAperture, SpacingViolation, SupportOverflow
from .geometry import ArrayGeometry


@dataclass(frozen=True)
class PlacementDistribution:
    """Discrete probability mass over candidate antenna locations in [-a, a]."""

    support: tuple[float, ...]
    weights: tuple[float, ...]
    half_aperture: float

    def __post_init__(self):
        support = tuple(float(z) for z in self.support)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)
        if len(support) != len(weights) or not support:
            raise ValueError("support and weights must be nonempty and equal length")
        if self.half_aperture <= 0:
            raise ValueError("half_aperture must be positive")
        lim = self.half_aperture * (1.0 + 1e-12)
        if any(abs(z) > lim for z in support):
            raise ValueError("support points must lie within [-a, a]")
        if len(set(support)) != len(support):
            raise ValueError("support points must be distinct")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")

    # ---- moments -------------------------------------------------------

    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.support), np.asarray(self.weights)

    @property
    def mean(self) -> float:
        z, w = self._arrays()
        return float(w @ z)

    @property
    def m2(self) -> float:
        z, w = self._arrays()
        return float(w @ (z * z))

    @property
    def m4(self) -> float:
        z, w = self._arrays()
        return float(w @ (z**4))

    def moments(self) -> MomentMatrix:
        z, w = self._arrays()
        m1 = float(w @ z)
        m2 = float(w @ z**2)
        m3 = float(w @ z**3)
        m4 = float(w @ z**4)
        return MomentMatrix(
            var_x=m2 - m1 * m1,
            cov_x_x2=m3 - m1 * m2,
            var_x2=m4 - m2 * m2,
        )

    def is_symmetric(self, tol: float = 1e-9) -> bool:
        """True when the mass at z equals the mass at -z for every z.

        Support points are matched with a coordinate tolerance of
        tol * half_aperture so rounded grids still qualify.
        """
        z, w = self._arrays()
        order = np.argsort(z)
        zo, wo = z[order], w[order]
        return bool(
            np.max(np.abs(zo + zo[::-1])) <= tol * self.half_aperture
            and np.max(np.abs(wo - wo[::-1])) <= tol
        )


def symmetrize(dist: PlacementDistribution) -> PlacementDistribution:
    """Even mixture of a distribution and its reflection about the origin.

    Preserves all even moments; the output has zero odd moments, so its
    worst-case bound is never worse than the input's.
    """
    mass: dict[float, float] = {}
    for z, w in zip(dist.support, dist.weights):
        half = 0.5 * w
        mass[z] = mass.get(z, 0.0) + half
        mass[-z] = mass.get(-z, 0.0) + half
    support = tuple(sorted(mass))
    return PlacementDistribution(
        support=support,
        weights=tuple(mass[z] for z in support),
        half_aperture=dist.half_aperture,
    )


def gamma_param(a: float, wavelength: float) -> float:
    """Aperture shape parameter 256*(a/lambda)^2 governing the edge mass."""
    if a <= 0 or wavelength <= 0:
        raise ValueError("a and wavelength must be positive")
    return 256.0 * (a / wavelength) ** 2


def optimal_q(gamma: float) -> float:
    """Edge mass minimizing 1/q + gamma/(q(1-q)) over q in (0, 1].

    The stationary value 1 + gamma - sqrt(gamma*(1+gamma)) is evaluated in
    the cancellation-free form (1+gamma) / (1+gamma + sqrt(gamma*(1+gamma))).
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    root = math.sqrt(gamma * (1.0 + gamma))
    return (1.0 + gamma) / (1.0 + gamma + root)


@dataclass(frozen=True)
class ThreePointDesign:
    """Masses (q/2, 1-q, q/2) on {-a, 0, +a}; the worst-case optimal structure."""

    half_aperture: float
    edge_mass: float

    def __post_init__(self):
        if not 0.0 < self.edge_mass <= 1.0:
            raise ValueError("edge_mass must be in (0, 1]")
        if self.half_aperture <= 0:
            raise ValueError("half_aperture must be positive")

    def distribution(self) -> PlacementDistribution:
        a, q = self.half_aperture, self.edge_mass
        return PlacementDistribution(
            support=(-a, 0.0, a),
            weights=(0.5 * q, 1.0 - q, 0.5 * q),
            half_aperture=a,
        )

    def moments(self) -> MomentMatrix:
        a, q = self.half_aperture, self.edge_mass
        return MomentMatrix(
            var_x=q * a * a,
            cov_x_x2=0.0,
            var_x2=q * (1.0 - q) * a**4,
        )


def three_point_design(
    a: float, wavelength: float, asymptotic: bool = False
) -> ThreePointDesign:
    """Optimal center/edges design; asymptotic=True pins the edge mass at 0.5."""
    q = 0.5 if asymptotic else optimal_q(gamma_param(a, wavelength))
    return ThreePointDesign(half_aperture=a, edge_mass=q)


def tchakaloff_reduce(dist: PlacementDistribution) -> PlacementDistribution:
    """Collapse a symmetric distribution to three atoms with identical m2, m4.

    The reduced support is {-s, 0, +s} with s = sqrt(m4/m2) and edge mass
    m2^2/m4; the bound objective depends on the measure only through these
    moments, so it is unchanged at every source.
    """
    if not dist.is_symmetric():
        raise ValueError("tchakaloff_reduce requires a centro-symmetric input")
    m2, m4 = dist.m2, dist.m4
    if m2 <= 0:
        raise ValueError("m2 must be positive to reduce")
    s = math.sqrt(m4 / m2)
    a = dist.half_aperture
    if s > a * (1.0 + 1e-9):
        raise SupportOverflow(
            f"reduced support point {s} exceeds half-aperture {a}; "
            "input moments were infeasible"
        )
    s = min(s, a)
    q = m2 * m2 / m4
    return PlacementDistribution(
        support=(-s, 0.0, s),
        weights=(0.5 * q, 1.0 - q, 0.5 * q),
        half_aperture=a,
    )


def round_half_away(x: float) -> int:
    """round() with halves going away from zero (pinned for reproducibility)."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def _cluster(center: float, count: int, pitch: float) -> np.ndarray:
    """Uniform pitch cluster of `count` elements centered on `center`."""
    offsets = (np.arange(count) - 0.5 * (count - 1)) * pitch
    return center + offsets


def discrete_deployment(n: int, a: float, wavelength: float) -> ArrayGeometry:
    """Feasible array realizing the three-point structure at lambda/2 pitch.

    round(n/4) elements pack inward from each aperture edge; the remainder
    forms a center cluster straddling the origin.  The result is exactly
    centro-symmetric.
    """
    if n < 3:
        raise ValueError(f"need at least 3 antennas, got {n}")
    pitch = 0.5 * wavelength
    if (n - 1) * pitch > 2.0 * a * (1.0 + 1e-12):
        raise InfeasibleAperture(
            f"{n} antennas at lambda/2 pitch need {(n - 1) * pitch:.4g} m, "
            f"aperture is {2 * a:.4g} m"
        )
    n_edge = round_half_away(0.25 * n)
    n_center = n - 2 * n_edge
    left = -a + np.arange(n_edge) * pitch
    right = -left[::-1] if n_edge else np.empty(0)
    center = _cluster(0.0, n_center, pitch)
    pos = np.concatenate([left, center, right])
    if np.any(np.diff(pos) < pitch * (1.0 - 1e-12)):
        raise InfeasibleAperture(
            f"edge and center clusters overlap for N={n}, a={a:.4g}, "
            f"lambda={wavelength:.4g}"
        )
    return ArrayGeometry(tuple(pos), half_aperture=a, wavelength=wavelength)


def baseline_ula(n: int, wavelength: float, a: float) -> ArrayGeometry:
    """Half-wavelength uniform array centered in the aperture."""
    pitch = 0.5 * wavelength
    if (n - 1) * pitch > 2.0 * a * (1.0 + 1e-12):
        raise InfeasibleAperture(
            f"ULA span {(n - 1) * pitch:.4g} m exceeds aperture {2 * a:.4g} m"
        )
    pos = _cluster(0.0, n, pitch)
    return ArrayGeometry(tuple(pos), half_aperture=a, wavelength=wavelength)


def baseline_sparse_ula(n: int, a: float, wavelength: float) -> ArrayGeometry:
    """Uniform array stretched to span the full aperture [-a, a]."""
    if n < 2:
        raise ValueError("need at least 2 antennas")
    pitch = 2.0 * a / (n - 1)
    if pitch < 0.5 * wavelength * (1.0 - 1e-12):
        raise SpacingViolation(
            f"sparse ULA pitch {pitch:.4g} m below lambda/2 = "
            f"{0.5 * wavelength:.4g} m"
        )
    pos = -a + np.arange(n) * pitch
    pos[-1] = a  # pin the endpoint exactly
    return ArrayGeometry(tuple(pos), half_aperture=a, wavelength=wavelength)


def baseline_two_edge(n: int, a: float, wavelength: float) -> ArrayGeometry:
    """Antennas split into two lambda/2-pitch clusters at the aperture edges.

    Odd n puts the extra element in the left cluster.
    """
    pitch = 0.5 * wavelength
    n_left = (n + 1) // 2
    n_right = n // 2
    left = -a + np.arange(n_left) * pitch
    right = a - np.arange(n_right)[::-1] * pitch
    if n_right and right[0] - left[-1] < pitch * (1.0 - 1e-12):
        raise InfeasibleAperture(
            f"edge clusters overlap for N={n}, a={a:.4g}, lambda={wavelength:.4g}"
        )
    pos = np.concatenate([left, right])
    return ArrayGeometry(tuple(pos), half_aperture=a, wavelength=wavelength)
