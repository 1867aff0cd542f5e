"""Linear array geometry, source coordinates, and the near-field region.

Conventions: all lengths in meters; the single angular variable is
u = cos(theta) in (-1, 1), with u = 0 at broadside.  Antennas sit on the
x-axis inside [-a, a] where a is the half-aperture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8
"""Speed of light in m/s."""

#: Positions this close to the aperture edge (relative) are still accepted.
_EDGE_SLACK = 1e-12


def polar_to_cartesian(u: float, r: float) -> tuple[float, float]:
    """Map (u, r) with r > 0 to Cartesian (p1, p2) = (r*u, r*sqrt(1-u^2))."""
    if r <= 0:
        raise ValueError(f"range must be positive, got {r}")
    return r * u, r * np.sqrt((1.0 - u) * (1.0 + u))


def cartesian_to_polar(p1: float, p2: float) -> tuple[float, float]:
    """Map Cartesian (p1, p2) with p2 > 0 back to (u, r)."""
    if p2 <= 0:
        raise ValueError(
            f"p2 must be positive (source in front of the array line), got {p2}"
        )
    r = float(np.hypot(p1, p2))
    return p1 / r, r


@dataclass(frozen=True)
class SourcePosition:
    """Source location in polar form: direction cosine u and range r.

    Cartesian coordinates are derived views; the polar pair is canonical.
    """

    u: float
    r: float

    def __post_init__(self):
        if not -1.0 < self.u < 1.0:
            raise ValueError(f"|u| must be < 1 (endfire excluded), got {self.u}")
        if self.r <= 0:
            raise ValueError(f"range must be positive, got {self.r}")

    @property
    def p1(self) -> float:
        return self.r * self.u

    @property
    def p2(self) -> float:
        return self.r * float(np.sqrt((1.0 - self.u) * (1.0 + self.u)))

    @classmethod
    def from_cartesian(cls, p1: float, p2: float) -> "SourcePosition":
        u, r = cartesian_to_polar(p1, p2)
        return cls(u=u, r=r)


@dataclass(frozen=True)
class ArrayGeometry:
    """Ordered antenna coordinates with aperture and wavelength context."""

    positions: tuple[float, ...]
    half_aperture: float
    wavelength: float

    def __post_init__(self):
        if self.half_aperture <= 0:
            raise ValueError("half_aperture must be positive")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        pos = tuple(float(x) for x in self.positions)
        object.__setattr__(self, "positions", pos)
        if len(pos) < 3:
            raise ValueError(
                f"need at least 3 antennas for a finite range bound, got {len(pos)}"
            )
        lim = self.half_aperture * (1.0 + _EDGE_SLACK)
        if any(abs(x) > lim for x in pos):
            raise ValueError("positions must lie within [-a, a]")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def aperture(self) -> float:
        return 2.0 * self.half_aperture

    def as_array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)

    def min_spacing_violation(self) -> tuple[int, float] | None:
        """Return (index, gap) of the first adjacent pair closer than lambda/2."""
        gaps = np.diff(self.as_array())
        floor = 0.5 * self.wavelength * (1.0 - 1e-12)
        bad = np.nonzero(gaps < floor)[0]
        if bad.size == 0:
            return None
        i = int(bad[0])
        return i, float(gaps[i])

    def scaled(self, c: float) -> "ArrayGeometry":
        """Uniformly scale positions, aperture, and wavelength by c > 0."""
        return ArrayGeometry(
            positions=tuple(c * x for x in self.positions),
            half_aperture=c * self.half_aperture,
            wavelength=c * self.wavelength,
        )


def effective_aperture(a: float, u: float) -> float:
    """Aperture projected toward direction u: 2a*sqrt(1-u^2)."""
    return 2.0 * a * float(np.sqrt(max(0.0, (1.0 - u) * (1.0 + u))))


def rayleigh_distance(a: float, wavelength: float, u: float = 0.0) -> float:
    """Outer boundary of the radiating near field, 2*D_eff^2/lambda."""
    d_eff = effective_aperture(a, u)
    return 2.0 * d_eff * d_eff / wavelength


def fresnel_distance(a: float, wavelength: float, u: float = 0.0) -> float:
    """Inner boundary of the radiating near field, 0.62*sqrt(D_eff^3/lambda)."""
    d_eff = effective_aperture(a, u)
    return 0.62 * float(np.sqrt(d_eff**3 / wavelength))


def exact_distance(x: float, source: SourcePosition) -> float:
    """Propagation distance from the source to an element at coordinate x."""
    r, u = source.r, source.u
    return float(np.sqrt(r * r - 2.0 * r * u * x + x * x))


def steering_vector(array: ArrayGeometry, source: SourcePosition) -> np.ndarray:
    """Unit-modulus array response under the second-order (Fresnel) phase model.

    Entry n has phase (2*pi/lambda) * (u*x_n - (1-u^2)/(2r) * x_n^2); the
    common range-only phase is already removed.
    """
    x = array.as_array()
    u, r = source.u, source.r
    phase = (2.0 * np.pi / array.wavelength) * (
        u * x - (1.0 - u * u) / (2.0 * r) * x * x
    )
    return np.exp(1j * phase)


@dataclass(frozen=True)
class NearFieldRegion:
    """Admissible source region: |u| <= u_max and d_F(u) <= r <= d_R(u).

    Directions where the Fresnel bound meets or exceeds the Rayleigh bound
    carry no valid ranges and are excluded.
    """

    half_aperture: float
    wavelength: float
    u_max: float = 0.999

    def __post_init__(self):
        if self.half_aperture <= 0 or self.wavelength <= 0:
            raise ValueError("half_aperture and wavelength must be positive")
        if not 0.0 < self.u_max < 1.0:
            raise ValueError(f"u_max must be in (0, 1), got {self.u_max}")

    def fresnel(self, u: float) -> float:
        return fresnel_distance(self.half_aperture, self.wavelength, u)

    def rayleigh(self, u: float) -> float:
        return rayleigh_distance(self.half_aperture, self.wavelength, u)

    @property
    def broadside_rayleigh(self) -> float:
        """d_R at u = 0, the largest admissible range."""
        return rayleigh_distance(self.half_aperture, self.wavelength, 0.0)

    def admissible_direction(self, u: float) -> bool:
        return abs(u) <= self.u_max and self.fresnel(u) < self.rayleigh(u)

    def contains(self, source: SourcePosition) -> bool:
        if not self.admissible_direction(source.u):
            return False
        return self.fresnel(source.u) <= source.r <= self.rayleigh(source.u)
