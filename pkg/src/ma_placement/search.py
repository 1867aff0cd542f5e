"""Worst-case bound evaluation over the near-field region and exhaustive placement search."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .crb import (
    MomentMatrix,
    SensingParams,
    _speb_quadratic,
    kappa,
    sample_moments,
)
from .design import PlacementDistribution, ThreePointDesign
from .errors import AllPointsDegenerate, SearchSpaceTooLarge, SingularMoments
from .geometry import ArrayGeometry, NearFieldRegion, SourcePosition

DEFAULT_SEARCH_BUDGET = 50_000_000

#: Determinant guard shared with the crb module (relative).
_DET_RTOL = 1e-14


def worker_count(requested: int | None = None) -> int:
    """Resolve the worker cap: explicit arg, else MA_PLACEMENT_THREADS, 0 = auto."""
    if requested is None:
        raw = os.environ.get("MA_PLACEMENT_THREADS", "0")
        try:
            requested = int(raw)
        except ValueError:
            requested = 0
    if requested <= 0:
        return min(8, os.cpu_count() or 1)
    return requested


@dataclass
class RegionGrid:
    """Nested discretization of the near-field region.

    Direction samples are u_max * k/m (m = (n_u-1)//2) so broadside is hit
    exactly; ranges are uniform per direction with the Rayleigh boundary
    pinned as the last sample.  `refined(2)` reuses every coarse point, which
    makes grid-refinement monotonicity of the maximum exact.
    """

    region: NearFieldRegion
    n_u: int = 201
    n_r: int = 201

    def __post_init__(self):
        if self.n_u < 3 or self.n_r < 2:
            raise ValueError("need n_u >= 3 and n_r >= 2")
        if self.n_u % 2 == 0:
            self.n_u += 1  # keep broadside on the grid

    @cached_property
    def u_values(self) -> np.ndarray:
        m = (self.n_u - 1) // 2
        k = np.arange(-m, m + 1)
        u = self.region.u_max * k / m
        keep = [self.region.admissible_direction(v) for v in u]
        return u[np.asarray(keep, dtype=bool)]

    def radii(self, u: float) -> np.ndarray:
        d_f = self.region.fresnel(u)
        d_r = self.region.rayleigh(u)
        r = d_f + (d_r - d_f) * (np.arange(self.n_r) / (self.n_r - 1))
        r[-1] = d_r
        return r

    @cached_property
    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat (u, r) arrays ordered by tie-break priority: |u| up, then r down."""
        us, rs = [], []
        for u in sorted(self.u_values, key=lambda v: (abs(v), v)):
            r = self.radii(u)[::-1]
            us.append(np.full(r.size, u))
            rs.append(r)
        return np.concatenate(us), np.concatenate(rs)

    @property
    def size(self) -> int:
        return self.points[0].size

    def refined(self, factor: int = 2) -> "RegionGrid":
        """Denser grid containing every point of this one (factor a power of 2)."""
        return RegionGrid(
            region=self.region,
            n_u=factor * (self.n_u - 1) + 1,
            n_r=factor * (self.n_r - 1) + 1,
        )


@dataclass(frozen=True)
class DesignReport:
    """Worst-case bound of one design together with the maximizing source."""

    label: str
    worst_case_speb: float
    worst_u: float
    worst_r: float
    n_u: int = 0
    n_r: int = 0

    @property
    def worst_source(self) -> SourcePosition:
        return SourcePosition(u=self.worst_u, r=self.worst_r)

    @property
    def worst_case_rmse(self) -> float:
        return math.sqrt(self.worst_case_speb)


def _resolve_moments(target) -> MomentMatrix:
    if isinstance(target, MomentMatrix):
        return target
    if isinstance(target, ArrayGeometry):
        return sample_moments(target)
    if isinstance(target, PlacementDistribution):
        return target.moments()
    if isinstance(target, ThreePointDesign):
        return target.moments()
    raise TypeError(f"cannot evaluate a {type(target).__name__}")


def _checked_det(m: MomentMatrix) -> float:
    det = m.det
    if det <= _DET_RTOL * m.var_x * m.var_x2 or det <= 0.0:
        raise SingularMoments(
            f"moment determinant {det:.3e} below tolerance; worst-case bound diverges"
        )
    return det


def worst_case_speb(
    target, params: SensingParams, grid: RegionGrid, label: str = ""
) -> DesignReport:
    """Maximize the position bound over the region grid.

    Ties are broken toward smaller |u|, then larger r.  Accepts an
    ArrayGeometry, PlacementDistribution, ThreePointDesign, or MomentMatrix.
    """
    m = _resolve_moments(target)
    det = _checked_det(m)
    u, r = grid.points
    if u.size == 0:
        raise AllPointsDegenerate("region grid is empty")
    vals = _speb_quadratic(kappa(params), m, det, u, r)
    finite = np.isfinite(vals)
    if not finite.any():
        raise AllPointsDegenerate("no grid point produced a finite bound")
    vals = np.where(finite, vals, -np.inf)
    i = int(np.argmax(vals))  # first hit respects the priority ordering
    return DesignReport(
        label=label or type(target).__name__,
        worst_case_speb=float(vals[i]),
        worst_u=float(u[i]),
        worst_r=float(r[i]),
        n_u=grid.n_u,
        n_r=grid.n_r,
    )


def boundary_speb_profile(
    moments: MomentMatrix,
    params: SensingParams,
    region: NearFieldRegion,
    u: float,
) -> float:
    """Position bound along the Rayleigh boundary r = d_R(u), symmetric moments only.

    Equals kappa * [d^2 (1+3u^2)/Var(X) + 4 d^4 (1-u^2)^2 / Var(X^2)] with
    d the broadside Rayleigh distance.
    """
    scale = math.sqrt(max(moments.var_x * moments.var_x2, 0.0))
    if abs(moments.cov_x_x2) > 1e-9 * max(scale, 1e-300):
        raise ValueError("boundary profile requires centro-symmetric moments")
    if moments.var_x <= 0 or moments.var_x2 <= 0:
        raise SingularMoments("moments must be positive definite")
    d = region.broadside_rayleigh
    one = (1.0 - u) * (1.0 + u)
    return kappa(params) * (
        d * d * (1.0 + 3.0 * u * u) / moments.var_x
        + 4.0 * d**4 * one * one / moments.var_x2
    )


def symmetric_worst_case(
    moments: MomentMatrix, params: SensingParams, region: NearFieldRegion
) -> float:
    """Closed-form worst case for symmetric moments: broadside on the Rayleigh boundary."""
    return boundary_speb_profile(moments, params, region, 0.0)


# ---------------------------------------------------------------------------
# Exhaustive reference search
# ---------------------------------------------------------------------------


def _candidate_positions(a: float, pitch: float) -> np.ndarray:
    count = int(math.floor(2.0 * a / pitch + 1e-9)) + 1
    c = -a + np.arange(count) * pitch
    # snap an (up to rounding) zero candidate to exactly 0
    near0 = np.abs(c) < 1e-12 * a
    c[near0] = 0.0
    return c


def _symmetric_subsets(cands: np.ndarray, n: int, a: float):
    """Yield centro-symmetric n-subsets of a symmetric candidate set."""
    if abs(cands[0] + cands[-1]) > 1e-9 * a:
        raise ValueError("symmetry pruning needs a symmetric candidate set")
    pos = [c for c in cands if c > 0]
    if n % 2:
        if not any(c == 0.0 for c in cands):
            raise ValueError("odd N with symmetry pruning needs a center candidate")
        core = (0.0,)
    else:
        core = ()
    for radii in itertools.combinations(pos, n // 2):
        neg = tuple(-s for s in reversed(radii))
        yield neg + core + radii


def _count_symmetric(cands: np.ndarray, n: int) -> int:
    pos = int(np.sum(cands > 0))
    return math.comb(pos, n // 2)


def _evaluate_chunk(subsets, a, wavelength, kap, u, r, min_gap):
    """Best (value, positions, u, r) over a list of candidate position tuples."""
    best = None
    for pos in subsets:
        x = np.asarray(pos)
        if np.any(np.diff(x) < min_gap):
            continue
        m = sample_moments(x)
        det = m.det
        if det <= _DET_RTOL * max(a**6, m.var_x * m.var_x2):
            continue
        vals = _speb_quadratic(kap, m, det, u, r)
        i = int(np.argmax(vals))
        key = (float(vals[i]), pos)
        if best is None or key < best[0]:
            best = (key, float(u[i]), float(r[i]))
    return best


def exhaustive_search(
    n: int,
    a: float,
    wavelength: float,
    params: SensingParams,
    grid: RegionGrid,
    candidate_pitch: float | None = None,
    symmetry_prune: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
    max_workers: int | None = None,
) -> tuple[DesignReport, ArrayGeometry]:
    """Enumerate lattice placements and return the minimax-optimal one.

    Candidates sit on a pitch >= lambda/2 lattice spanning [-a, a]; with
    symmetry_prune only centro-symmetric subsets are visited.  Results are
    deterministic regardless of worker count: the reduction is a minimum with
    ties broken by lexicographically smallest position vector.
    """
    pitch = 0.5 * wavelength if candidate_pitch is None else candidate_pitch
    if pitch < 0.5 * wavelength * (1.0 - 1e-12):
        raise ValueError(f"candidate_pitch {pitch} below lambda/2")
    cands = _candidate_positions(a, pitch)
    if n > cands.size:
        raise ValueError(f"N={n} exceeds candidate count {cands.size}")

    if symmetry_prune:
        count = _count_symmetric(cands, n)
        subsets = _symmetric_subsets(cands, n, a)
    else:
        count = math.comb(cands.size, n)
        subsets = itertools.combinations(cands, n)
    if count > budget:
        raise SearchSpaceTooLarge(count, budget)

    kap = kappa(params)
    u, r = grid.points
    min_gap = 0.5 * wavelength * (1.0 - 1e-12)

    workers = worker_count(max_workers)
    if workers > 1 and count > 4 * workers and count <= 2_000_000:
        all_subsets = list(subsets)
        chunk = -(-len(all_subsets) // workers)
        parts = [all_subsets[i : i + chunk] for i in range(0, len(all_subsets), chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda p: _evaluate_chunk(p, a, wavelength, kap, u, r, min_gap),
                    parts,
                )
            )
    else:
        results = [_evaluate_chunk(subsets, a, wavelength, kap, u, r, min_gap)]

    results = [b for b in results if b is not None]
    if not results:
        raise AllPointsDegenerate("no candidate subset produced a finite bound")
    (val, pos), wu, wr = min(results, key=lambda b: b[0])
    geom = ArrayGeometry(pos, half_aperture=a, wavelength=wavelength)
    report = DesignReport(
        label="exhaustive",
        worst_case_speb=val,
        worst_u=wu,
        worst_r=wr,
        n_u=grid.n_u,
        n_r=grid.n_r,
    )
    return report, geom
