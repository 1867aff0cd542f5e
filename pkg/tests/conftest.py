import numpy as np
import pytest

from ma_placement import (
    NearFieldRegion,
    PlacementDistribution,
    SensingParams,
)

LAM = 0.01
A = 25 * LAM


@pytest.fixture
def lam():
    return LAM


@pytest.fixture
def a():
    return A


@pytest.fixture
def params():
    return SensingParams.from_snr_db(LAM, 1024, 25, 5.0)


@pytest.fixture
def region():
    return NearFieldRegion(A, LAM)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_distribution(rng, a, n_points=8, symmetric=False) -> PlacementDistribution:
    """Random placement distribution on [-a, a] with distinct support."""
    while True:
        pts = rng.uniform(-a, a, size=n_points)
        if len(set(pts.tolist())) == n_points:
            break
    w = rng.uniform(0.1, 1.0, size=n_points)
    w = w / w.sum()
    order = np.argsort(pts)
    dist = PlacementDistribution(
        support=tuple(pts[order]), weights=tuple(w[order]), half_aperture=a
    )
    if symmetric:
        from ma_placement import symmetrize

        dist = symmetrize(dist)
    return dist


def random_symmetric_positions(rng, a, half_n=6, with_center=True) -> tuple:
    """Strictly increasing centro-symmetric coordinates in [-a, a]."""
    while True:
        pos = np.sort(rng.uniform(0.05 * a, a, size=half_n))
        if np.all(np.diff(pos) > 1e-6 * a):
            break
    full = np.concatenate([-pos[::-1], [0.0] if with_center else [], pos])
    return tuple(full)
