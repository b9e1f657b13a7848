"""Shared fixtures and field builders for the test suite."""

from pathlib import Path

import numpy as np
import pytest

from plasmawave import Grid, RealField

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO_ROOT / "configs"


def smooth_random_field(grid: Grid, rng: np.random.Generator, k_cap: int | None = None) -> RealField:
    """Band-limited random field with a Gaussian-decayed spectrum.

    Built in spectral space so round trips and operator identities see a
    genuinely smooth function; modes above k_cap (default n/8) are zero.
    """
    n = grid.n_points
    if k_cap is None:
        k_cap = n // 8
    coeff = np.zeros(n // 2 + 1, dtype=complex)
    j = np.arange(1, k_cap)
    coeff[1:k_cap] = (
        rng.normal(size=k_cap - 1) + 1j * rng.normal(size=k_cap - 1)
    ) * np.exp(-((4.0 * j / k_cap) ** 2))
    values = np.fft.irfft(coeff * n, n)
    peak = np.max(np.abs(values))
    if peak > 0:
        values /= peak
    return RealField(grid, values)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260808)


@pytest.fixture(scope="session")
def grid_small() -> Grid:
    return Grid(256, 10.0)


@pytest.fixture(scope="session")
def grid_oracle() -> Grid:
    return Grid(2048, 40.0)
