"""Shared fixtures: the acceptance grid and a session-wide pipeline cache.

Kernels, spectra, and path-congestion results are expensive at the top of
the grid (4096 states), so every test that needs one goes through the cached
accessors below instead of rebuilding.
"""

from functools import lru_cache

import pytest

from spectral_gibbs import (
    ModelSpec,
    build_kernel,
    kappa_exact,
    spectrum,
)

GRID_N = tuple(range(1, 7))
GRID_COLORS = (2, 3, 4)
GRID_TEMPS = (0.5, 1.0, 2.0, 5.0)


def grid_specs(max_states=4096, min_n=1):
    """The acceptance grid, ordered by (n, colors, temp)."""
    return [
        ModelSpec(n, colors, temp)
        for n in GRID_N
        for colors in GRID_COLORS
        for temp in GRID_TEMPS
        if colors**n <= max_states and n >= min_n
    ]


@lru_cache(maxsize=None)
def kernel_for(spec):
    return build_kernel(spec)


@lru_cache(maxsize=None)
def spectrum_for(spec):
    return spectrum(kernel_for(spec))


@lru_cache(maxsize=None)
def kappa_for(spec):
    return kappa_exact(kernel_for(spec))


@pytest.fixture
def announce(capsys):
    """Print a criterion verdict line that survives pytest's capture."""

    def _announce(criterion, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        with capsys.disabled():
            print(f"[criterion {criterion:2d}] {status} {detail}".rstrip())

    return _announce
