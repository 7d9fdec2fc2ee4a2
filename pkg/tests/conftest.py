import cmath
import math

import numpy as np
import pytest

from disk_semiflow.gallery import gallery_ids, gallery_model

# duplicates driven by their generators through the ODE integrator
ODE_DUPLICATE_IDS = ("dilation", "mobius-schroeder", "strip")


def rand_disk(rng, n, rmax=0.85, rmin=0.0):
    radii = rmin + (rmax - rmin) * np.sqrt(rng.random(n))
    angles = 2.0 * math.pi * rng.random(n)
    return radii * np.exp(1j * angles)


def circle_grid(n, offset=0.0):
    return [cmath.exp(1j * (2.0 * math.pi * k / n + offset)) for k in range(n)]


@pytest.fixture(scope="session")
def entries():
    return {mid: gallery_model(mid) for mid in gallery_ids()}


@pytest.fixture(scope="session")
def models(entries):
    return {mid: e.model() for mid, e in entries.items()}


@pytest.fixture(scope="session")
def ode_models(entries):
    return {mid: entries[mid].generator_model() for mid in ODE_DUPLICATE_IDS}
