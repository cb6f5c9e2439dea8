"""Shared fixtures: seeded random parameter draws used across the suites."""

import numpy as np
import pytest

from dhym_ruled import BundleClass, canonicalize, make_surface, stability_margin

#: Margin floor for "comfortably stable" draws; keeps residual tolerances
#: meaningful (near-semistable classes lose digits to cancellation).
MARGIN_FLOOR = 0.05


def draw_surface(rng):
    k = int(rng.integers(1, 4))
    h = int(rng.integers(0, 3))
    kprime = float(rng.integers(1, 7))
    return make_surface(k, h, kprime)


def draw_class(rng):
    k1 = -float(rng.uniform(0.2, 3.0))
    k2 = float(rng.uniform(0.2, 3.0)) * float(rng.choice([-1.0, 1.0]))
    return BundleClass(k1=k1, k2=k2)


def draw_stable(rng, margin_floor=MARGIN_FLOOR):
    """A (surface, class) pair with stability margin above the floor."""
    while True:
        s = draw_surface(rng)
        b = draw_class(rng)
        if stability_margin(s, canonicalize(b)) > margin_floor:
            return s, b


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


@pytest.fixture
def figure1():
    """The showcase instance: k=1, h=0, k'=5, k1=-1, k2=1."""
    return make_surface(1, 0, 5), BundleClass(k1=-1.0, k2=1.0)


@pytest.fixture
def semistable_case():
    """Boundary-of-stability instance: x = 1/5, margin exactly zero."""
    return make_surface(1, 0, 4), BundleClass(k1=-1.0, k2=1.0)
