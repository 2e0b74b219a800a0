"""Shared fixtures and exact-geometry helpers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from skewlines.bracket import default_convention
from skewlines.errors import NotSkew
from skewlines.geometry import Configuration, OrientedLine, Vec3


def frac_vec(rng: random.Random, span: int = 9) -> Vec3:
    return Vec3(*(Fraction(rng.randint(-span, span)) for _ in range(3)))


def random_configuration(n: int, rng: random.Random, span: int = 9) -> Configuration:
    """Rejection-sample a valid configuration with small integer coordinates."""
    while True:
        lines = []
        for _ in range(n):
            direction = frac_vec(rng, span)
            if direction.is_zero():
                break
            lines.append(OrientedLine(frac_vec(rng, span), direction))
        if len(lines) != n:
            continue
        try:
            return Configuration(tuple(lines))
        except NotSkew:
            continue


def random_orientation_preserving_map(rng: random.Random):
    """A random integer 3x3 matrix with positive determinant, plus an offset."""
    from skewlines.geometry import det3

    while True:
        rows = tuple(frac_vec(rng, 3) for _ in range(3))
        if det3(*rows) > 0:
            return rows, frac_vec(rng, 5)


@pytest.fixture(scope="session")
def convention():
    """The calibrated bracket convention (also warms the tracing kernel)."""
    return default_convention()
