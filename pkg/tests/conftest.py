"""Shared corpus builders for the unit and acceptance suites."""

import random
from fractions import Fraction

import pytest

from otlab import make_instance


def random_rational_instance(rng, size_lo=1, size_hi=4, with_metrics=False,
                             max_num=20, max_den=4):
    """A seeded random instance with exact rational data."""
    m = rng.randint(size_lo, size_hi)
    n = rng.randint(size_lo, size_hi)
    cost = [
        [Fraction(rng.randint(0, max_num), rng.randint(1, max_den)) for _ in range(n)]
        for _ in range(m)
    ]
    kwargs = {}
    if with_metrics:
        kwargs["metric_x"] = _line_metric(rng, m)
        kwargs["metric_y"] = _line_metric(rng, n)
    return make_instance(cost, random_marginal(rng, m), random_marginal(rng, n), **kwargs)


def random_marginal(rng, size):
    raw = [rng.randint(1, 9) for _ in range(size)]
    total = sum(raw)
    return [Fraction(v, total) for v in raw]


def _line_metric(rng, size):
    points = [Fraction(0)]
    for _ in range(size - 1):
        points.append(points[-1] + rng.randint(1, 3))
    return [[abs(a - b) for b in points] for a in points]


def random_potential(rng, size, max_num=10, max_den=4):
    return [
        Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        for _ in range(size)
    ]


@pytest.fixture
def rng():
    return random.Random(20240817)
