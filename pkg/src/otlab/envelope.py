"""Lipschitz regularization of the cost and its value-convergence chain.

The level-n envelope replaces the cost by its inf-convolution with n times
the sum metric after truncation at n:

    c_n(x, y) = min over (z, t) of  min(c(z, t), n) + n * (d(x, z) + d(y, t))

c_n is n-Lipschitz for the sum metric, squeezed as 0 <= c_n <= min(c, n)
for nonnegative c, nondecreasing in n, and on finite spaces recovers c
exactly from a computable finite level onward. Optimal values inherit the
monotone chain v_n <= v_{n+1} <= v and meet v at that saturation level.

The direct O(|X|^2 |Y|^2) evaluation is the reference implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    INF,
    CostMatrix,
    Instance,
    Number,
    is_inf,
    to_number,
    validate_instance,
    zero,
)
from .errors import InfeasibleFiniteCost, InfeasibleInput, MissingMetric
from .primal import solve_primal


@dataclass(frozen=True, eq=False)
class EnvelopeLevel:
    n: Number
    cost: CostMatrix
    value: Number


@dataclass(frozen=True, eq=False)
class EnvelopeSchedule:
    """Sorted regularization levels with their optimal values, the
    unregularized limit value, and the smallest listed level (if any) whose
    value already equals the limit."""

    levels: tuple
    limit_value: Number
    saturation_level: Optional[Number]


def _require_metrics(instance: Instance):
    if instance.space_x.metric is None or instance.space_y.metric is None:
        raise MissingMetric(
            "the envelope needs metrics on both spaces; refusing to default "
            "to the discrete metric silently"
        )


def _require_nonnegative(cost: CostMatrix):
    for v in cost.entries.flat:
        if not is_inf(v) and v < 0:
            raise InfeasibleInput("the envelope requires a nonnegative cost")


def lipschitz_envelope(cost: CostMatrix, d_x, d_y, n: Number) -> CostMatrix:
    """The level-n envelope matrix (see module docstring)."""
    _require_nonnegative(cost)
    n = to_number(n, cost.mode)
    if n < 0:
        raise InfeasibleInput("the level n must be nonnegative")
    m, p = cost.shape
    dx = np.asarray(d_x)
    dy = np.asarray(d_y)
    if dx.shape != (m, m) or dy.shape != (p, p):
        raise MissingMetric(
            f"metric shapes {dx.shape}, {dy.shape} do not match cost {cost.shape}"
        )
    c = cost.entries
    trunc = [[n if is_inf(c[k, l]) or c[k, l] > n else c[k, l] for l in range(p)]
             for k in range(m)]
    out = np.empty((m, p), dtype=c.dtype)
    for i in range(m):
        for j in range(p):
            best = None
            for k in range(m):
                move_x = n * dx[i, k]
                for l in range(p):
                    v = trunc[k][l] + move_x + n * dy[j, l]
                    if best is None or v < best:
                        best = v
            out[i, j] = best
    out.setflags(write=False)
    return CostMatrix(out)


def envelope_schedule(instance: Instance, n_list: Sequence[Number]) -> EnvelopeSchedule:
    """Solve the regularized problem along increasing levels.

    Asserts the monotone chain v_n <= v_{n+1} <= v and reports the smallest
    listed level whose value equals the unregularized limit, if any.
    """
    instance = validate_instance(instance)
    _require_metrics(instance)
    _require_nonnegative(instance.cost)
    levels_in = [to_number(n, instance.mode) for n in n_list]
    if not levels_in or any(b <= a for a, b in zip(levels_in, levels_in[1:])):
        raise InfeasibleInput("n_list must be nonempty and strictly increasing")

    try:
        limit_value = solve_primal(instance).value
    except InfeasibleFiniteCost:
        # every plan hits an infinite cell: the value chain still rises, but
        # toward +inf and never saturates
        limit_value = INF
    dx = instance.space_x.metric
    dy = instance.space_y.metric
    levels = []
    previous_cost = None
    previous_value = None
    for n in levels_in:
        cost_n = lipschitz_envelope(instance.cost, dx, dy, n)
        regularized = Instance(
            space_x=instance.space_x,
            space_y=instance.space_y,
            cost=cost_n,
            mu=instance.mu,
            nu=instance.nu,
            mode=instance.mode,
        )
        value_n = solve_primal(validate_instance(regularized)).value
        if previous_cost is not None:
            _assert_entrywise_le(previous_cost, cost_n)
        if previous_value is not None and value_n < previous_value:
            raise AssertionError("value chain must be nondecreasing in n")
        if value_n > limit_value:
            raise AssertionError("regularized value exceeded the limit value")
        levels.append(EnvelopeLevel(n=n, cost=cost_n, value=value_n))
        previous_cost, previous_value = cost_n, value_n

    saturation = next((lv.n for lv in levels if lv.value == limit_value), None)
    return EnvelopeSchedule(
        levels=tuple(levels), limit_value=limit_value, saturation_level=saturation
    )


def _assert_entrywise_le(a: CostMatrix, b: CostMatrix):
    m, n = a.shape
    for i in range(m):
        for j in range(n):
            if a.entries[i, j] > b.entries[i, j]:
                raise AssertionError("envelope must be nondecreasing in n")


def saturation_index(cost: CostMatrix, d_x, d_y) -> Number:
    """The smallest level n with lipschitz_envelope(cost, n) == cost.

    Enumerates the exact activation thresholds instead of bisecting: the
    envelope equals c iff for every target (i, j) and source (k, l)

        min(c[k][l], n) + n * D >= c[i][j],   D = d(i,k) + d(j,l),

    and each such constraint switches on at a single closed threshold.
    Bounded by max(||c|| / min positive distance, ||c||). Raises when no
    finite level recovers c (distinct cost over a zero-distance pair).
    """
    if not cost.is_bounded:
        raise InfeasibleInput("saturation_index requires a bounded cost")
    _require_nonnegative(cost)
    m, p = cost.shape
    dx = np.asarray(d_x)
    dy = np.asarray(d_y)
    if dx.shape != (m, m) or dy.shape != (p, p):
        raise MissingMetric("metric shapes do not match the cost")
    best = zero(cost.mode)
    c = cost.entries
    for i in range(m):
        for j in range(p):
            target = c[i, j]
            for k in range(m):
                for l in range(p):
                    D = dx[i, k] + dy[j, l]
                    source = c[k, l]
                    if source * (1 + D) >= target:
                        threshold = target / (1 + D)
                    elif D > 0:
                        threshold = (target - source) / D
                    else:
                        raise InfeasibleInput(
                            f"cost differs over a zero-distance pair "
                            f"(({i},{j}) vs ({k},{l})); no finite level "
                            f"recovers it"
                        )
                    if threshold > best:
                        best = threshold
    return best
