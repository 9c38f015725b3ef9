"""Lipschitz envelopes climbing back to the original cost.

The spike cost [[0, 10], [10, 0]] under the discrete metric is the
textbook case: with mass forced across the spike, the regularized value
climbs linearly in n and saturates exactly at n = 10.
"""

from fractions import Fraction as F

from otlab import envelope_schedule, lipschitz_envelope, make_instance, saturation_index

discrete = [[0, 1], [1, 0]]
forced = make_instance(
    [[0, 10], [10, 0]], [1, 0], [0, 1], metric_x=discrete, metric_y=discrete
)

dx, dy = forced.space_x.metric, forced.space_y.metric
print("cost:", forced.cost.entries.tolist())
for n in (1, 2, 5, 10):
    print(f"c_{n}: ", lipschitz_envelope(forced.cost, dx, dy, n).entries.tolist())

n_star = saturation_index(forced.cost, dx, dy)
print("\nsaturation level n* =", n_star, " (c_n == c exactly from here on)")

sched = envelope_schedule(forced, [1, 2, 5, 10, 20])
print("\n  n    value_n")
for level in sched.levels:
    print(f"  {str(level.n):4} {level.value}")
print("limit value:", sched.limit_value)
print("first listed level matching the limit:", sched.saturation_level)

# free diagonal: the same spike with uniform marginals costs nothing at
# every level, so the chain is flat at zero
free = make_instance(
    [[0, 10], [10, 0]], [F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)],
    metric_x=discrete, metric_y=discrete,
)
flat = envelope_schedule(free, [1, 2, 5, 10])
print("\nuniform marginals:", [lv.value for lv in flat.levels], "-> limit", flat.limit_value)
