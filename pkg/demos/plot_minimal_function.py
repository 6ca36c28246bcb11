"""
The one-sided minimal function of a step function
==================================================

Evaluate the forward minimal function exactly, compare it with a
brute-force scan over averaging lengths, and look at its sublevel sets.
"""

import numpy as np

from fracmin import (Interval, StepFunction, minimal_minus, minimal_plus, minimal_plus_grid,
                     minimal_plus_oracle, sublevel_set)

# f = 2 on [0, 1], 1 on [1, 2], infinite outside
f = StepFunction.on_interval([0, 1, 2], [2, 1])

# at x = 0 the candidate lengths are h = 1 (average 2) and h = 2 (average 3/2)
print("m_0(f)(0)        =", minimal_plus(f, 0.0, 0.0))
print("brute force      =", minimal_plus_oracle(f, 0.0, 0.0, h_max=2.0, n=1000))

# the backward version looks left instead of right
print("m_0^-(f)(2)      =", minimal_minus(f, 0.0, 2.0))

# on a grid, for a few orders
xs = np.linspace(0.0, 1.9, 8)
for mu in (0.0, 0.5, 1.0):
    print(f"mu={mu}:", np.round(minimal_plus_grid(f, mu, xs), 4))

# a finite right tail lets the averages escape to infinity:
# for mu > 0 the infimum is 0, for mu = 0 it is the tail value
g = StepFunction((0.0, 1.0), (5.0,), 1.0, 0.25)
print("finite tail, mu=0:", minimal_plus(g, 0.0, 0.0), " mu=1:", minimal_plus(g, 1.0, 0.0))

# sublevel set {m < 1.25}: it starts where (3 - 2x)/(2 - x) drops below 1.25, at x = 2/3
for r in (1, 4, 32):
    s = sublevel_set(f, 0.0, 1 / 1.25, Interval(0.0, 2.0), r)
    print(f"refinement {r:2d}: inner {[(I.a, I.b) for I in s.inner]}, "
          f"outer {[(I.a, I.b) for I in s.outer]}")
