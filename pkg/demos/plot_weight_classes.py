"""
Weight-class constants on a finite interval family
===================================================

Compute the left-part ratio, its eta variant and the testing ratio for a
pair of step weights, and take their maxima over a family of intervals.
The maxima are lower bounds for the true class constants.
"""

from fracmin import (Exponents, Interval, Kind, StepFunction, WeightPair, class_constant,
                     interval_family, plus_minus, sawyer_ratio, wpq_eta_ratio, wpq_ratio)
from fracmin.rng import SplitMix64, random_pair

e = Exponents(mu=0.0, p=1.0, q=1.0)

# U = 1 and V jumping from 1 to 16 at x = 1: omega = sqrt(V) averages 2.5 on [0, 2]
pair = WeightPair(StepFunction.constant(1.0), StepFunction((0.0, 1.0, 2.0), (1.0, 16.0), 1.0, 1.0))
print("Wpq ratio on [0,2]      :", wpq_ratio(pair, e, Interval(0, 2)).ratio)
print("eta = 1/4 ratio on [0,2]:", wpq_eta_ratio(pair, e, Interval(0, 2), 0.25).ratio)

family = interval_family(Interval(0, 2), pair, refinement=4)
rep = class_constant(Kind.WPQ, pair, e, family)
print(f"family of {len(family)} intervals: constant >= {rep.ratio:.4f} at "
      f"[{rep.witness.a}, {rep.witness.b}]")

# the testing ratio of the constant pair is 1/(mu q + 1) on the unit interval
ones = WeightPair(StepFunction.constant(1.0), StepFunction.constant(1.0))
for mu in (0.0, 0.5, 1.0, 2.0):
    r = sawyer_ratio(ones, Exponents(mu, 1.0, 2.0), Interval(0, 1), tol=1e-9).ratio
    print(f"mu={mu}: testing ratio {r:.9f}  (closed form {1 / (2 * mu + 1):.9f})")

# a seeded random pair
rnd = random_pair(SplitMix64(7))
e2 = Exponents(0.5, 1.0, 2.0)
fam = interval_family(Interval(0, 1), rnd, refinement=1)
for kind in (Kind.WPQ, Kind.SAWYER):
    print(kind.value, "constant >=", class_constant(kind, rnd, e2, fam).ratio)

# the halving points used by the local arguments
print("points of [0,1]:", plus_minus(Interval(0, 1), 4).points)
