"""
Running the inequality harness
==============================

Each check instantiates one implication with explicit constants and
reports left side, right side and slack.  Exact checks must pass;
envelope checks may additionally carry flags.
"""

from collections import Counter

from fracmin import Exponents, Interval
from fracmin.rng import SplitMix64, random_function, random_pair
from fracmin.theorems import (check_fmt2_sufficiency, check_fmt5, constants_pair, log_lambdas,
                              run_suite)

# one seeded pass over every suite
results = run_suite("all", trials=5, seed=1)
tally = Counter((r.name, r.passed, r.flagged) for r in results)
for (name, passed, flagged), n in sorted(tally.items()):
    print(f"{name:18s} passed={passed!s:5s} flagged={flagged!s:5s} x{n}")

# nested intervals: for the constant pair the testing integrals shrink like |K|^(1 + mu q)
r = check_fmt5(constants_pair(), Exponents(1.0, 1.0, 1.0), Interval(0, 1), shrink=0.5, steps=6)
print("T_l:", [round(t, 6) for t in r.details["T"]])

# the per-piece estimate inside the weak-type argument is advisory
rng = SplitMix64(3)
pair, f = random_pair(rng), random_function(rng)
e = Exponents(1.0, 1.0, 2.0)
res = check_fmt2_sufficiency(pair, e, f, log_lambdas(f, e.mu), Interval(0, 1))
print("weak bound passed:", res.passed, "| flags:", len(res.flags))
print("piece constant needed vs stated:",
      round(res.details["piece_constant_needed"], 3), res.details["piece_constant_stated"])
