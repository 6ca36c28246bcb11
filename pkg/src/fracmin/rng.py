"""SplitMix64 stream and the random instance generator used by the harness.

SplitMix64 is tiny and fully specified, so the same seed reproduces the same
instances in any language.  Reference outputs for seed 1234567:
6457827717110365317, 3203168211198807973, 9817491932198370423, ...
"""

from __future__ import annotations

import math
from typing import Sequence

from .minimal import Exponents
from .stepfn import INF, Interval, StepFunction
from .weights import WeightPair

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

MU_CHOICES = (0.0, 0.5, 1.0, 2.0)
PQ_CHOICES = ((1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (0.5, 1.0))
VALUE_RANGE = (1e-3, 1e3)
CELL_RANGE = (2, 16)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform double in ``[lo, hi)`` from the top 53 bits."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0 ** -53)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` (modulo bias is below 2**-50 here)."""
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, items: Sequence):
        return items[self.integer(0, len(items) - 1)]

    def log_uniform(self, lo: float, hi: float) -> float:
        return math.exp(self.uniform(math.log(lo), math.log(hi)))

    def spawn(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def random_breakpoints(rng: SplitMix64, window: Interval, cells: int) -> list[float]:
    pts = {window.a, window.b}
    while len(pts) < cells + 1:
        pts.add(rng.uniform(window.a, window.b))
    return sorted(pts)


def random_step(rng: SplitMix64, window: Interval, cells: int | None = None,
                tails: float | None = None, value_range=VALUE_RANGE) -> StepFunction:
    """Step function on ``window`` with log-uniform values.

    ``tails=None`` draws two finite log-uniform tail values; otherwise both
    tails take the given value (``inf`` for the ``f`` instances of the harness).
    """
    if cells is None:
        cells = rng.integer(*CELL_RANGE)
    bp = random_breakpoints(rng, window, cells)
    vals = [rng.log_uniform(*value_range) for _ in range(cells)]
    if tails is None:
        lt, rt = rng.log_uniform(*value_range), rng.log_uniform(*value_range)
    else:
        lt = rt = tails
    return StepFunction(tuple(bp), tuple(vals), lt, rt)


def random_pair(rng: SplitMix64, window: Interval = Interval(0.0, 1.0),
                cells: int | None = None) -> WeightPair:
    return WeightPair(random_step(rng, window, cells), random_step(rng, window, cells))


def random_function(rng: SplitMix64, window: Interval = Interval(0.0, 1.0),
                    cells: int | None = None) -> StepFunction:
    return random_step(rng, window, cells, tails=INF)


def random_exponents(rng: SplitMix64) -> Exponents:
    mu = rng.choice(MU_CHOICES)
    p, q = rng.choice(PQ_CHOICES)
    return Exponents(mu, p, q)
