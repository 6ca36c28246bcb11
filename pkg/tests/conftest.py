import math

import pytest
from hypothesis import strategies as st

from fracmin.stepfn import INF, Interval, StepFunction
from fracmin.weights import WeightPair

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
maybe_inf = st.one_of(positive, st.just(INF))


@st.composite
def step_functions(draw, tails=None, min_cells=1, max_cells=8, lo=-2.0, hi=2.0):
    """Step functions with breakpoints in [lo, hi]; ``tails`` fixes both tail values."""
    n = draw(st.integers(min_cells, max_cells))
    pts = draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=n + 1, max_size=n + 1,
                        unique=True))
    pts = sorted({round(x, 6) for x in pts})
    if len(pts) != n + 1:
        pts = [lo + (hi - lo) * i / n for i in range(n + 1)]
    vals = draw(st.lists(positive, min_size=n, max_size=n))
    if tails is None:
        lt, rt = draw(maybe_inf), draw(maybe_inf)
    else:
        lt = rt = tails
    return StepFunction(tuple(pts), tuple(vals), lt, rt)


def rel_close(a, b, rtol):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rtol * max(abs(a), abs(b)) or abs(a - b) <= 1e-300


@pytest.fixture
def constants():
    return WeightPair(StepFunction.constant(1.0), StepFunction.constant(1.0))


@pytest.fixture
def two_cell_v():
    return WeightPair(StepFunction.constant(1.0),
                      StepFunction((0.0, 1.0, 2.0), (1.0, 16.0), 1.0, 1.0))


@pytest.fixture
def unit():
    return Interval(0.0, 1.0)
