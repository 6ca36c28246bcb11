"""Weight pairs and the ratio functionals behind the one-sided weight classes.

Every class is tested on a finite family of intervals, so the reported
constants are lower bounds for the supremum over all intervals of the line.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .minimal import Exponents, minimal_plus_grid
from .stepfn import (INF, Interval, SchemaError, StepFunction, integrate, power_transform,
                     restrict)

DEFAULT_TOL = 1e-6
DEFAULT_REFINEMENT = 4
MAX_QUAD_CELLS = 1 << 20
_LOG_HI = 1e100
_LOG_LO = 1e-100


class QuadratureError(RuntimeError):
    """Midpoint quadrature hit its cell cap before reaching the tolerance."""

    def __init__(self, estimate: float, previous: float, cells: int, tol: float):
        super().__init__(
            f"quadrature did not converge: {cells} cells, last estimates "
            f"{previous!r} -> {estimate!r}, tol {tol}"
        )
        self.estimate = estimate
        self.cells = cells


class Kind(str, enum.Enum):
    WPQ = "Wpq"
    WPQ_ETA = "WpqEta"
    SAWYER = "SawyerStar"


@dataclass(frozen=True)
class WeightPair:
    """Weights ``(U, V)``; every finite value must be strictly positive."""

    U: StepFunction
    V: StepFunction

    def __post_init__(self):
        for name, w in (("U", self.U), ("V", self.V)):
            if not w.is_weight():
                raise ValueError(f"{name} has a zero value; weights must be positive")

    @property
    def breakpoints(self) -> list[float]:
        return sorted(set(self.U.breakpoints) | set(self.V.breakpoints))

    @property
    def hull(self) -> Interval:
        bp = self.breakpoints
        if len(bp) == 1:
            return Interval(bp[0] - 0.5, bp[0] + 0.5)
        return Interval(bp[0], bp[-1])

    def scaled(self, t: float, s: float) -> "WeightPair":
        from .stepfn import scale
        return WeightPair(scale(self.U, t), scale(self.V, s))

    def to_dict(self) -> dict:
        return {"U": self.U.to_dict(), "V": self.V.to_dict()}

    @classmethod
    def from_dict(cls, d: Any) -> "WeightPair":
        if not isinstance(d, dict):
            raise SchemaError("<root>", "expected a JSON object with keys U and V")
        for key in ("U", "V"):
            if key not in d:
                raise SchemaError(key, "missing")
        U = StepFunction.from_dict(d["U"], "U")
        V = StepFunction.from_dict(d["V"], "V")
        try:
            return cls(U, V)
        except ValueError as exc:
            raise SchemaError("U" if not U.is_weight() else "V", str(exc)) from None


@dataclass
class RatioReport:
    """A ratio together with the interval (and parameters) that produced it."""

    ratio: float
    witness: Interval
    params: Exponents
    kind: str
    sub: Interval | None = None
    lhs: float = math.nan
    rhs: float = math.nan
    family: dict | None = None
    lower_bound: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "ratio": _num(self.ratio),
            "witness": self.witness.to_dict(),
            "params": self.params.to_dict(),
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
        }
        if self.sub is not None:
            d["sub"] = self.sub.to_dict()
        if self.family is not None:
            d["family"] = self.family
            d["lower_bound"] = self.lower_bound
        if self.extra:
            d["extra"] = {k: _num(v) if isinstance(v, float) else v for k, v in self.extra.items()}
        return d


def _num(v: float):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def power_product(parts: Iterable[tuple[float, float]]) -> float:
    """``prod(base ** exp)`` over nonnegative bases, in log space when the range is extreme."""
    parts = list(parts)
    if all(_LOG_LO <= b <= _LOG_HI for b, _ in parts):
        out = 1.0
        for b, e in parts:
            out *= b ** e
        if 0 < out < INF:
            return out
    total = 0.0
    for b, e in parts:
        if e == 0:
            continue
        lb = -INF if b == 0 else (INF if b == INF else math.log(b))
        total += e * lb
    if math.isnan(total):
        raise ValueError("indeterminate power product (0 * inf)")
    if total > 709.0:
        return INF
    return math.exp(total)


def omega(V: StepFunction, p: float) -> StepFunction:
    """``V ** (1 / (p + 1))``."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    return power_transform(V, 1.0 / (p + 1.0))


@dataclass(frozen=True)
class PlusMinusDecomposition:
    """Points ``x_0 = a``, ``x_k = (b + x_{k-1}) / 2`` and the derived subintervals."""

    base: Interval
    points: tuple[float, ...]
    minus: tuple[Interval, ...]
    plus: tuple[Interval, ...]
    full: tuple[Interval, ...]

    @property
    def depth(self) -> int:
        return len(self.minus)

    def tail(self, k: int) -> Interval:
        """``[x_k, b]``, what is left of the base after the first ``k`` minus pieces."""
        return Interval(self.points[k], self.base.b)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "points": list(self.points),
            "minus": [I.to_dict() for I in self.minus],
            "plus": [I.to_dict() for I in self.plus],
            "full": [I.to_dict() for I in self.full],
        }


def plus_minus(I: Interval, depth: int) -> PlusMinusDecomposition:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    pts = [I.a]
    for _ in range(depth + 1):
        pts.append(0.5 * (I.b + pts[-1]))
    minus = tuple(Interval(pts[k - 1], pts[k]) for k in range(1, depth + 1))
    plus = tuple(Interval(pts[k], pts[k + 1]) for k in range(1, depth + 1))
    full = tuple(Interval(pts[k - 1], pts[k + 1]) for k in range(1, depth + 1))
    return PlusMinusDecomposition(I, tuple(pts), minus, plus, full)


def left_part(I: Interval, eta: float) -> Interval:
    return Interval(I.a, I.a + eta * I.length)


def _structural_parts(pair: WeightPair, e: Exponents, I: Interval) -> list[tuple[float, float]]:
    avg = integrate(omega(pair.V, e.p), I) / I.length
    return [(I.length, -(1.0 + (e.mu - 1.0 / e.p) * e.q)), (avg, (e.p + 1.0) * e.q / e.p)]


def structural_rhs(pair: WeightPair, e: Exponents, I: Interval) -> float:
    """``|I| ** -(1 + (mu - 1/p) q) * (average of omega over I) ** ((p+1) q / p)``."""
    return power_product(_structural_parts(pair, e, I))


def _over(lhs: float, parts: list[tuple[float, float]]) -> float:
    # lhs / prod(b ** e), without forming the possibly overflowing denominator
    if lhs == 0:
        return 0.0
    return power_product([(lhs, 1.0), *((b, -x) for b, x in parts)])


def wpq_ratio(pair: WeightPair, e: Exponents, I: Interval) -> RatioReport:
    """Average of ``U`` over the left half of ``I`` against the structural right side."""
    half = left_part(I, 0.5)
    lhs = integrate(pair.U, half) / half.length
    parts = _structural_parts(pair, e, I)
    return RatioReport(_over(lhs, parts), I, e, Kind.WPQ.value, sub=half, lhs=lhs,
                       rhs=power_product(parts))


def eta_factor(e: Exponents, eta: float) -> float:
    """``1 / (eta * (1 - eta) ** ((1 + mu) q))``."""
    return 1.0 / (eta * (1.0 - eta) ** ((1.0 + e.mu) * e.q))


def wpq_eta_ratio(pair: WeightPair, e: Exponents, I: Interval, eta: float) -> RatioReport:
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    sub = left_part(I, eta)
    lhs = integrate(pair.U, sub) / sub.length
    parts = [(eta_factor(e, eta), 1.0), *_structural_parts(pair, e, I)]
    rep = RatioReport(_over(lhs, parts), I, e, Kind.WPQ_ETA.value, sub=sub, lhs=lhs,
                      rhs=power_product(parts))
    rep.extra["eta"] = eta
    return rep


def midpoint_integral(func: Callable[[np.ndarray], np.ndarray], knots: Sequence[float],
                      tol: float = DEFAULT_TOL, cap: int = MAX_QUAD_CELLS) -> tuple[float, int]:
    """Locally adaptive composite midpoint rule on ``knots``.

    Every cell carries its one-point and two-point midpoint estimates.  While
    the summed discrepancy exceeds ``tol`` times the estimate, each cell whose
    discrepancy is above its length-proportional share is halved.  Returns
    ``(estimate, cells)``; raises :class:`QuadratureError` past ``cap`` cells.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    knots = np.asarray(knots, dtype=float)
    split = 4
    widths = np.diff(knots)
    lo = (knots[:-1, None] + widths[:, None] * (np.arange(split) / split)[None, :]).ravel()
    w = np.repeat(widths / split, split)
    total_width = float(widths.sum())
    y_mid = func(lo + 0.5 * w)
    prev = math.nan
    while True:
        y_l = func(lo + 0.25 * w)
        y_r = func(lo + 0.75 * w)
        if np.isinf(y_mid).any() or np.isinf(y_l).any() or np.isinf(y_r).any():
            return INF, len(w)
        fine = 0.5 * w * (y_l + y_r)
        diff = np.abs(fine - w * y_mid)
        est = math.fsum(fine.tolist())
        err = math.fsum(diff.tolist())
        if err <= tol * abs(est):
            return est, 2 * len(w)
        refine = diff > tol * abs(est) * (w / total_width)
        n_ref = int(refine.sum())
        if len(w) + n_ref > cap // 2:
            raise QuadratureError(est, prev, 2 * len(w), tol)
        prev = est
        keep = ~refine
        half = 0.5 * w[refine]
        lo = np.concatenate((lo[keep], lo[refine], lo[refine] + half))
        y_mid = np.concatenate((y_mid[keep], y_l[refine], y_r[refine]))
        w = np.concatenate((w[keep], half, half))


def testing_integral(U: StepFunction, f: StepFunction, mu: float, q: float, window: Interval,
                     tol: float = DEFAULT_TOL) -> float:
    """``integral over window of U / m_plus(f) ** q`` with ``1 / inf = 0``."""
    knots = sorted({window.a, window.b}
                   | {x for x in (*U.breakpoints, *f.breakpoints) if window.a < x < window.b})

    def integrand(xs):
        m = minimal_plus_grid(f, mu, xs)
        u = U.evaluate(xs)
        with np.errstate(divide="ignore"):
            return u / m ** q

    value, _ = midpoint_integral(integrand, knots, tol)
    return value


def sawyer_ratio(pair: WeightPair, e: Exponents, I: Interval, tol: float = DEFAULT_TOL) -> RatioReport:
    """Testing-condition ratio: ``int_I U / m(omega / chi_I) ** q`` over ``omega(I) ** (q/p)``."""
    w = omega(pair.V, e.p)
    lhs = testing_integral(pair.U, restrict(w, I), e.mu, e.q, I, tol)
    parts = [(integrate(w, I), e.q / e.p)]
    return RatioReport(_over(lhs, parts), I, e, Kind.SAWYER.value, lhs=lhs,
                       rhs=power_product(parts))


def family_grid(window: Interval, pair: WeightPair, refinement: int) -> list[float]:
    if refinement < 1:
        raise ValueError("refinement must be a positive integer")
    knots = sorted({window.a, window.b}
                   | {x for x in pair.breakpoints if window.a < x < window.b})
    grid = []
    for lo, hi in zip(knots, knots[1:]):
        grid.extend(lo + (hi - lo) * (i / refinement) for i in range(refinement))
    grid.append(knots[-1])
    return grid


def interval_family(window: Interval, pair: WeightPair, refinement: int = DEFAULT_REFINEMENT) -> list[Interval]:
    """All intervals with endpoints on the breakpoint-refined grid of ``window``."""
    grid = family_grid(window, pair, refinement)
    return [Interval(grid[i], grid[j]) for i in range(len(grid)) for j in range(i + 1, len(grid))]


def class_constant(kind: Kind | str, pair: WeightPair, e: Exponents, family: Sequence[Interval],
                   eta: float | None = None, tol: float = DEFAULT_TOL,
                   descriptor: dict | None = None) -> RatioReport:
    """Largest ratio over ``family`` (first maximiser wins); a lower bound on the class constant."""
    kind = Kind(kind)
    if not family:
        raise ValueError("interval family is empty")
    if kind is Kind.WPQ_ETA and eta is None:
        raise ValueError("WpqEta needs eta")
    best = None
    for I in family:
        if kind is Kind.WPQ:
            rep = wpq_ratio(pair, e, I)
        elif kind is Kind.WPQ_ETA:
            rep = wpq_eta_ratio(pair, e, I, eta)
        else:
            rep = sawyer_ratio(pair, e, I, tol)
        if best is None or rep.ratio > best.ratio:
            best = rep
    best.family = descriptor or {"size": len(family)}
    best.lower_bound = True
    return best
