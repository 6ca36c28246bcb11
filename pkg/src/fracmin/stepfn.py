"""Nonnegative extended-real step functions on the real line.

A :class:`StepFunction` is constant on each cell ``[x[i-1], x[i])`` and on the
two unbounded tails.  Values are floats in ``[0, inf]``; ``math.inf`` plays the
role of the extended real ``+inf``.  Integrals follow the usual measure-theory
conventions: a zero-length stretch contributes nothing, a positive-length
stretch of ``+inf`` integrates to ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Sequence

import numpy as np

INF = math.inf


class SchemaError(ValueError):
    """Raised when a JSON document does not describe a valid object."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class Interval:
    """Finite closed interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    def contains(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b

    def shift(self, t: float) -> "Interval":
        return Interval(self.a + t, self.b + t)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}

    def __iter__(self):
        yield self.a
        yield self.b


def _check_ext(v: float, what: str) -> float:
    v = float(v)
    if math.isnan(v) or v < 0:
        raise ValueError(f"{what} must be a nonnegative extended real, got {v}")
    return v


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant ``[0, inf]``-valued function with finitely many breakpoints.

    ``values[i]`` is the value on ``[breakpoints[i], breakpoints[i+1])``;
    ``left_tail`` holds on ``(-inf, breakpoints[0])`` and ``right_tail`` on
    ``[breakpoints[-1], inf)``.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    left_tail: float
    right_tail: float

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        vals = tuple(_check_ext(v, "cell value") for v in self.values)
        if not bp:
            raise ValueError("a step function needs at least one breakpoint")
        if len(vals) != len(bp) - 1:
            raise ValueError(
                f"expected {len(bp) - 1} cell values for {len(bp)} breakpoints, got {len(vals)}"
            )
        if not all(math.isfinite(x) for x in bp):
            raise ValueError("breakpoints must be finite")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "left_tail", _check_ext(self.left_tail, "left_tail"))
        object.__setattr__(self, "right_tail", _check_ext(self.right_tail, "right_tail"))

    @classmethod
    def constant(cls, c: float, at: float = 0.0) -> "StepFunction":
        return cls((at,), (), c, c)

    @classmethod
    def on_interval(cls, breakpoints: Sequence[float], values: Sequence[float],
                    tail: float = INF) -> "StepFunction":
        """Cells given explicitly, both tails equal to ``tail`` (``+inf`` by default)."""
        return cls(tuple(breakpoints), tuple(values), tail, tail)

    # numpy views used by the integration and minimal-function kernels
    @cached_property
    def bp(self) -> np.ndarray:
        return np.asarray(self.breakpoints, dtype=float)

    @cached_property
    def vals(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @cached_property
    def cell_integrals(self) -> np.ndarray:
        # breakpoints are strictly increasing, so inf * width never meets width == 0
        return self.vals * np.diff(self.bp)

    @property
    def n_cells(self) -> int:
        return len(self.values)

    @property
    def support_hull(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1])

    def is_weight(self) -> bool:
        """True if every finite value (cells and tails) is strictly positive."""
        return all(v > 0 for v in (*self.values, self.left_tail, self.right_tail))

    def __call__(self, x: float) -> float:
        i = int(np.searchsorted(self.bp, x, side="right")) - 1
        if i < 0:
            return self.left_tail
        if i >= self.n_cells:
            return self.right_tail
        return self.values[i]

    def evaluate(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        table = np.concatenate(([self.left_tail], self.vals, [self.right_tail]))
        return table[np.searchsorted(self.bp, xs, side="right")]

    def to_dict(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "values": [_ext_to_json(v) for v in self.values],
            "left_tail": _ext_to_json(self.left_tail),
            "right_tail": _ext_to_json(self.right_tail),
        }

    @classmethod
    def from_dict(cls, d: Any, where: str = "") -> "StepFunction":
        prefix = f"{where}." if where else ""
        if not isinstance(d, dict):
            raise SchemaError(where or "<root>", "expected a JSON object")
        for key in ("breakpoints", "values", "left_tail", "right_tail"):
            if key not in d:
                raise SchemaError(prefix + key, "missing")
        if not isinstance(d["breakpoints"], list) or not d["breakpoints"]:
            raise SchemaError(prefix + "breakpoints", "expected a nonempty list of numbers")
        if not isinstance(d["values"], list):
            raise SchemaError(prefix + "values", "expected a list")
        bp = []
        for i, x in enumerate(d["breakpoints"]):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SchemaError(f"{prefix}breakpoints[{i}]", f"not a number: {x!r}")
            bp.append(float(x))
        vals = [_ext_from_json(v, f"{prefix}values[{i}]") for i, v in enumerate(d["values"])]
        lt = _ext_from_json(d["left_tail"], prefix + "left_tail")
        rt = _ext_from_json(d["right_tail"], prefix + "right_tail")
        try:
            return cls(tuple(bp), tuple(vals), lt, rt)
        except ValueError as exc:
            raise SchemaError(where or "<root>", str(exc)) from None


def _ext_to_json(v: float):
    return "inf" if v == INF else v


def _ext_from_json(v: Any, field: str) -> float:
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(field, f"expected a nonnegative number or \"inf\", got {v!r}")
    v = float(v)
    if math.isnan(v) or v < 0:
        raise SchemaError(field, f"negative value {v}")
    return v


def _overlaps(f: StepFunction, a: float, b: float) -> list[tuple[float, float]]:
    """(value, overlap length) pairs for every piece of ``f`` meeting ``[a, b]``."""
    edges = [-INF, *f.breakpoints, INF]
    pieces = [f.left_tail, *f.values, f.right_tail]
    out = []
    lo = int(np.searchsorted(f.bp, a, side="right"))
    hi = int(np.searchsorted(f.bp, b, side="left"))
    for i in range(lo, hi + 1):
        width = min(b, edges[i + 1]) - max(a, edges[i])
        if width > 0:
            out.append((pieces[i], width))
    return out


def integrate(f: StepFunction, interval: Interval) -> float:
    """Exact integral of ``f`` over ``interval``, ``+inf`` on any infinite stretch."""
    terms = []
    for v, width in _overlaps(f, interval.a, interval.b):
        if v == INF:
            return INF
        terms.append(v * width)
    return math.fsum(terms)


def integrate_line(f: StepFunction) -> float:
    """Integral over the whole real line."""
    if f.left_tail > 0 or f.right_tail > 0:
        return INF
    if np.isinf(f.cell_integrals).any():
        return INF
    return math.fsum(f.cell_integrals)


def restrict(f: StepFunction, interval: Interval) -> StepFunction:
    """``f`` on ``interval`` and ``+inf`` elsewhere (the quotient ``f / chi_I``)."""
    a, b = interval
    inner = [x for x in f.breakpoints if a < x < b]
    bp = [a, *inner, b]
    mids = [0.5 * (lo + hi) for lo, hi in zip(bp, bp[1:])]
    return StepFunction(tuple(bp), tuple(f(m) for m in mids), INF, INF)


def _pow(v: float, e: float) -> float:
    if v == INF:
        return INF if e > 0 else 0.0
    if v == 0.0 and e < 0:
        raise ValueError("cannot raise a zero value to a negative power")
    return v ** e


def power_transform(f: StepFunction, e: float) -> StepFunction:
    """Pointwise ``f ** e`` with ``inf ** e = inf`` (e > 0) or ``0`` (e < 0)."""
    if e == 0:
        raise ValueError("exponent must be nonzero")
    return StepFunction(f.breakpoints, tuple(_pow(v, e) for v in f.values),
                        _pow(f.left_tail, e), _pow(f.right_tail, e))


def scale(f: StepFunction, c: float) -> StepFunction:
    """``c * f`` for finite ``c > 0``."""
    if not (0 < c < INF):
        raise ValueError(f"scale factor must be finite and positive, got {c}")
    return StepFunction(f.breakpoints, tuple(c * v for v in f.values),
                        c * f.left_tail, c * f.right_tail)


def reflect(f: StepFunction) -> StepFunction:
    """``g(t) = f(-t)``."""
    return StepFunction(tuple(-x for x in reversed(f.breakpoints)), tuple(reversed(f.values)),
                        f.right_tail, f.left_tail)


def affine(f: StepFunction, s: float, t: float) -> StepFunction:
    """``g(x) = f(s*x + t)`` for ``s > 0``."""
    if not s > 0:
        raise ValueError(f"dilation factor must be positive, got {s}")
    if s == 1 and t == 0:
        return f
    return StepFunction(tuple((x - t) / s for x in f.breakpoints), f.values,
                        f.left_tail, f.right_tail)


def combine(f: StepFunction, g: StepFunction, op: Callable[[float, float], float]) -> StepFunction:
    """Cellwise ``op(f, g)`` on the common refinement of the two breakpoint sets."""
    bp = sorted(set(f.breakpoints) | set(g.breakpoints))
    mids = [0.5 * (lo + hi) for lo, hi in zip(bp, bp[1:])]
    return StepFunction(tuple(bp), tuple(op(f(m), g(m)) for m in mids),
                        op(f.left_tail, g.left_tail), op(f.right_tail, g.right_tail))


def pointwise_le(f: StepFunction, g: StepFunction) -> bool:
    """True if ``f <= g`` everywhere."""
    diff = combine(f, g, lambda u, v: 0.0 if u <= v else 1.0)
    return diff.left_tail == 0 and diff.right_tail == 0 and not any(diff.values)
