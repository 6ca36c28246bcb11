"""Fractional one-sided minimal functions of step functions.

For ``mu >= 0`` the forward minimal function is

    m_plus(f)(x) = inf_{h > 0} h ** -(1 + mu) * integral_x^{x+h} f

and the backward one integrates over ``[x - h, x]``.

On a stretch of ``h`` where the running integral is affine, ``F(h) = a + b*h``
with ``b >= 0``, the objective ``F(h) * h ** -(1+mu)`` has derivative of the sign
of ``-mu*b*h - (1+mu)*a``.  It is therefore decreasing (``a >= 0``) or rises and
then falls (``a < 0``), so its minimum over any bounded stretch sits at an end.
The infimum is the minimum over breakpoint offsets plus the ``h -> inf`` limit
of a finite right tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .stepfn import INF, Interval, StepFunction, integrate, reflect

_CHUNK = 1 << 14
# tie-break for strict membership of the sublevel set
STRICT_RTOL = 1e-12


@dataclass(frozen=True)
class Exponents:
    """Order ``mu`` and integrability exponents ``0 < p <= q``."""

    mu: float
    p: float
    q: float

    def __post_init__(self):
        if not (0 <= self.mu < INF):
            raise ValueError(f"mu must satisfy 0 <= mu < inf, got {self.mu}")
        if not (0 < self.p <= self.q < INF):
            raise ValueError(f"need 0 < p <= q < inf, got p={self.p}, q={self.q}")

    def to_dict(self) -> dict:
        return {"mu": self.mu, "p": self.p, "q": self.q}


@dataclass(frozen=True)
class SublevelSet:
    """Two-sided approximation ``inner ⊆ {m < 1/lambda} ∩ window ⊆ outer``."""

    inner: tuple[Interval, ...]
    outer: tuple[Interval, ...]
    refinement: int

    @staticmethod
    def measure(parts: Sequence[Interval]) -> float:
        return math.fsum(I.length for I in parts)


def _check_mu(mu: float):
    if not (0 <= mu < INF):
        raise ValueError(f"mu must be a finite nonnegative number, got {mu}")


def _segment_table(f: StepFunction) -> np.ndarray:
    """``T[i, j]`` = integral of ``f`` from breakpoint ``i`` to breakpoint ``j`` (``j >= i``).

    Each row is a running sum of nonnegative terms starting at ``i``, so no
    differences of prefix sums (and no cancellation) are involved.
    """
    n = len(f.breakpoints)
    c = f.cell_integrals
    table = np.full((n, n), np.nan)
    for i in range(n):
        table[i, i] = 0.0
        if i < n - 1:
            with np.errstate(invalid="ignore"):
                table[i, i + 1:] = np.cumsum(c[i:])
    return table


def _minimal_plus_many(f: StepFunction, mu: float, xs: np.ndarray) -> np.ndarray:
    bp = f.bp
    n = len(bp)
    cur_table = np.concatenate(([f.left_tail], f.vals, [f.right_tail]))
    table = _segment_table(f)
    out = np.empty(len(xs))
    for s in range(0, len(xs), _CHUNK):
        x = xs[s:s + _CHUNK]
        nxt = np.searchsorted(bp, x, side="right")        # first breakpoint > x
        cur = cur_table[nxt]                                # value of f just right of x
        inside = nxt < n
        nxt_c = np.minimum(nxt, n - 1)
        first = np.where(inside, bp[nxt_c] - x, 1.0)
        with np.errstate(invalid="ignore"):
            partial = np.where(inside, cur * first, 0.0)
        j = np.arange(n)
        valid = (j[None, :] >= nxt[:, None]) & inside[:, None]
        h = bp[None, :] - x[:, None]
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            F = partial[:, None] + table[nxt_c[:, None], j[None, :]]
            hv = np.where(valid, h, 1.0)
            # two divisions so that tiny h does not underflow h ** (1 + mu)
            avg = np.where(valid, F / hv / hv ** mu, INF)
        best = avg.min(axis=1) if n else np.full(len(x), INF)
        # running integral up to the last breakpoint (or the x itself, past it)
        reach = np.where(inside, F[np.arange(len(x)), n - 1] if n else 0.0, 0.0)
        rt = f.right_tail
        if rt < INF:
            tail = (0.0 if mu > 0 else rt)
            best = np.where(np.isfinite(reach), np.minimum(best, tail), best)
        best = np.where(np.isnan(best), INF, best)
        out[s:s + _CHUNK] = best
    return out


def minimal_plus(f: StepFunction, mu: float, x: float) -> float:
    """Exact value of the forward minimal function of order ``mu`` at ``x``."""
    _check_mu(mu)
    return float(_minimal_plus_many(f, mu, np.array([float(x)]))[0])


def minimal_minus(f: StepFunction, mu: float, x: float) -> float:
    """Backward minimal function, computed as the forward one of the reflection."""
    _check_mu(mu)
    return minimal_plus(reflect(f), mu, -x)


def minimal_plus_grid(f: StepFunction, mu: float, grid) -> np.ndarray:
    """Elementwise :func:`minimal_plus` over ``grid``."""
    _check_mu(mu)
    return _minimal_plus_many(f, mu, np.asarray(grid, dtype=float).ravel())


def minimal_plus_oracle(f: StepFunction, mu: float, x: float, h_max: float, n: int) -> float:
    """Brute-force minimum of the averages over a finite set of ``h`` in ``(0, h_max]``.

    The ``h`` set is ``n`` geometrically spaced values plus every breakpoint
    offset that lands in ``(0, h_max]``; each average is an independent call to
    :func:`integrate`.  The result is an upper bound on the true infimum and is
    exact when ``f`` has ``+inf`` tails and ``h_max`` reaches its last breakpoint.
    """
    _check_mu(mu)
    if not h_max > 0:
        raise ValueError(f"h_max must be positive, got {h_max}")
    if n < 2:
        raise ValueError("n must be at least 2")
    span = max(h_max, 1.0)
    ends = {x + h for h in np.geomspace(span * 1e-9, h_max, n).tolist()}
    ends.update(b for b in f.breakpoints if 0 < b - x <= h_max)
    ends.add(x + h_max)
    best = INF
    for end in sorted(ends):
        # divide by the length actually integrated, not the nominal h
        h = end - x
        if h <= 0:
            continue
        val = integrate(f, Interval(x, end))
        if val < INF:
            scale = h ** mu
            # the average overflows the double range when h ** mu underflows
            best = min(best, val / h / scale if scale > 0 else INF)
    return best


def _merge(flags: np.ndarray, edges: np.ndarray) -> tuple[Interval, ...]:
    runs = []
    i = 0
    n = len(flags)
    while i < n:
        if flags[i]:
            j = i
            while j + 1 < n and flags[j + 1]:
                j += 1
            runs.append(Interval(float(edges[i]), float(edges[j + 1])))
            i = j + 1
        else:
            i += 1
    return tuple(runs)


def sublevel_set(f: StepFunction, mu: float, lam: float, window: Interval,
                 refinement: int) -> SublevelSet:
    """Approximate ``{x : m_plus(f)(x) < 1/lam}`` inside ``window`` by subcell sampling.

    The window is cut into ``refinement * max(1, cells of f)`` equal subcells;
    a subcell is in ``inner`` if both ends and the midpoint are strictly below
    the level and in ``outer`` if any of the three is.
    """
    _check_mu(mu)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if refinement < 1:
        raise ValueError("refinement must be a positive integer")
    n = refinement * max(1, f.n_cells)
    edges = window.a + window.length * (np.arange(n + 1) / n)
    edges[-1] = window.b
    mids = 0.5 * (edges[:-1] + edges[1:])
    m_edges = minimal_plus_grid(f, mu, edges)
    m_mids = minimal_plus_grid(f, mu, mids)
    level = 1.0 / lam
    strict = level * (1.0 - STRICT_RTOL)
    inner = (m_edges[:-1] < strict) & (m_edges[1:] < strict) & (m_mids < strict)
    outer = (m_edges[:-1] < level) | (m_edges[1:] < level) | (m_mids < level)
    return SublevelSet(_merge(inner, edges), _merge(outer, edges), refinement)
